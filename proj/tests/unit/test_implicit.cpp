#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fuzzyfp/errors.hpp"
#include "fuzzyfp/implicit.hpp"

using namespace fuzzyfp;

namespace {

PsiParams with_k(double k) {
    PsiParams p;
    p.k = k;
    return p;
}

PsiParams with_delta(Gauge1 d) {
    PsiParams p;
    p.delta = std::move(d);
    return p;
}

// I(u) for density 1: the mass of [0, 1-u].
double I_unit(double u) { return 1.0 - u; }

}  // namespace

TEST(Psi, SpotValues) {
    EXPECT_NEAR(psi_eval(make_psi(PsiExample::ex2_2, with_k(0.5)), 0.8, 0.2, 0.3, 0.4), 0.7, 1e-15);
    EXPECT_NEAR(psi_eval(make_psi(PsiExample::ex2_1, with_delta([](double u) { return u / 2; })), 0.7, 0.2, 0.6, 0.4),
                0.4, 1e-15);
    EXPECT_NEAR(psi_eval(make_psi(PsiExample::ex2_1, with_delta([](double u) { return u / 2; })), 0.6, 0.4, 0.2, 0.2),
                0.4, 1e-15);
    EXPECT_NEAR(psi_eval(make_psi(PsiExample::ex2_4, with_k(0.5)), 0.9, 0.4, 0.3, 0.6), 0.9 - 0.2 - 0.3, 1e-15);

    PsiParams p5;
    p5.a = 0.5;
    p5.density = Density::constant(1.0);
    // I(0.5) - 0.5 max{I(0.5), I(0.5), I(0.5)} = 0.5 - 0.25.
    EXPECT_NEAR(psi_eval(make_psi(PsiExample::ex2_5, p5), 0.5, 0.5, 0.5, 0.5), 0.25, 1e-10);

    PsiParams p6;
    p6.delta = [](double u) { return u / 2; };
    p6.density = Density::constant(1.0);
    // I(0) - delta(max{I(1), I(1), I(1)}) = 1 - 0.
    EXPECT_NEAR(psi_eval(make_psi(PsiExample::ex2_6, p6), 0.0, 1.0, 1.0, 1.0), 1.0, 1e-10);
}

TEST(Psi, Ex23UsesThreeArgumentGauge) {
    PsiParams p;
    p.delta3 = [](double a, double b, double c) { return std::max({a, b, c}) / 3; };
    const PsiFunction psi = make_psi(PsiExample::ex2_3, p);
    EXPECT_NEAR(psi_eval(psi, 0.9, 0.3, 0.6, 0.0), 0.7, 1e-15);
}

TEST(Psi, IntegralBackedMatchesOracle) {
    PsiParams p;
    p.a = 0.25;
    p.density = Density::constant(1.0);
    const PsiFunction psi = make_psi(PsiExample::ex2_5, p);
    ASSERT_TRUE(psi.integral_backed());
    for (double u1 : {0.0, 0.3, 0.9})
        for (double u2 : {0.1, 0.6}) {
            const double oracle = I_unit(u1) - 0.25 * std::max({I_unit(u2), I_unit(0.2), I_unit(0.7)});
            EXPECT_NEAR(psi_eval(psi, u1, u2, 0.2, 0.7), oracle, 1e-10);
        }
    EXPECT_NEAR(psi.gauge()(0.25), 0.75, 1e-12);
}

TEST(Psi, ParameterValidation) {
    EXPECT_THROW(make_psi(PsiExample::ex2_2, with_k(1.5)), InputError);
    EXPECT_THROW(make_psi(PsiExample::ex2_2, with_k(0.0)), InputError);
    EXPECT_THROW(make_psi(PsiExample::ex2_2, PsiParams{}), InputError);
    EXPECT_THROW(make_psi(PsiExample::ex2_1, with_delta([](double u) { return u; })), InputError);
    PsiParams bad_a;
    bad_a.a = 1.0;
    bad_a.density = Density::constant(1.0);
    EXPECT_THROW(make_psi(PsiExample::ex2_5, bad_a), InputError);
    EXPECT_THROW(make_psi(PsiExample::custom, PsiParams{}), InputError);
    EXPECT_THROW(psi_example_from_name("ex9_9"), InputError);
    EXPECT_THROW(psi_eval(make_psi(PsiExample::ex2_2, with_k(0.5)), 1.2, 0, 0, 0), InputError);
}

TEST(Psi, VerifyAsPrintedLinearExamples) {
    for (PsiExample e : {PsiExample::ex2_2, PsiExample::ex2_4}) {
        const PsiReport r = verify_psi(make_psi(e, with_k(0.5)), ConditionVariant::as_printed, 21);
        for (const char* c : {"psi1", "psi2", "psi3", "psi4"}) EXPECT_NE(r.at(c).status, ConditionStatus::fails) << c;
        EXPECT_TRUE(r.all_hold());
    }
    const PsiReport r1 =
        verify_psi(make_psi(PsiExample::ex2_1, with_delta([](double u) { return u / 2; })), ConditionVariant::as_printed, 21);
    EXPECT_TRUE(r1.all_hold());
}

TEST(Psi, StrictVariantFailsWithWitness) {
    const PsiReport r = verify_psi(make_psi(PsiExample::ex2_2, with_k(0.5)), ConditionVariant::strict, 21);
    EXPECT_FALSE(r.all_hold());
    const ConditionResult& c = r.at("psi2");
    EXPECT_EQ(c.status, ConditionStatus::fails);
    ASSERT_TRUE(c.witness);
    EXPECT_GT(c.witness->front().second, 0.0);
}

TEST(Psi, Psi1FailsForNonincreasingGauge) {
    PsiParams p;
    p.a = 0.5;
    p.density = Density::constant(1.0);
    const PsiReport r = verify_psi(make_psi(PsiExample::ex2_5, p), ConditionVariant::as_printed, 11);
    EXPECT_EQ(r.at("psi1").status, ConditionStatus::fails);
    EXPECT_NE(r.at("psi1_gauge").status, ConditionStatus::fails);
}

TEST(Psi, DeterministicAcrossJobs) {
    const PsiFunction psi = make_psi(PsiExample::ex2_2, with_k(0.5));
    const PsiReport a = verify_psi(psi, ConditionVariant::strict, 15, 1);
    const PsiReport b = verify_psi(psi, ConditionVariant::strict, 15, 4);
    ASSERT_EQ(a.conditions.size(), b.conditions.size());
    for (std::size_t i = 0; i < a.conditions.size(); ++i) {
        EXPECT_EQ(a.conditions[i].status, b.conditions[i].status);
        EXPECT_EQ(a.conditions[i].witness, b.conditions[i].witness);
    }
}
