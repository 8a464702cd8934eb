#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fuzzyfp/dp_solver.hpp"
#include "fuzzyfp/errors.hpp"

using namespace fuzzyfp;

namespace {

std::vector<double> decisions() {
    std::vector<double> d;
    for (int i = 0; i <= 10; ++i) d.push_back(i / 10.0);
    return d;
}

DPProblem linear_problem(std::size_t n = 201) {
    return make_dp_problem(Carrier(0, 1, n), decisions(), "x*y", "z/2", "z/2", "z/2", "z/2", "x*y", 2.0, 0.5);
}

ValueSequence seq(std::function<double(double, double)> g) {
    ValueSequence s;
    s.generator = std::move(g);
    s.description = "test";
    s.tail_start = 100000000;
    return s;
}

}  // namespace

TEST(SupMetric, Values) {
    const Carrier W(0, 1, 101);
    EXPECT_EQ(sup_metric(ValueFunction::constant(W, 0), ValueFunction::constant(W, 1)), 1.0);
    const auto r = ValueFunction::from(W, [](double x) { return x * x; });
    EXPECT_EQ(sup_metric(r, r), 0.0);
    EXPECT_EQ(sup_metric(ValueFunction::from(W, [](double x) { return x; }),
                         ValueFunction::from(W, [](double x) { return 2 * x; })),
              1.0);
    EXPECT_THROW(sup_metric(r, ValueFunction::constant(Carrier(0, 1, 11), 0)), InputError);
}

TEST(ValueFunction, Interpolates) {
    const ValueFunction v = ValueFunction::from(Carrier(0, 1, 3), [](double x) { return x * x; });
    EXPECT_EQ(v.at(0.5), 0.25);
    EXPECT_NEAR(v.at(0.75), 0.625, 1e-15);
    EXPECT_EQ(v.at(1.0), 1.0);
}

TEST(Bellman, SpotValues) {
    const DPProblem prob = linear_problem();
    const auto out0 = apply_bellman_operator(prob, BellmanOp::U1, ValueFunction::constant(prob.W, 0));
    const auto out1 = apply_bellman_operator(prob, BellmanOp::V2, ValueFunction::from(prob.W, [](double x) { return x; }));
    for (std::size_t i = 0; i < prob.W.grid_n(); ++i) {
        const double x = prob.W.point(i);
        EXPECT_NEAR(out0.values()[i], x, 1e-15);
        EXPECT_NEAR(out1.values()[i], 1.5 * x, 1e-15);
    }
    const DPProblem zero = make_dp_problem(Carrier(0, 1, 11), decisions(), "0", "0", "0", "0", "0", "x*y", 1.0, 0.5);
    const auto z = apply_bellman_operator(zero, BellmanOp::U2, ValueFunction::constant(zero.W, 3.0));
    for (double v : z.values()) EXPECT_EQ(v, 0.0);
}

TEST(Bellman, ContractionInSupMetric) {
    const DPProblem prob = linear_problem(51);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(51), b(51);
        for (auto& v : a) v = u(rng);
        for (auto& v : b) v = u(rng);
        const ValueFunction va(prob.W, a), vb(prob.W, b);
        for (BellmanOp op : kBellmanOps)
            EXPECT_LE(sup_metric(apply_bellman_operator(prob, op, va), apply_bellman_operator(prob, op, vb)),
                      prob.beta * sup_metric(va, vb) + 1e-12);
    }
}

TEST(ValueIteration, ConvergesToTwoX) {
    const DPProblem prob = linear_problem();
    const auto r = value_iterate(prob, BellmanOp::U1, ValueFunction::constant(prob.W, 0), 1e-7, 40);
    EXPECT_LE(r.iterations, 40u);
    EXPECT_LT(r.final_residual, 1e-7);
    EXPECT_TRUE(r.envelope_ok);
    EXPECT_LE(r.envelope_excess, kEnvelopeTol);
    double err = 0;
    for (std::size_t i = 0; i < prob.W.grid_n(); ++i) err = std::max(err, std::abs(r.solution.values()[i] - 2 * prob.W.point(i)));
    EXPECT_LT(err, 1e-6);
    // v_k(x) = (2 - 2^(1-k)) x, so the residual trace is exactly 0.5^k.
    for (std::size_t k = 0; k < r.trace.size(); ++k) EXPECT_NEAR(r.trace[k], std::pow(0.5, double(k)), 1e-12);
}

TEST(ValueIteration, ZeroPayoffStopsImmediately) {
    const DPProblem prob = make_dp_problem(Carrier(0, 1, 21), decisions(), "x*y", "0", "0", "0", "0", "x*y", 1.0, 0.5);
    const auto r = value_iterate(prob, BellmanOp::U1, ValueFunction::constant(prob.W, 0), 1e-9, 10);
    EXPECT_LE(r.iterations, 2u);
    for (std::size_t i = 0; i < prob.W.grid_n(); ++i) EXPECT_NEAR(r.solution.values()[i], prob.W.point(i), 1e-15);
}

TEST(ValueIteration, StartAtSolution) {
    const DPProblem prob = linear_problem();
    const auto r = value_iterate(prob, BellmanOp::V1,
                                 ValueFunction::from(prob.W, [](double x) { return 2 * x; }), 1e-9, 5);
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_LT(r.final_residual, 1e-9);
}

TEST(ValueIteration, ExhaustionIsNumericalError) {
    const DPProblem prob = linear_problem(21);
    EXPECT_THROW(value_iterate(prob, BellmanOp::U1, ValueFunction::constant(prob.W, 0), 1e-12, 5), NumericalError);
    EXPECT_THROW(value_iterate(prob, BellmanOp::U1, ValueFunction::constant(prob.W, 0), 0.0, 5), InputError);
}

TEST(System, AllOperatorsAgree) {
    const SystemReport s = solve_system(linear_problem(), 1e-7, 40);
    ASSERT_EQ(s.runs.size(), 4u);
    EXPECT_TRUE(s.common_solution);
    EXPECT_LE(s.agreement, 2e-7);
    for (const auto& row : s.cross)
        for (double c : row) EXPECT_LE(c, 2e-7);
}

TEST(Validate, RejectsBadProblems) {
    const Carrier W(0, 1, 21);
    EXPECT_THROW(make_dp_problem(W, decisions(), "x*y", "z/2", "z/2", "z/2", "z/2", "x*y", 2.0, 1.0), InputError);
    EXPECT_THROW(make_dp_problem(W, decisions(), "x*y", "z/2", "z/2", "z/2", "z/2", "x+y", 2.0, 0.5), InputError);
    EXPECT_THROW(make_dp_problem(W, decisions(), "x*y", "z/2 + 5", "z/2", "z/2", "z/2", "x*y", 2.0, 0.5), InputError);
    EXPECT_THROW(make_dp_problem(W, decisions(), "x*y", "min(max(z, -0.5), 0.5)", "z/2", "z/2", "z/2", "x*y", 2.0, 0.5), InputError);
    EXPECT_THROW(make_dp_problem(W, {}, "x*y", "z/2", "z/2", "z/2", "z/2", "x*y", 2.0, 0.5), InputError);
    EXPECT_THROW(make_dp_problem(W, decisions(), "x*w", "z/2", "z/2", "z/2", "z/2", "x*y", 2.0, 0.5), InputError);
}

TEST(Theorem53, TailConditionsHoldAndThetaIsReportedLiterally) {
    const DPProblem prob = linear_problem(101);
    const auto rep = check_theorem53(prob, seq([](double x, double) { return 2 * x; }),
                                     seq([](double x, double n) { return 2 * x + 1 / n; }), [](double u) { return u + 0.5; },
                                     1e-7, 10, 0, 1);
    EXPECT_TRUE(rep.cond_i.passed) << rep.cond_i.note;
    EXPECT_TRUE(rep.cond_ii.passed) << rep.cond_ii.note;
    EXPECT_TRUE(rep.cond_iii.lambda_ge);
    EXPECT_TRUE(rep.cond_iii.lambda_gt);
    // phi(t) = t - 1 is negative on every sup distance below 1, so the product condition fails.
    EXPECT_FALSE(rep.cond_iii.passed);
    EXPECT_TRUE(rep.cond_iii.witness);

    const auto again = check_theorem53(prob, seq([](double x, double) { return 2 * x; }),
                                       seq([](double x, double n) { return 2 * x + 1 / n; }),
                                       [](double u) { return u + 0.5; }, 1e-7, 10, 0, 4);
    EXPECT_EQ(rep.cond_iii.worst_margin, again.cond_iii.worst_margin);
    EXPECT_EQ(phi_dp(1.0), 0.0);
}

TEST(Theorem53, LambdaBelowIdentityRejected) {
    const DPProblem prob = linear_problem(21);
    EXPECT_THROW(check_theorem53(prob, seq([](double x, double) { return x; }), seq([](double x, double) { return x; }),
                                 [](double u) { return u / 2; }, 1e-7),
                 InputError);
}
