#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "fuzzyfp/errors.hpp"
#include "fuzzyfp/solver.hpp"

using namespace fuzzyfp;

namespace {

MapQuadruple halves(std::size_t n = 101) {
    const Carrier X = fixtures::unit(n);
    const SelfMap h(X, [](double x) { return x / 2; }, "x/2");
    return MapQuadruple(h, h, h, h, fixtures::standard(n));
}

// F = 1 - x and G = x/2 pull towards different points; r(x) = max{|1 - 2x|, x/2} >= 0.2.
MapQuadruple no_common_point(std::size_t n = 101) {
    const Carrier X = fixtures::unit(n);
    const SelfMap id = SelfMap::identity(X);
    return MapQuadruple(id, id, SelfMap(X, [](double x) { return 1 - x; }, "1-x"),
                        SelfMap(X, [](double x) { return x / 2; }, "x/2"), fixtures::standard(n));
}

ContractionSpec linear_ex22() {
    ContractionSpec s;
    PsiParams p;
    p.k = 0.5;
    s.psi = make_psi(PsiExample::ex2_2, p);
    s.phi = builtin_altering("linear");
    return s;
}

TheoremConfig worked_config(std::size_t n = 51) {
    SequenceSpec seq;
    seq.generator = [](double k) { return 1 / k; };
    seq.description = "1/n";
    ContractionPlan plan;
    plan.refine = false;
    return TheoremConfig{.quad = fixtures::worked_example(n), .contraction = linear_ex22(), .plan = plan, .sequence = seq};
}

}  // namespace

TEST(Certify, Residuals) {
    const auto c = certify(fixtures::worked_example(), 0.4);
    EXPECT_NEAR(c.residuals[0], 0.2, 1e-15);
    EXPECT_NEAR(c.residuals[1], 0.3, 1e-15);
    EXPECT_EQ(c.residuals[2], 0.0);
    EXPECT_NEAR(c.residuals[3], 0.4, 1e-15);
    EXPECT_NEAR(c.max_residual(), 0.4, 1e-15);
}

TEST(FixedPoints, WorkedExampleHasZero) {
    const auto s = find_common_fixed_points(fixtures::worked_example(), 1e-9);
    ASSERT_EQ(s.certificates.size(), 1u);
    EXPECT_EQ(s.certificates[0].z, 0.0);
    EXPECT_LT(s.certificates[0].max_residual(), 1e-9);
    EXPECT_FALSE(s.all_fixed);
    EXPECT_EQ(s.grid_n, 101u);
}

TEST(FixedPoints, IdentityIsAllFixed) {
    const auto s = find_common_fixed_points(fixtures::all_identity(21), 1e-9);
    EXPECT_TRUE(s.all_fixed);
    EXPECT_EQ(s.min_residual, 0.0);
}

TEST(FixedPoints, HalvesFixZero) {
    const auto s = find_common_fixed_points(halves(), 1e-9);
    ASSERT_EQ(s.certificates.size(), 1u);
    EXPECT_NEAR(s.certificates[0].z, 0.0, 1e-12);
}

TEST(FixedPoints, OffGridFixedPointIsRefined) {
    const Carrier X = fixtures::unit(10);
    const SelfMap f(X, [](double x) { return 0.3 + 0.5 * x; }, "0.3+x/2");  // z = 0.6, not on a 10-point grid
    const MapQuadruple q(f, f, f, f, fixtures::standard(10));
    const auto s = find_common_fixed_points(q, 1e-9);
    ASSERT_EQ(s.certificates.size(), 1u);
    EXPECT_NEAR(s.certificates[0].z, 0.6, 1e-8);
    EXPECT_LT(certify(q, s.certificates[0].z).max_residual(), 1e-9);
}

TEST(FixedPoints, NoCommonPoint) {
    const auto s = find_common_fixed_points(no_common_point(), 1e-9, 201);
    EXPECT_TRUE(s.certificates.empty());
    EXPECT_NEAR(s.min_residual, 0.2, 1e-3);
}

TEST(FixedPoints, DeterministicAcrossJobs) {
    const auto a = find_common_fixed_points(no_common_point(), 1e-9, 0, 1);
    const auto b = find_common_fixed_points(no_common_point(), 1e-9, 0, 4);
    EXPECT_EQ(a.min_residual, b.min_residual);
    EXPECT_EQ(a.certificates.size(), b.certificates.size());
}

TEST(Refine, ConvergesToZero) {
    const auto r = refine_fixed_point(fixtures::worked_example(), 0.3, 1e-9);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.best.max_residual(), 1e-9);
    EXPECT_NEAR(r.best.z, 0.0, 1e-9);
    EXPECT_LE(r.iterations, kMaxRefineIterations);
}

TEST(Refine, StartingAtFixedPoint) {
    const auto r = refine_fixed_point(fixtures::worked_example(), 0.0, 1e-9);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.best.z, 0.0);
    EXPECT_EQ(r.best.max_residual(), 0.0);
}

TEST(Refine, ReportsBestWhenNoCertificate) {
    const auto r = refine_fixed_point(no_common_point(), 0.9, 1e-9);
    EXPECT_FALSE(r.converged);
    EXPECT_NEAR(r.best.z, 0.4, 1e-6);
    EXPECT_NEAR(r.best.max_residual(), 0.2, 1e-6);
    EXPECT_THROW(refine_fixed_point(no_common_point(), 1.5, 1e-9), InputError);
}

TEST(Pipeline, WorkedExamplePasses) {
    const TheoremReport rep = run_theorem_pipeline(worked_config());
    EXPECT_TRUE(rep.hypotheses_passed());
    EXPECT_TRUE(rep.passed());
    for (const char* s : {"ea", "containment", "closedness", "contraction", "coincidence", "commutation", "fixed_point",
                          "uniqueness"})
        EXPECT_TRUE(rep.stage(s).passed) << s;
    EXPECT_TRUE(rep.uniqueness.unique);
    EXPECT_EQ(rep.uniqueness.note, "unique on scanned grid");
    ASSERT_EQ(rep.fixed_points.certificates.size(), 1u);
    EXPECT_EQ(rep.fixed_points.certificates[0].z, 0.0);
}

TEST(Pipeline, IdentityIsNotUnique) {
    TheoremConfig cfg = worked_config(21);
    cfg.quad = fixtures::all_identity(21);
    cfg.commutation = CommutationVariant::commuting;
    const TheoremReport rep = run_theorem_pipeline(cfg);
    EXPECT_TRUE(rep.stage("contraction").passed);
    EXPECT_FALSE(rep.uniqueness.unique);
    EXPECT_FALSE(rep.passed());
}

TEST(Pipeline, WrongContainmentDirection) {
    TheoremConfig cfg = worked_config();
    cfg.containment = ContainmentDirection::F_in_B;
    const TheoremReport rep = run_theorem_pipeline(cfg);
    EXPECT_FALSE(rep.stage("containment").passed);
    EXPECT_FALSE(rep.hypotheses_passed());
    EXPECT_TRUE(rep.stage("fixed_point").passed);
    ASSERT_TRUE(rep.containment.witness);
}

TEST(Pipeline, StageErrorsAreLabelled) {
    TheoremConfig cfg = worked_config(11);
    cfg.plan.t_grid = {-1.0};
    try {
        run_theorem_pipeline(cfg);
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("stage contraction: ", 0), 0u) << e.what();
    }
}

TEST(Pipeline, EnumNames) {
    EXPECT_EQ(containment_from_name("G_in_A"), ContainmentDirection::G_in_A);
    EXPECT_EQ(to_string(EAPair::BG), "BG");
    EXPECT_THROW(closed_target_from_name("F"), InputError);
}
