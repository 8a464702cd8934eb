// Runs the acceptance criteria and prints one verdict line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../common/expr_corpus.hpp"
#include "fuzzyfp/commands.hpp"
#include "fuzzyfp/dp_solver.hpp"
#include "fuzzyfp/expr.hpp"
#include "fuzzyfp/implicit.hpp"
#include "fuzzyfp/metric_core.hpp"
#include "fuzzyfp/verifier.hpp"

using namespace fuzzyfp;

namespace {

struct Verdict {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        passed = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string config_path(std::string_view name) { return std::string(FUZZYFP_SOURCE_DIR) + "/configs/" + std::string(name); }

double membership(double x, double y, double t) { return t / (t + std::abs(x - y)); }

Carrier unit(std::size_t n) { return Carrier(0.0, 1.0, n); }

FuzzyMetric standard(std::size_t n) {
    return standard_fuzzy_metric(unit(n), [](double x, double y) { return std::abs(x - y); }, TNorm::product());
}

MapQuadruple worked_example(std::size_t n) {
    const Carrier X = unit(n);
    return MapQuadruple(SelfMap(X, [](double x) { return x / 2; }, "x/2"), SelfMap(X, [](double x) { return x / 4; }, "x/4"),
                        SelfMap::identity(X), SelfMap::constant(X, 0.0), standard(n));
}

PsiFunction ex22() {
    PsiParams p;
    p.k = 0.5;
    return make_psi(PsiExample::ex2_2, p);
}

CommandResult run(const std::string& cmd, std::optional<std::string> config, int jobs, std::uint64_t seed) {
    CommandOptions o;
    o.command = cmd;
    o.config = std::move(config);
    o.overrides.jobs = jobs;
    o.overrides.seed = seed;
    return run_command(o);
}

Verdict criterion1() {
    Verdict v;
    const auto t0 = Clock::now();
    const CommandResult r = run("reproduce-example6", std::nullopt, 1, 0);
    const double secs = seconds_since(t0);
    v.require(r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
    if (r.report["results"].is_null()) return v;
    const Json& th = r.report["results"]["theorem"];
    auto stage = [&](const std::string& name) {
        for (const auto& s : th["stages"])
            if (s["stage"] == name) return s["passed"].get<bool>();
        return false;
    };
    v.require(stage("ea"), "(a) E.A. failed");
    const Json& cont = th["containment"];
    v.require(stage("containment") && cont["inner"]["hi"].get<double>() == 0.0 && cont["outer"]["hi"].get<double>() == 0.5,
              "G(X) in A(X) failed");
    v.require(stage("closedness"), "(c) closedness failed");
    v.require(stage("commutation"), "(d) weak compatibility failed");
    const Json& c = th["contraction"];
    const auto samples = c["samples"].get<std::size_t>();
    const double worst = c["worst_margin"].get<double>();
    v.require(stage("contraction"), "contraction failed");
    v.require(samples >= 10000, "only " + std::to_string(samples) + " samples");
    v.require(worst >= -1e-9, "worst margin " + std::to_string(worst));
    const Json& certs = th["fixed_points"]["certificates"];
    v.require(certs.size() == 1 && certs[0]["z"].get<double>() == 0.0 && certs[0]["max_residual"].get<double>() < 1e-9,
              "fixed point is not z = 0 alone");
    v.require(th["uniqueness"]["unique"].get<bool>(), "uniqueness scan failed");
    v.require(secs < 60.0, "runtime " + std::to_string(secs) + " s");
    if (v.passed) v.detail << samples << " samples, worst margin " << worst << ", z = 0, " << secs << " s";
    return v;
}

Verdict criterion2() {
    Verdict v;
    // Independent evaluation at (1,1,1): M(F1,G1) = 1/2, M(A1,B1) = 0.8, M(A1,F1) = 2/3, M(B1,G1) = 0.8.
    const double lhs = 1 - membership(1, 0, 1);
    const double kmin = 0.5 * std::min({1 - membership(0.5, 0.25, 1), 1 - membership(0.5, 1, 1), 1 - membership(0.25, 0, 1)});
    const double oracle = lhs - kmin;
    v.require(std::abs(lhs - 0.5) < 1e-12 && std::abs(kmin - 0.1) < 1e-12, "oracle disagrees with hand values");

    ContractionSpec spec;
    spec.psi = ex22();
    spec.phi = builtin_altering("linear");
    const double margin = contraction_margin(worked_example(101), spec, 1, 1, 1);
    v.require(std::abs(margin - 0.4) <= 1e-9, "library margin " + std::to_string(margin));
    v.require(std::abs(margin - oracle) <= 1e-12, "library and oracle differ");

    const CommandResult r = run("reproduce-example6", std::nullopt, 1, 0);
    const double cli = r.report["results"].is_null() ? -1.0 : r.report["results"]["spot"]["margin"].get<double>();
    v.require(std::abs(cli - 0.4) <= 1e-9, "reported margin " + std::to_string(cli));
    if (v.passed) v.detail << "margin " << margin << " (LHS " << lhs << ", k*min " << kmin << ")";
    return v;
}

Verdict criterion3() {
    Verdict v;
    SamplingPlan plan;
    plan.random_triples = 1000;
    const AxiomReport rep = verify_fm_axioms(standard(21), plan);
    for (const auto& c : rep.checks) {
        v.require(c.passed, c.axiom + " failed");
        v.require(c.worst_margin >= -1e-12, c.axiom + " margin " + std::to_string(c.worst_margin));
    }
    const FuzzyMetric constant(unit(21), [](double, double, double t) { return t > 0 ? 0.5 : 0.0; }, TNorm::product(),
                               "constant 0.5");
    const AxiomReport bad = verify_fm_axioms(constant, plan);
    const AxiomCheck& fm2 = bad.at("FM-2");
    v.require(!fm2.passed && fm2.witness.has_value(), "constant membership did not fail FM-2 with a witness");
    if (v.passed)
        v.detail << rep.checks.size() << " checks on " << plan.random_triples
                 << " random triples; constant 0.5 fails FM-2 at x = " << (*fm2.witness)[0].second;
    return v;
}

Verdict criterion4() {
    Verdict v;
    const AlteringDistance integral = make_integral_altering(Density::constant(1.0));
    double gap = 0;
    for (std::size_t i = 0; i <= 100; ++i) {
        const double s = i / 100.0;
        gap = std::max(gap, std::abs(integral(s) - (1 - s)));
    }
    v.require(gap <= 1e-9, "gauge gap " + std::to_string(gap));

    const MapQuadruple q = worked_example(101);
    ContractionPlan plan;
    plan.t_grid = {0.1, 0.5, 1, 2, 10};
    ContractionSpec main;
    main.psi = ex22();
    main.phi = builtin_altering("linear");
    ContractionSpec integ;
    integ.form = ContractionForm::integral_511;
    integ.psi = ex22();
    integ.density = Density::constant(1.0);
    const auto a = verify_contraction(q, main, plan);
    const auto b = verify_contraction(q, integ, plan);
    v.require(a.passed == b.passed, "verdicts differ");
    v.require(a.margins.size() == b.margins.size(), "sample counts differ");
    double mgap = 0;
    for (std::size_t i = 0; i < std::min(a.margins.size(), b.margins.size()); ++i)
        mgap = std::max(mgap, std::abs(a.margins[i] - b.margins[i]));
    v.require(mgap <= 1e-9, "margin gap " + std::to_string(mgap));
    if (v.passed) v.detail << "gauge gap " << gap << ", margin gap " << mgap << " over " << a.margins.size() << " samples";
    return v;
}

Verdict criterion5() {
    Verdict v;
    const auto half = [](double u) { return u / 2; };
    std::vector<std::pair<PsiExample, PsiParams>> cases;
    {
        PsiParams p;
        p.delta = half;
        cases.emplace_back(PsiExample::ex2_1, p);
    }
    {
        PsiParams p;
        p.k = 0.5;
        cases.emplace_back(PsiExample::ex2_2, p);
    }
    {
        PsiParams p;
        p.delta3 = [](double a, double b, double c) { return std::max({a, b, c}) / 2; };
        cases.emplace_back(PsiExample::ex2_3, p);
    }
    {
        PsiParams p;
        p.k = 0.5;
        cases.emplace_back(PsiExample::ex2_4, p);
    }
    {
        PsiParams p;
        p.a = 0.5;
        p.density = Density::constant(1.0);
        cases.emplace_back(PsiExample::ex2_5, p);
    }
    {
        PsiParams p;
        p.delta = half;
        p.density = Density::constant(1.0);
        cases.emplace_back(PsiExample::ex2_6, p);
    }
    for (const auto& [example, params] : cases) {
        const PsiFunction psi = make_psi(example, params);
        const PsiReport rep = verify_psi(psi, ConditionVariant::as_printed, 21);
        const std::string name(to_string(example));
        const ConditionResult& p1 = rep.at("psi1");
        if (p1.status == ConditionStatus::fails) {
            std::ostringstream w;
            w << name << " psi1 fails";
            if (p1.witness) {
                w << " at";
                for (const auto& [k, x] : *p1.witness) w << ' ' << k << '=' << x;
            }
            v.require(false, w.str());
        }
        for (const char* c : {"psi2", "psi3", "psi4"})
            v.require(rep.at(c).status == ConditionStatus::holds_vacuously, name + " " + c + " not vacuous");
    }
    const PsiReport strict = verify_psi(ex22(), ConditionVariant::strict, 21);
    const ConditionResult& p3 = strict.at("psi3");
    v.require(p3.status == ConditionStatus::fails && p3.witness.has_value(), "strict psi3 on ex2_2 did not fail");
    if (p3.witness) {
        // Truth table: psi(u,0,0,u) = u - k min{0,0,u} = u >= 0 while u > 0.
        const double u = p3.witness->front().second;
        v.require(u > 0 && std::abs(psi_eval(ex22(), u, 0, 0, u) - u) < 1e-15, "strict witness inconsistent");
    }
    if (v.passed) v.detail << "psi1 on all six examples, vacuous psi2-psi4, strict psi3 witness";
    return v;
}

Verdict criterion6() {
    Verdict v;
    const auto t0 = Clock::now();
    std::vector<double> D;
    for (int i = 0; i <= 10; ++i) D.push_back(i / 10.0);
    const DPProblem prob = make_dp_problem(unit(201), D, "x*y", "z/2", "z/2", "z/2", "z/2", "x*y", 2.0, 0.5);
    const double tol = 1e-7;
    const SystemReport sys = solve_system(prob, tol, 40);
    for (std::size_t i = 0; i < sys.runs.size(); ++i) {
        const IterationResult& run = sys.runs[i];
        const std::string op(to_string(kBellmanOps[i]));
        double err = 0;
        for (std::size_t j = 0; j < prob.W.grid_n(); ++j)
            err = std::max(err, std::abs(run.solution.values()[j] - 2 * prob.W.point(j)));
        v.require(err < 1e-6, op + " error " + std::to_string(err));
        v.require(run.iterations <= 40, op + " took " + std::to_string(run.iterations) + " iterations");
        double excess = 0;
        for (std::size_t k = 0; k < run.trace.size(); ++k)
            excess = std::max(excess, run.trace[k] - std::pow(0.5, double(k)) * run.trace[0]);
        v.require(excess <= 1e-9, op + " envelope excess " + std::to_string(excess));
    }
    v.require(sys.runs.size() == 4, "missing operator runs");
    v.require(sys.agreement <= 2 * tol, "agreement " + std::to_string(sys.agreement));
    const double secs = seconds_since(t0);
    v.require(secs < 5.0, "runtime " + std::to_string(secs) + " s");
    if (v.passed)
        v.detail << sys.runs.front().iterations << " iterations, agreement " << sys.agreement << ", " << secs << " s";
    return v;
}

Verdict criterion7() {
    Verdict v;
    const auto cases = corpus::expressions();
    v.require(cases.size() == 50, "corpus has " + std::to_string(cases.size()) + " entries");
    double worst = 0;
    for (const auto& c : cases) {
        try {
            const double got = expr::Expr::parse(c.text).eval({{"x", 0.3}, {"y", 2.0}});
            const double err = std::abs(got - c.oracle(0.3, 2.0));
            worst = std::max(worst, err);
            v.require(err <= 1e-12, "'" + std::string(c.text) + "' off by " + std::to_string(err));
        } catch (const std::exception& e) {
            v.require(false, "'" + std::string(c.text) + "': " + e.what());
        }
    }
    for (const auto& m : corpus::malformed()) {
        try {
            expr::Expr::parse(m.text);
            v.require(false, "'" + std::string(m.text) + "' parsed");
        } catch (const expr::ParseError& e) {
            v.require(e.offset() == m.offset, "'" + std::string(m.text) + "' offset " + std::to_string(e.offset()));
        }
    }
    if (v.passed) v.detail << cases.size() << " expressions, worst error " << worst << "; 3 positioned errors";
    return v;
}

Verdict criterion8() {
    Verdict v;
    const std::vector<std::pair<std::string, std::optional<std::string>>> runs{
        {"axioms", config_path("standard_metric.ini")}, {"psi-check", config_path("example6.ini")},
        {"verify", config_path("example6.ini")},        {"pairs", config_path("example6.ini")},
        {"fixpoint", config_path("example6.ini")},      {"theorem", config_path("example6.ini")},
        {"dp-solve", config_path("dp_theorem53.ini")},  {"reproduce-example6", std::nullopt},
    };
    for (const auto& [cmd, cfg] : runs) {
        const CommandResult a = run(cmd, cfg, 1, 7);
        const CommandResult b = run(cmd, cfg, 4, 7);
        v.require(a.exit_code != 2, cmd + " errored: " + dump_report(a.report));
        v.require(dump_report(a.report) == dump_report(b.report), cmd + " differs across jobs");
        v.require(a.csv == b.csv, cmd + " CSV differs across jobs");
    }
    if (v.passed) v.detail << runs.size() << " commands byte-identical for --jobs 1 and 4";
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"worked example reproduction", criterion1},
        {"spot margin at (1,1,1)", criterion2},
        {"fuzzy metric axioms", criterion3},
        {"integral gauge equivalence", criterion4},
        {"psi condition verifier", criterion5},
        {"DP value iteration", criterion6},
        {"expression parser corpus", criterion7},
        {"determinism across jobs", criterion8},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.passed = false;
            v.detail << "exception: " << e.what();
        }
        std::printf("[%s] criterion %zu %s: %s\n", v.passed ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    v.detail.str().c_str());
        failed += v.passed ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
