#include "fuzzyfp/commands.hpp"

#include <algorithm>
#include <sstream>

#include "fuzzyfp/example6_config.hpp"

namespace fuzzyfp {

namespace {

struct Outcome {
    bool passed = true;
    Json results;
};

Json metric_info(const FuzzyMetric& fm) {
    const Carrier& X = fm.carrier();
    return Json{{"label", fm.label()},
                {"tnorm", fm.tnorm().name()},
                {"carrier", Json{{"lo", X.lo()}, {"hi", X.hi()}, {"grid", X.grid_n()}}}};
}

Json maps_info(const MapQuadruple& q) {
    return Json{{"A", q.A().label()}, {"B", q.B().label()}, {"F", q.F().label()}, {"G", q.G().label()}};
}

Outcome cmd_axioms(const RunConfig& cfg) {
    const FuzzyMetric& fm = cfg.require_metric();
    SamplingPlan plan;
    plan.t_grid = cfg.plan.t_grid;
    plan.random_triples = cfg.axioms.random_triples;
    plan.seed = cfg.seed;
    plan.jobs = cfg.jobs;
    const AxiomReport rep = verify_fm_axioms(fm, plan);
    Json res{{"metric", metric_info(fm)},
             {"sampling", Json{{"t_grid", plan.t_grid}, {"random_triples", plan.random_triples}, {"seed", plan.seed}}},
             {"axioms", to_json(rep)}};
    res["remark3"] = nullptr;
    if (cfg.axioms.remark3_r) res["remark3"] = to_json(remark3_search(fm, *cfg.axioms.remark3_r, plan));
    return {rep.all_passed(), res};
}

Outcome cmd_psi_check(const RunConfig& cfg) {
    const PsiReport rep = verify_psi(cfg.require_psi(), cfg.psi_settings.variant, cfg.psi_settings.grid_n, cfg.jobs);
    bool ok = true;
    for (const auto& c : rep.conditions) ok = ok && c.status != ConditionStatus::fails;
    return {ok, Json{{"grid", cfg.psi_settings.grid_n}, {"psi", to_json(rep)}}};
}

Outcome cmd_verify(const RunConfig& cfg) {
    const VerificationReport rep = verify_contraction(cfg.require_quad(), cfg.require_contraction(), cfg.plan);
    return {rep.passed,
            Json{{"metric", metric_info(cfg.require_metric())},
                 {"maps", maps_info(cfg.require_quad())},
                 {"t_grid", cfg.plan.t_grid},
                 {"contraction", to_json(rep)}}};
}

Outcome cmd_pairs(const RunConfig& cfg) {
    const MapQuadruple& q = cfg.require_quad();
    const FuzzyMetric& fm = q.metric();
    const auto& th = cfg.theorem;
    bool ok = true;
    Json res{{"maps", maps_info(q)}};

    const CoincidenceResult af = find_coincidence_points(q.A(), q.F(), cfg.tolerances.coincidence, cfg.jobs);
    const CoincidenceResult bg = find_coincidence_points(q.B(), q.G(), cfg.tolerances.coincidence, cfg.jobs);
    res["coincidences"] = Json{{"AF", to_json(af)}, {"BG", to_json(bg)}};

    Json comm = Json::object();
    const std::vector<double> grid = q.carrier().points();
    for (const auto& [name, pair, pts] : {std::tuple{"AF", q.pair_AF(), &af}, std::tuple{"BG", q.pair_BG(), &bg}}) {
        const bool at_points = th.commutation == CommutationVariant::weakly_compatible;
        if (at_points && pts->points.empty()) {
            comm[name] = Json{{"check", to_string(th.commutation)}, {"passed", false}, {"worst_margin", nullptr},
                              {"samples", 0}, {"witness", nullptr}, {"note", "no coincidence points to test"}};
            ok = false;
            continue;
        }
        const PredicateReport pr = check_commutation_variant(pair, fm, th.commutation, th.R,
                                                             at_points ? pts->points : grid, cfg.plan.t_grid, cfg.jobs);
        ok = ok && pr.passed;
        comm[name] = to_json(pr);
    }
    res["commutation"] = comm;

    res["ea"] = nullptr;
    res["common_ea"] = nullptr;
    res["compatibility"] = nullptr;
    if (cfg.seq_x) {
        const MapPair pair = th.ea_pair == EAPair::AF ? q.pair_AF() : q.pair_BG();
        const EAReport ea = check_property_EA(pair, *cfg.seq_x, cfg.tolerances.tail);
        ok = ok && ea.passed;
        res["ea"] = to_json(ea);
        res["ea"]["pair"] = to_string(th.ea_pair);
        res["compatibility"] =
            to_json(check_compatibility_on_sequence(pair, fm, *cfg.seq_x, cfg.plan.t_grid, cfg.tolerances.tail));
        if (cfg.seq_y) {
            const EAReport cea = check_common_property_EA(q.pair_AF(), *cfg.seq_x, q.pair_BG(), *cfg.seq_y,
                                                          cfg.tolerances.tail);
            ok = ok && cea.passed;
            res["common_ea"] = to_json(cea);
        }
    }

    const ContainmentReport cont = [&] {
        switch (th.containment) {
            case ContainmentDirection::B_in_F: return check_range_containment(q.B(), q.F(), cfg.tolerances.containment, th.containment_closure);
            case ContainmentDirection::G_in_A: return check_range_containment(q.G(), q.A(), cfg.tolerances.containment, th.containment_closure);
            case ContainmentDirection::F_in_B: return check_range_containment(q.F(), q.B(), cfg.tolerances.containment, th.containment_closure);
            case ContainmentDirection::A_in_G: break;
        }
        return check_range_containment(q.A(), q.G(), cfg.tolerances.containment, th.containment_closure);
    }();
    ok = ok && cont.passed;
    res["containment"] = to_json(cont);
    res["containment"]["direction"] = to_string(th.containment);

    const ClosedReport closed =
        check_range_closed(th.closed == ClosedTarget::A ? q.A() : q.B(), cfg.tolerances.closed, th.closed_options);
    ok = ok && closed.verdict == ClosedVerdict::closed;
    res["closedness"] = to_json(closed);
    res["closedness"]["target"] = to_string(th.closed);

    res["family_commuting"] = nullptr;
    if (cfg.families) {
        const auto fc = check_family_commuting(cfg.families->A, cfg.families->B, cfg.families->F, cfg.families->G);
        ok = ok && fc.passed;
        res["family_commuting"] = to_json(fc);
    }
    return {ok, res};
}

Outcome cmd_fixpoint(const RunConfig& cfg) {
    const MapQuadruple& q = cfg.require_quad();
    const FixedPointSearch s = find_common_fixed_points(q, cfg.tolerances.fixed_point, 0, cfg.jobs);
    return {!s.certificates.empty(),
            Json{{"maps", maps_info(q)}, {"tol", cfg.tolerances.fixed_point}, {"search", to_json(s)}}};
}

Outcome cmd_theorem(const RunConfig& cfg) {
    const TheoremReport rep = run_theorem_pipeline(cfg.theorem_config());
    return {rep.passed(), Json{{"maps", maps_info(cfg.require_quad())}, {"theorem", to_json(rep)}}};
}

Outcome cmd_dp_solve(const RunConfig& cfg, std::optional<std::string>& csv) {
    const DPProblem& prob = cfg.require_dp();
    const auto& d = cfg.dp_settings;
    const SystemReport sys = solve_system(prob, d.tol, d.max_iter, cfg.jobs);
    bool ok = sys.common_solution;
    for (const auto& run : sys.runs) ok = ok && run.envelope_ok;

    Json res{{"problem",
              Json{{"W", Json{{"lo", prob.W.lo()}, {"hi", prob.W.hi()}, {"grid", prob.W.grid_n()}}},
                   {"D", prob.D},
                   {"q", prob.sources[0]},
                   {"L1", prob.sources[1]},
                   {"L2", prob.sources[2]},
                   {"N1", prob.sources[3]},
                   {"N2", prob.sources[4]},
                   {"tau", prob.sources[5]},
                   {"Lambda", prob.Lambda},
                   {"beta", prob.beta}}},
             {"system", to_json(sys)}};
    res["theorem53"] = nullptr;
    if (d.r_seq && d.p_seq && d.lambda) {
        const Theorem53Report t = check_theorem53(prob, *d.r_seq, *d.p_seq, d.lambda, d.tol, d.random_pairs, cfg.seed, cfg.jobs);
        ok = ok && t.cond_i.passed && t.cond_ii.passed && t.cond_iii.passed;
        res["theorem53"] = to_json(t);
        res["theorem53"]["lambda"] = d.lambda_source;
    }

    std::ostringstream os;
    os.precision(17);
    os << "x,value\n";
    const ValueFunction& P = sys.runs.front().solution;
    for (std::size_t i = 0; i < P.values().size(); ++i) os << prob.W.point(i) << ',' << P.values()[i] << '\n';
    csv = os.str();
    return {ok, res};
}

Outcome cmd_reproduce(const RunConfig& cfg) {
    const TheoremReport rep = run_theorem_pipeline(cfg.theorem_config());
    const MapQuadruple& q = cfg.require_quad();
    const ContractionSpec& spec = cfg.require_contraction();
    const FuzzyMetric& M = q.metric();
    const double x = 1.0, y = 1.0, t = 1.0;
    Json spot{{"x", x},
              {"y", y},
              {"t", t},
              {"M_FxGy", M(q.F()(x), q.G()(y), t)},
              {"M_AxBy", M(q.A()(x), q.B()(y), t)},
              {"M_AxFx", M(q.A()(x), q.F()(x), t)},
              {"M_ByGy", M(q.B()(y), q.G()(y), t)},
              {"margin", contraction_margin(q, spec, x, y, t)}};
    Json claims{{"ea", rep.stage("ea").passed},
                {"containment", rep.stage("containment").passed},
                {"closedness", rep.stage("closedness").passed},
                {"contraction", rep.stage("contraction").passed},
                {"weak_compatibility", rep.stage("commutation").passed},
                {"unique_fixed_point", rep.uniqueness.unique},
                {"z", rep.fixed_points.certificates.empty() ? Json(nullptr) : Json(rep.fixed_points.certificates.front().z)}};
    return {rep.passed(), Json{{"maps", maps_info(q)}, {"claims", claims}, {"spot", spot}, {"theorem", to_json(rep)}}};
}

}  // namespace

std::string_view example6_config() { return detail::kExample6Config; }

CommandResult run_command(const CommandOptions& opts) {
    CommandResult out;
    const std::string& cmd = opts.command;
    try {
        if (std::find(kCommands.begin(), kCommands.end(), cmd) == kCommands.end())
            throw InputError("unknown command '" + cmd + "'");
        RunConfig cfg;
        if (opts.config)
            cfg = load_config(*opts.config, opts.overrides);
        else if (cmd == "reproduce-example6")
            cfg = load_config_text(example6_config(), "example6.ini", opts.overrides);
        else
            throw InputError("command '" + cmd + "' needs --config");

        Outcome o;
        if (cmd == "axioms") o = cmd_axioms(cfg);
        else if (cmd == "psi-check") o = cmd_psi_check(cfg);
        else if (cmd == "verify") o = cmd_verify(cfg);
        else if (cmd == "pairs") o = cmd_pairs(cfg);
        else if (cmd == "fixpoint") o = cmd_fixpoint(cfg);
        else if (cmd == "theorem") o = cmd_theorem(cfg);
        else if (cmd == "dp-solve") o = cmd_dp_solve(cfg, out.csv);
        else o = cmd_reproduce(cfg);

        out.exit_code = o.passed ? 0 : 1;
        out.report = make_envelope(cmd, out.exit_code, std::move(o.results));
    } catch (const InputError& e) {
        out = {2, make_error_envelope(cmd, "input", e.what()), std::nullopt};
    } catch (const NumericalError& e) {
        out = {2, make_error_envelope(cmd, "numerical", e.what()), std::nullopt};
    }
    return out;
}

}  // namespace fuzzyfp
