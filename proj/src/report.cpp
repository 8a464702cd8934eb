#include "fuzzyfp/report.hpp"

namespace fuzzyfp {

namespace {

template <class T>
Json opt(const std::optional<T>& v) {
    if (!v) return nullptr;
    if constexpr (std::is_same_v<T, Coordinates>)
        return to_json(*v);
    else
        return *v;
}

Json hull(const Hull& h) { return Json{{"lo", h.lo}, {"hi", h.hi}}; }

}  // namespace

Json to_json(const Coordinates& c) {
    Json j = Json::object();
    for (const auto& [name, value] : c) j[name] = value;
    return j;
}

Json to_json(const AxiomCheck& c) {
    return Json{{"axiom", c.axiom},
                {"passed", c.passed},
                {"threshold", c.threshold},
                {"worst_margin", c.worst_margin},
                {"samples", c.samples},
                {"violations", c.violations},
                {"witness", opt(c.witness)},
                {"worst_point", to_json(c.worst_point)},
                {"note", c.note}};
}

Json to_json(const AxiomReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return Json{{"all_passed", r.all_passed()}, {"checks", checks}};
}

Json to_json(const Remark3Result& r) {
    Json w = nullptr;
    if (r.witness) w = Json{{"x", r.witness->first}, {"y", r.witness->second}};
    return Json{{"pairs_scanned", r.pairs_scanned}, {"witness_count", r.witness_count}, {"witness", w}};
}

Json to_json(const ConditionResult& c) {
    return Json{{"condition", c.condition},
                {"status", to_string(c.status)},
                {"samples", c.samples},
                {"witness", opt(c.witness)},
                {"note", c.note}};
}

Json to_json(const PsiReport& r) {
    Json conds = Json::array();
    for (const auto& c : r.conditions) conds.push_back(to_json(c));
    return Json{{"example", to_string(r.example)},
                {"variant", to_string(r.variant)},
                {"all_hold", r.all_hold()},
                {"conditions", conds}};
}

Json to_json(const VerificationReport& r) {
    return Json{{"form", r.form},
                {"passed", r.passed},
                {"worst_margin", r.worst_margin},
                {"best_margin", r.best_margin},
                {"mean_margin", r.mean_margin},
                {"violations", r.violations},
                {"samples", r.samples},
                {"resolutions", r.resolutions},
                {"witness", opt(r.witness)},
                {"worst_point", to_json(r.worst_point)}};
}

Json to_json(const CoincidenceResult& r) { return Json{{"points", r.points}, {"everywhere", r.everywhere}}; }

Json to_json(const PredicateReport& r) {
    return Json{{"check", r.check},
                {"passed", r.passed},
                {"worst_margin", r.worst_margin},
                {"samples", r.samples},
                {"witness", opt(r.witness)},
                {"note", r.note}};
}

Json to_json(const TailStats& t) { return Json{{"last", t.last}, {"spread", t.spread}}; }

Json to_json(const EAReport& r) {
    Json tails = Json::array();
    for (const auto& t : r.tails) tails.push_back(to_json(t));
    return Json{{"passed", r.passed}, {"limit", r.limit}, {"tails", tails}, {"diagnostics", r.diagnostics}};
}

Json to_json(const CompatibilityReport& r) {
    return Json{{"verdict", to_string(r.verdict)},
                {"first_images", to_json(r.first_images)},
                {"second_images", to_json(r.second_images)},
                {"witness_t", opt(r.witness_t)},
                {"membership_limit", r.membership_limit},
                {"diagnostics", r.diagnostics}};
}

Json to_json(const ContainmentReport& r) {
    return Json{{"passed", r.passed},
                {"closure", r.closure},
                {"inner", hull(r.inner)},
                {"outer", hull(r.outer)},
                {"witness", opt(r.witness)}};
}

Json to_json(const ClosedReport& r) {
    return Json{{"verdict", to_string(r.verdict)},
                {"hull", hull(r.hull)},
                {"monotone_pieces", r.monotone_pieces},
                {"note", r.note}};
}

Json to_json(const FamilyCommutingReport& r) {
    return Json{{"passed", r.passed},
                {"pairs_checked", r.pairs_checked},
                {"samples", r.samples},
                {"witness", opt(r.witness)},
                {"witness_pair", r.witness_pair}};
}

Json to_json(const FixedPointCertificate& c) {
    return Json{{"z", c.z},
                {"residuals", Json{{"A", c.residuals[0]}, {"B", c.residuals[1]}, {"F", c.residuals[2]}, {"G", c.residuals[3]}}},
                {"max_residual", c.max_residual()}};
}

Json to_json(const FixedPointSearch& s) {
    Json certs = Json::array();
    for (const auto& c : s.certificates) certs.push_back(to_json(c));
    Json clusters = Json::array();
    for (const auto& h : s.clusters) clusters.push_back(hull(h));
    return Json{{"grid_n", s.grid_n},
                {"all_fixed", s.all_fixed},
                {"min_residual", s.min_residual},
                {"certificates", certs},
                {"clusters", clusters}};
}

Json to_json(const RefineOutcome& r) {
    return Json{{"converged", r.converged}, {"iterations", r.iterations}, {"best", to_json(r.best)}};
}

Json to_json(const UniquenessScan& u) {
    return Json{{"unique", u.unique}, {"grid_n", u.grid_n}, {"certificates", u.certificates}, {"note", u.note}};
}

Json to_json(const TheoremReport& r) {
    Json stages = Json::array();
    for (const auto& s : r.stages) stages.push_back(Json{{"stage", s.stage}, {"passed", s.passed}, {"summary", s.summary}});
    Json j{{"passed", r.passed()},
           {"hypotheses_passed", r.hypotheses_passed()},
           {"stages", stages},
           {"ea", to_json(r.ea)},
           {"containment", to_json(r.containment)},
           {"closedness", to_json(r.closed)},
           {"contraction", to_json(r.contraction)},
           {"coincidences", Json{{"AF", to_json(r.coincidences_AF)}, {"BG", to_json(r.coincidences_BG)}}},
           {"commutation", Json{{"AF", to_json(r.commutation_AF)}, {"BG", to_json(r.commutation_BG)}}}};
    j["family_commuting"] = r.family_commuting ? to_json(*r.family_commuting) : Json(nullptr);
    j["family_fixed"] = r.family_fixed ? to_json(*r.family_fixed) : Json(nullptr);
    j["fixed_points"] = to_json(r.fixed_points);
    j["uniqueness"] = to_json(r.uniqueness);
    return j;
}

Json to_json(const IterationResult& r) {
    return Json{{"iterations", r.iterations},
                {"final_residual", r.final_residual},
                {"trace", r.trace},
                {"envelope_excess", r.envelope_excess},
                {"envelope_ok", r.envelope_ok}};
}

Json to_json(const SystemReport& r) {
    Json ops = Json::object();
    Json cross = Json::object();
    for (std::size_t i = 0; i < kBellmanOps.size(); ++i) {
        const std::string name(to_string(kBellmanOps[i]));
        if (i < r.runs.size()) ops[name] = to_json(r.runs[i]);
        Json row = Json::object();
        for (std::size_t k = 0; k < kBellmanOps.size(); ++k) row[std::string(to_string(kBellmanOps[k]))] = r.cross[i][k];
        cross[name] = row;
    }
    return Json{{"tol", r.tol},
                {"operators", ops},
                {"cross_residuals", cross},
                {"agreement", r.agreement},
                {"common_solution", r.common_solution}};
}

Json to_json(const TailCondition& c) {
    return Json{{"condition", c.condition},
                {"passed", c.passed},
                {"limit_gap", c.limit_gap},
                {"cauchy_spread", c.cauchy_spread},
                {"commutator", c.commutator},
                {"note", c.note}};
}

Json to_json(const ThetaCondition& c) {
    return Json{{"passed", c.passed},
                {"pairs", c.pairs},
                {"worst_margin", c.worst_margin},
                {"lambda_ge", c.lambda_ge},
                {"lambda_gt", c.lambda_gt},
                {"witness", opt(c.witness)},
                {"note", c.note}};
}

Json to_json(const Theorem53Report& r) {
    return Json{{"i", to_json(r.cond_i)}, {"ii", to_json(r.cond_ii)}, {"iii", to_json(r.cond_iii)}};
}

Json make_envelope(std::string_view command, int exit_code, Json results) {
    return Json{{"tool", kToolName},
                {"schema_version", kSchemaVersion},
                {"command", command},
                {"status", exit_code == 0 ? "pass" : "fail"},
                {"exit_code", exit_code},
                {"results", std::move(results)},
                {"error", nullptr}};
}

Json make_error_envelope(std::string_view command, std::string_view kind, std::string_view message) {
    return Json{{"tool", kToolName},
                {"schema_version", kSchemaVersion},
                {"command", command},
                {"status", "error"},
                {"exit_code", 2},
                {"results", nullptr},
                {"error", Json{{"kind", kind}, {"message", message}}}};
}

std::string dump_report(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace fuzzyfp
