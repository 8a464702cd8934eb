#include "fuzzyfp/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fuzzyfp/expr.hpp"

namespace fuzzyfp {

namespace {

enum class Kind { number, text, boolean, expr, expr_list };

struct KeySpec {
    std::string_view key;
    Kind kind;
    std::vector<std::string> params;  // expression variables
};

using SectionSpec = std::vector<KeySpec>;

const std::map<std::string, SectionSpec, std::less<>>& schema() {
    static const std::map<std::string, SectionSpec, std::less<>> s{
        {"carrier", {{"lo", Kind::number, {}}, {"hi", Kind::number, {}}, {"grid", Kind::number, {}}}},
        {"metric",
         {{"tnorm", Kind::text, {}},
          {"tnorm_expr", Kind::expr, {"a", "b"}},
          {"distance", Kind::expr, {"x", "y"}},
          {"membership", Kind::expr, {"x", "y", "t"}},
          {"label", Kind::text, {}}}},
        {"maps",
         {{"A", Kind::expr, {"x"}}, {"B", Kind::expr, {"x"}}, {"F", Kind::expr, {"x"}}, {"G", Kind::expr, {"x"}}}},
        {"families",
         {{"A", Kind::expr_list, {"x"}},
          {"B", Kind::expr_list, {"x"}},
          {"F", Kind::expr_list, {"x"}},
          {"G", Kind::expr_list, {"x"}}}},
        {"psi",
         {{"example", Kind::text, {}},
          {"k", Kind::number, {}},
          {"a", Kind::number, {}},
          {"delta", Kind::expr, {"u"}},
          {"delta3", Kind::expr, {"u1", "u2", "u3"}},
          {"density", Kind::expr, {"s"}},
          {"expr", Kind::expr, {"u1", "u2", "u3", "u4"}},
          {"variant", Kind::text, {}},
          {"grid", Kind::number, {}}}},
        {"phi", {{"kind", Kind::text, {}}, {"density", Kind::expr, {"s"}}, {"expr", Kind::expr, {"s"}}}},
        {"contraction",
         {{"form", Kind::text, {}},
          {"k", Kind::number, {}},
          {"a", Kind::number, {}},
          {"delta", Kind::expr, {"u"}},
          {"delta3", Kind::expr, {"u1", "u2", "u3"}},
          {"density", Kind::expr, {"s"}},
          {"grid", Kind::number, {}},
          {"t_grid", Kind::text, {}},
          {"refine", Kind::boolean, {}}}},
        {"sequences",
         {{"x", Kind::expr, {"n"}},
          {"y", Kind::expr, {"n"}},
          {"tail_start", Kind::number, {}},
          {"tail_len", Kind::number, {}},
          {"r", Kind::expr, {"x", "n"}},
          {"p", Kind::expr, {"x", "n"}},
          {"value_tail_start", Kind::number, {}},
          {"value_tail_len", Kind::number, {}}}},
        {"theorem",
         {{"ea_pair", Kind::text, {}},
          {"containment", Kind::text, {}},
          {"closure", Kind::boolean, {}},
          {"closed", Kind::text, {}},
          {"open_lo", Kind::boolean, {}},
          {"open_hi", Kind::boolean, {}},
          {"commutation", Kind::text, {}},
          {"R", Kind::number, {}}}},
        {"dp",
         {{"lo", Kind::number, {}},
          {"hi", Kind::number, {}},
          {"grid", Kind::number, {}},
          {"decisions", Kind::text, {}},
          {"q", Kind::expr, {"x", "y"}},
          {"L1", Kind::expr, {"x", "y", "z"}},
          {"L2", Kind::expr, {"x", "y", "z"}},
          {"N1", Kind::expr, {"x", "y", "z"}},
          {"N2", Kind::expr, {"x", "y", "z"}},
          {"tau", Kind::expr, {"x", "y"}},
          {"Lambda", Kind::number, {}},
          {"beta", Kind::number, {}},
          {"lambda", Kind::expr, {"u"}},
          {"max_iter", Kind::number, {}},
          {"random_pairs", Kind::number, {}}}},
        {"tolerances",
         {{"coincidence", Kind::number, {}},
          {"fixed_point", Kind::number, {}},
          {"tail", Kind::number, {}},
          {"containment", Kind::number, {}},
          {"closed", Kind::number, {}},
          {"quad", Kind::number, {}},
          {"dp", Kind::number, {}}}},
        {"axioms", {{"random_triples", Kind::number, {}}, {"remark3_r", Kind::number, {}}}},
    };
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> to_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// Parsed, schema-checked view of the document. Every expression is
// compiled here, before anything is constructed.
class Reader {
public:
    explicit Reader(const IniDocument& doc) : doc_(doc) {
        for (const auto& [name, section] : doc.sections) {
            const auto spec_it = schema().find(name);
            if (spec_it == schema().end()) throw ConfigError(doc.file, section.line, "unknown section [" + name + "]");
            for (const auto& [key, entry] : section.entries) {
                const KeySpec* ks = nullptr;
                for (const auto& k : spec_it->second)
                    if (k.key == key) ks = &k;
                if (!ks) {
                    std::string allowed;
                    for (const auto& k : spec_it->second) allowed += (allowed.empty() ? "" : ", ") + std::string(k.key);
                    throw ConfigError(doc.file, entry.line,
                                      "unknown key '" + key + "' in [" + name + "] (expected one of " + allowed + ")");
                }
                check(name, key, entry, *ks);
            }
        }
    }

    bool has(std::string_view section) const { return doc_.sections.count(section) > 0; }
    bool has(std::string_view section, std::string_view key) const {
        const auto it = doc_.sections.find(section);
        return it != doc_.sections.end() && it->second.entries.count(key) > 0;
    }
    int line(std::string_view section, std::string_view key) const {
        const auto it = doc_.sections.find(section);
        if (it == doc_.sections.end()) return 0;
        const auto e = it->second.entries.find(key);
        return e == it->second.entries.end() ? it->second.line : e->second.line;
    }
    int section_line(std::string_view section) const {
        const auto it = doc_.sections.find(section);
        return it == doc_.sections.end() ? 0 : it->second.line;
    }
    const std::string& raw(std::string_view section, std::string_view key) const {
        return doc_.sections.find(section)->second.entries.find(key)->second.value;
    }

    std::optional<double> number(std::string_view section, std::string_view key) const {
        if (!has(section, key)) return std::nullopt;
        return *to_number(raw(section, key));
    }
    double number_or(std::string_view section, std::string_view key, double fallback) const {
        return number(section, key).value_or(fallback);
    }
    std::size_t count_or(std::string_view section, std::string_view key, std::size_t fallback) const {
        const auto v = number(section, key);
        if (!v) return fallback;
        if (*v < 0.0 || *v != std::floor(*v)) error(section, key, "expected a nonnegative integer");
        return static_cast<std::size_t>(*v);
    }
    std::optional<std::string> text(std::string_view section, std::string_view key) const {
        if (!has(section, key)) return std::nullopt;
        return raw(section, key);
    }
    bool flag_or(std::string_view section, std::string_view key, bool fallback) const {
        if (!has(section, key)) return fallback;
        const std::string& v = raw(section, key);
        return v == "true" || v == "yes" || v == "1";
    }
    const expr::Compiled* expression(std::string_view section, std::string_view key) const {
        const auto it = exprs_.find(std::string(section) + "." + std::string(key));
        return it == exprs_.end() ? nullptr : &it->second.front();
    }
    const std::vector<expr::Compiled>* expression_list(std::string_view section, std::string_view key) const {
        const auto it = exprs_.find(std::string(section) + "." + std::string(key));
        return it == exprs_.end() ? nullptr : &it->second;
    }

    [[noreturn]] void error(std::string_view section, std::string_view key, const std::string& msg) const {
        throw ConfigError(doc_.file, line(section, key), "[" + std::string(section) + "] " + std::string(key) + ": " + msg);
    }
    [[noreturn]] void missing(std::string_view section, std::string_view key) const {
        if (!has(section)) throw ConfigError(doc_.file, 0, "missing section [" + std::string(section) + "]");
        throw ConfigError(doc_.file, section_line(section),
                          "[" + std::string(section) + "] is missing key '" + std::string(key) + "'");
    }
    template <class Fn>
    auto guard(std::string_view section, std::string_view key, Fn&& fn) const -> decltype(fn()) {
        try {
            return fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const InputError& e) {
            error(section, key, e.what());
        }
    }

private:
    void check(const std::string& section, const std::string& key, const IniEntry& entry, const KeySpec& ks) {
        auto fail = [&](const std::string& msg) {
            throw ConfigError(doc_.file, entry.line, "[" + section + "] " + key + ": " + msg);
        };
        switch (ks.kind) {
            case Kind::number:
                if (!to_number(entry.value)) fail("expected a number, found '" + entry.value + "'");
                break;
            case Kind::boolean:
                if (entry.value != "true" && entry.value != "false" && entry.value != "yes" && entry.value != "no" &&
                    entry.value != "1" && entry.value != "0")
                    fail("expected true or false, found '" + entry.value + "'");
                break;
            case Kind::text:
                if (entry.value.empty()) fail("expected a value");
                break;
            case Kind::expr:
            case Kind::expr_list: {
                std::vector<expr::Compiled> list;
                const auto parts = ks.kind == Kind::expr ? std::vector<std::string>{entry.value} : split(entry.value, '|');
                for (const auto& part : parts) {
                    try {
                        list.emplace_back(expr::Expr::parse(part), ks.params);
                    } catch (const InputError& e) {
                        fail(e.what());
                    }
                }
                exprs_.emplace(section + "." + key, std::move(list));
                break;
            }
        }
    }

    const IniDocument& doc_;
    std::map<std::string, std::vector<expr::Compiled>> exprs_;
};

std::function<double(double)> unary(const expr::Compiled& c) {
    return [c](double v) { return c({v}); };
}

std::string source(const expr::Compiled& c) { return c.expr().source(); }

Carrier build_carrier(const Reader& r, std::string_view section, const Overrides& ov, std::size_t default_grid) {
    const auto lo = r.number(section, "lo");
    if (!lo) r.missing(section, "lo");
    const auto hi = r.number(section, "hi");
    if (!hi) r.missing(section, "hi");
    const std::size_t n = ov.grid.value_or(r.count_or(section, "grid", default_grid));
    return r.guard(section, "grid", [&] { return Carrier(*lo, *hi, n); });
}

FuzzyMetric build_metric(const Reader& r, const Carrier& X) {
    TNorm tn = TNorm::product();
    if (const auto* e = r.expression("metric", "tnorm_expr")) {
        tn = TNorm::custom([c = *e](double a, double b) { return c({a, b}); }, source(*e));
    } else if (const auto name = r.text("metric", "tnorm")) {
        tn = r.guard("metric", "tnorm", [&] { return TNorm::from_name(*name); });
    }
    if (const auto* m = r.expression("metric", "membership")) {
        const std::string label = r.text("metric", "label").value_or("custom");
        return r.guard("metric", "membership", [&] {
            return FuzzyMetric(X, [c = *m](double x, double y, double t) { return c({x, y, t}); }, tn, label);
        });
    }
    CrispMetric d = [](double x, double y) { return std::abs(x - y); };
    if (const auto* e = r.expression("metric", "distance")) d = [c = *e](double x, double y) { return c({x, y}); };
    return r.guard("metric", "distance", [&] { return standard_fuzzy_metric(X, d, tn); });
}

std::optional<Density> density_of(const Reader& r, std::string_view section) {
    const auto* e = r.expression(section, "density");
    if (!e) return std::nullopt;
    return Density{unary(*e), source(*e)};
}

PsiFunction build_psi(const Reader& r, double quad_tol) {
    const auto name = r.text("psi", "example");
    if (!name) r.missing("psi", "example");
    const PsiExample ex = r.guard("psi", "example", [&] { return psi_example_from_name(*name); });
    PsiParams p;
    p.k = r.number("psi", "k");
    p.a = r.number("psi", "a");
    if (const auto* e = r.expression("psi", "delta")) p.delta = unary(*e);
    if (const auto* e = r.expression("psi", "delta3"))
        p.delta3 = [c = *e](double a, double b, double d) { return c({a, b, d}); };
    p.density = density_of(r, "psi");
    p.quad_tol = quad_tol;
    if (const auto* e = r.expression("psi", "expr")) {
        p.custom = [c = *e](double a, double b, double d, double f) { return c({a, b, d, f}); };
        p.description = source(*e);
    }
    return r.guard("psi", "example", [&] { return make_psi(ex, std::move(p)); });
}

AlteringDistance build_phi(const Reader& r, double quad_tol) {
    const std::string kind = r.text("phi", "kind").value_or("linear");
    if (kind == "linear" || kind == "quadratic") return builtin_altering(kind);
    if (kind == "integral") {
        const auto d = density_of(r, "phi");
        if (!d) r.missing("phi", "density");
        return r.guard("phi", "density", [&] { return make_integral_altering(*d, quad_tol); });
    }
    if (kind == "custom") {
        const auto* e = r.expression("phi", "expr");
        if (!e) r.missing("phi", "expr");
        const auto fn = unary(*e);
        const AlteringReport rep = r.guard("phi", "expr", [&] { return verify_altering(fn, 101); });
        if (!rep.passed) {
            for (const auto& c : rep.checks)
                if (!c.passed) r.error("phi", "expr", "not an altering distance (" + c.condition + " fails)");
        }
        return AlteringDistance(fn, {AlteringKind::custom, source(*e), 1.0, 0.0});
    }
    r.error("phi", "kind", "unknown kind '" + kind + "' (expected linear, quadratic, integral or custom)");
}

ContractionSpec build_contraction(const Reader& r, const RunConfig& cfg) {
    const auto form = r.text("contraction", "form");
    if (!form) r.missing("contraction", "form");
    ContractionSpec s;
    s.form = r.guard("contraction", "form", [&] { return contraction_form_from_name(*form); });
    s.psi = cfg.psi;
    s.phi = cfg.phi;
    s.quad_tol = cfg.quad_tol;
    const PsiParams* pp = cfg.psi ? &cfg.psi->params() : nullptr;
    s.k = r.number("contraction", "k");
    if (!s.k && pp) s.k = pp->k;
    s.a = r.number("contraction", "a");
    if (!s.a && pp) s.a = pp->a;
    if (const auto* e = r.expression("contraction", "delta"))
        s.delta = unary(*e);
    else if (pp)
        s.delta = pp->delta;
    if (const auto* e = r.expression("contraction", "delta3"))
        s.delta3 = [c = *e](double a, double b, double d) { return c({a, b, d}); };
    else if (pp)
        s.delta3 = pp->delta3;
    s.density = density_of(r, "contraction");
    if (!s.density && pp) s.density = pp->density;
    if (!s.density && cfg.phi && cfg.phi->provenance().kind == AlteringKind::integral) {
        // fall back to the density behind an integral phi
        if (const auto d = density_of(r, "phi")) s.density = d;
    }
    r.guard("contraction", "form", [&] { validate(s); });
    return s;
}

SequenceSpec build_sequence(const Reader& r, std::string_view key) {
    const auto* e = r.expression("sequences", key);
    SequenceSpec s;
    s.generator = unary(*e);
    s.description = std::string(key) + "_n = " + source(*e);
    s.tail_start = r.count_or("sequences", "tail_start", s.tail_start);
    s.tail_len = r.count_or("sequences", "tail_len", s.tail_len);
    if (s.tail_len < 2) r.error("sequences", "tail_len", "need at least 2 tail terms");
    return s;
}

ValueSequence build_value_sequence(const Reader& r, std::string_view key) {
    const auto* e = r.expression("sequences", key);
    ValueSequence s;
    s.generator = [c = *e](double x, double n) { return c({x, n}); };
    s.description = std::string(key) + "_n(x) = " + source(*e);
    s.tail_start = r.count_or("sequences", "value_tail_start", s.tail_start);
    s.tail_len = r.count_or("sequences", "value_tail_len", s.tail_len);
    if (s.tail_len == 0) r.error("sequences", "value_tail_len", "need at least 1 tail term");
    return s;
}

Family build_family(const Reader& r, const Carrier& X, std::string_view key) {
    Family fam;
    const auto* list = r.expression_list("families", key);
    for (const auto& c : *list) {
        const std::string label = source(c);
        fam.push_back(r.guard("families", key, [&] { return SelfMap(X, unary(c), label); }));
    }
    return fam;
}

DPProblem build_dp(const Reader& r, const Overrides& ov, std::uint64_t seed) {
    const Carrier W = build_carrier(r, "dp", ov, 201);
    const std::string dec = r.text("dp", "decisions").value_or("0:0.1:1");
    const std::vector<double> D = r.guard("dp", "decisions", [&] { return parse_number_list(dec); });
    for (std::string_view k : {"q", "L1", "L2", "N1", "N2", "tau"})
        if (!r.has("dp", k)) r.missing("dp", k);
    const auto Lambda = r.number("dp", "Lambda");
    if (!Lambda) r.missing("dp", "Lambda");
    const auto beta = r.number("dp", "beta");
    if (!beta) r.missing("dp", "beta");
    return r.guard("dp", "beta", [&] {
        return make_dp_problem(W, D, r.raw("dp", "q"), r.raw("dp", "L1"), r.raw("dp", "L2"), r.raw("dp", "N1"),
                               r.raw("dp", "N2"), r.raw("dp", "tau"), *Lambda, *beta, seed);
    });
}

}  // namespace

ConfigError::ConfigError(std::string file, int line, const std::string& message)
    : InputError(file + ":" + std::to_string(line) + ": " + message), file_(std::move(file)), line_(line) {}

IniDocument parse_ini(std::string_view text, const std::string& file) {
    IniDocument doc;
    doc.file = file;
    IniSection* cur = nullptr;
    std::string cur_name;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(file, lineno, "malformed section header, expected '[name]'");
            cur_name = trim(std::string_view(line).substr(1, line.size() - 2));
            if (doc.sections.count(cur_name)) throw ConfigError(file, lineno, "duplicate section [" + cur_name + "]");
            cur = &doc.sections[cur_name];
            cur->line = lineno;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(file, lineno, "expected 'key = value'");
        if (!cur) throw ConfigError(file, lineno, "key outside of any section, expected '[name]' first");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError(file, lineno, "expected a key before '='");
        if (cur->entries.count(key))
            throw ConfigError(file, lineno, "duplicate key '" + key + "' in [" + cur_name + "]");
        cur->entries[key] = {value, lineno};
    }
    return doc;
}

std::vector<double> parse_number_list(std::string_view text) {
    const std::string t = trim(text);
    std::vector<double> out;
    if (t.find(':') != std::string::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3) throw InputError("range '" + t + "' must be start:step:stop");
        const auto a = to_number(parts[0]), h = to_number(parts[1]), b = to_number(parts[2]);
        if (!a || !h || !b || !(*h > 0.0) || *b < *a) throw InputError("range '" + t + "' must be start:step:stop with step > 0");
        const auto count = static_cast<std::size_t>(std::floor((*b - *a) / *h + 1e-9));
        for (std::size_t i = 0; i <= count; ++i) out.push_back(i == count && std::abs(*a + *h * i - *b) < 1e-9 * *h ? *b : *a + *h * i);
        return out;
    }
    for (const auto& p : split(t, ',')) {
        const auto v = to_number(p);
        if (!v) throw InputError("'" + p + "' is not a number");
        out.push_back(*v);
    }
    return out;
}

const FuzzyMetric& RunConfig::require_metric() const {
    if (!metric) throw ConfigError(file, 0, "missing section [carrier]");
    return *metric;
}

const MapQuadruple& RunConfig::require_quad() const {
    if (!quad) throw ConfigError(file, 0, "missing section [maps] (or [families])");
    return *quad;
}

const PsiFunction& RunConfig::require_psi() const {
    if (!psi) throw ConfigError(file, 0, "missing section [psi]");
    return *psi;
}

const ContractionSpec& RunConfig::require_contraction() const {
    if (!contraction) throw ConfigError(file, 0, "missing section [contraction]");
    return *contraction;
}

const SequenceSpec& RunConfig::require_sequence() const {
    if (!seq_x) throw ConfigError(file, 0, "missing key 'x' in [sequences]");
    return *seq_x;
}

const DPProblem& RunConfig::require_dp() const {
    if (!dp) throw ConfigError(file, 0, "missing section [dp]");
    return *dp;
}

TheoremConfig RunConfig::theorem_config() const {
    TheoremConfig c{require_quad(), require_contraction(), plan, theorem.ea_pair, require_sequence(),
                    theorem.containment, theorem.containment_closure, theorem.closed, theorem.closed_options,
                    theorem.commutation, theorem.R, tolerances, families};
    return c;
}

RunConfig load_config_text(std::string_view text, const std::string& file, const Overrides& ov) {
    const IniDocument doc = parse_ini(text, file);
    if (doc.sections.empty()) throw ConfigError(file, 1, "config is empty, expected at least one '[section]'");
    const Reader r(doc);

    RunConfig cfg;
    cfg.file = file;
    cfg.seed = ov.seed.value_or(0);
    cfg.jobs = ov.jobs.value_or(1);
    if (cfg.jobs < 1) throw InputError("--jobs must be at least 1");

    // tolerances first: later components use them
    auto tol = [&](std::string_view key, double& slot) {
        if (const auto v = r.number("tolerances", key)) {
            if (!(*v > 0.0)) r.error("tolerances", key, "must be positive");
            slot = *v;
        }
    };
    tol("coincidence", cfg.tolerances.coincidence);
    tol("fixed_point", cfg.tolerances.fixed_point);
    tol("tail", cfg.tolerances.tail);
    tol("containment", cfg.tolerances.containment);
    tol("closed", cfg.tolerances.closed);
    tol("quad", cfg.quad_tol);
    tol("dp", cfg.dp_settings.tol);
    if (ov.tol) {
        if (!(*ov.tol > 0.0)) throw InputError("--tol must be positive");
        cfg.tolerances.fixed_point = *ov.tol;
        cfg.dp_settings.tol = *ov.tol;
    }

    if (r.has("carrier")) {
        cfg.carrier = build_carrier(r, "carrier", ov, 101);
        cfg.metric = build_metric(r, *cfg.carrier);
    } else {
        for (std::string_view s : {"metric", "maps", "families"})
            if (r.has(s)) throw ConfigError(file, r.section_line(s), "[" + std::string(s) + "] needs a [carrier] section");
    }

    if (r.has("maps") || r.has("families")) {
        const Carrier& X = *cfg.carrier;
        std::vector<SelfMap> maps;
        if (r.has("families")) {
            FamilySet fs;
            for (std::string_view k : {"A", "B", "F", "G"})
                if (!r.has("families", k)) r.missing("families", k);
            fs.A = build_family(r, X, "A");
            fs.B = build_family(r, X, "B");
            fs.F = build_family(r, X, "F");
            fs.G = build_family(r, X, "G");
            if (r.has("maps"))
                throw ConfigError(file, r.section_line("maps"), "[maps] and [families] are mutually exclusive");
            for (const Family* f : {&fs.A, &fs.B, &fs.F, &fs.G}) maps.push_back(compose_family(*f));
            cfg.families = std::move(fs);
        } else {
            for (std::string_view k : {"A", "B", "F", "G"}) {
                const auto* e = r.expression("maps", k);
                if (!e) r.missing("maps", k);
                maps.push_back(r.guard("maps", k, [&] { return SelfMap(X, unary(*e), source(*e)); }));
            }
        }
        cfg.quad.emplace(maps[0], maps[1], maps[2], maps[3], *cfg.metric);
    }

    if (r.has("psi")) {
        cfg.psi = build_psi(r, cfg.quad_tol);
        if (const auto v = r.text("psi", "variant"))
            cfg.psi_settings.variant = r.guard("psi", "variant", [&] { return condition_variant_from_name(*v); });
        cfg.psi_settings.grid_n = r.count_or("psi", "grid", cfg.psi_settings.grid_n);
        if (cfg.psi_settings.grid_n < 3) r.error("psi", "grid", "need at least 3 grid points");
    }
    if (r.has("phi")) cfg.phi = build_phi(r, cfg.quad_tol);

    cfg.plan.jobs = cfg.jobs;
    if (r.has("contraction")) {
        cfg.plan.grid_n = r.count_or("contraction", "grid", 0);
        if (ov.grid) cfg.plan.grid_n = 0;
        if (const auto t = r.text("contraction", "t_grid"))
            cfg.plan.t_grid = r.guard("contraction", "t_grid", [&] { return parse_number_list(*t); });
        cfg.plan.refine = r.flag_or("contraction", "refine", true);
    }
    if (ov.t_grid) cfg.plan.t_grid = *ov.t_grid;
    for (double t : cfg.plan.t_grid)
        if (!(t > 0.0)) throw InputError("t-grid values must be positive");
    if (r.has("contraction")) cfg.contraction = build_contraction(r, cfg);

    if (r.has("sequences", "x")) cfg.seq_x = build_sequence(r, "x");
    if (r.has("sequences", "y")) cfg.seq_y = build_sequence(r, "y");
    if (r.has("sequences", "r")) cfg.dp_settings.r_seq = build_value_sequence(r, "r");
    if (r.has("sequences", "p")) cfg.dp_settings.p_seq = build_value_sequence(r, "p");

    if (r.has("theorem")) {
        auto& t = cfg.theorem;
        if (const auto v = r.text("theorem", "ea_pair"))
            t.ea_pair = r.guard("theorem", "ea_pair", [&] { return ea_pair_from_name(*v); });
        if (const auto v = r.text("theorem", "containment"))
            t.containment = r.guard("theorem", "containment", [&] { return containment_from_name(*v); });
        t.containment_closure = r.flag_or("theorem", "closure", false);
        if (const auto v = r.text("theorem", "closed"))
            t.closed = r.guard("theorem", "closed", [&] { return closed_target_from_name(*v); });
        t.closed_options.open_lo = r.flag_or("theorem", "open_lo", false);
        t.closed_options.open_hi = r.flag_or("theorem", "open_hi", false);
        if (const auto v = r.text("theorem", "commutation"))
            t.commutation = r.guard("theorem", "commutation", [&] { return commutation_variant_from_name(*v); });
        t.R = r.number_or("theorem", "R", 1.0);
        if (!(t.R > 0.0)) r.error("theorem", "R", "must be positive");
    }

    cfg.axioms.random_triples = r.count_or("axioms", "random_triples", cfg.axioms.random_triples);
    cfg.axioms.remark3_r = r.number("axioms", "remark3_r");

    if (r.has("dp")) {
        cfg.dp = build_dp(r, ov, cfg.seed);
        auto& d = cfg.dp_settings;
        d.max_iter = r.count_or("dp", "max_iter", d.max_iter);
        if (d.max_iter == 0) r.error("dp", "max_iter", "must be positive");
        d.random_pairs = r.count_or("dp", "random_pairs", d.random_pairs);
        if (const auto* e = r.expression("dp", "lambda")) {
            d.lambda = unary(*e);
            d.lambda_source = source(*e);
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path, const Overrides& ov) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, 0, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str(), path, ov);
}

}  // namespace fuzzyfp
