#include "fuzzyfp/implicit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fuzzyfp/errors.hpp"
#include "fuzzyfp/parallel.hpp"

namespace fuzzyfp {

namespace {

constexpr std::array<std::pair<std::string_view, PsiExample>, 7> kExampleNames{{
    {"ex2_1", PsiExample::ex2_1},
    {"ex2_2", PsiExample::ex2_2},
    {"ex2_3", PsiExample::ex2_3},
    {"ex2_4", PsiExample::ex2_4},
    {"ex2_5", PsiExample::ex2_5},
    {"ex2_6", PsiExample::ex2_6},
    {"custom", PsiExample::custom},
}};

constexpr std::size_t kGaugeGrid = 201;
constexpr double kMonotoneTol = 1e-12;

double grid_point(std::size_t i, std::size_t n, double hi = 1.0) {
    if (i + 1 == n) return hi;
    return hi * static_cast<double>(i) / static_cast<double>(n - 1);
}

void require_k(const PsiParams& p, std::string_view who) {
    if (!p.k) throw InputError(std::string(who) + " requires parameter k");
    if (!(*p.k > 0.0 && *p.k < 1.0)) {
        std::ostringstream os;
        os << who << ": k = " << *p.k << " must satisfy 0 < k < 1";
        throw InputError(os.str());
    }
}

// delta(u) < u for grid u in (0, hi], delta >= 0.
void require_subidentity(const Gauge1& delta, double hi, std::string_view who) {
    if (!delta) throw InputError(std::string(who) + " requires a delta gauge");
    for (std::size_t i = 0; i < kGaugeGrid; ++i) {
        const double u = grid_point(i, kGaugeGrid, hi);
        const double d = delta(u);
        if (!(d >= 0.0) || (u > 0.0 && !(d < u))) {
            std::ostringstream os;
            os << who << ": delta(" << u << ") = " << d << " violates 0 <= delta(u) < u";
            throw InputError(os.str());
        }
    }
}

void require_density(const PsiParams& p, std::string_view who) {
    if (!p.density) throw InputError(std::string(who) + " requires a density");
    const PhiClassReport r = check_phi_class(*p.density, p.quad_tol);
    if (!r.passed) {
        std::ostringstream os;
        os << who << ": density '" << p.density->description << "' has no mass on [0, "
           << *r.failing_epsilon << "]";
        throw InputError(os.str());
    }
}

bool in_unit(double u) { return u >= 0.0 && u <= 1.0; }

}  // namespace

std::string_view to_string(PsiExample e) {
    for (const auto& [name, ex] : kExampleNames)
        if (ex == e) return name;
    return "custom";
}

PsiExample psi_example_from_name(std::string_view name) {
    for (const auto& [n, ex] : kExampleNames)
        if (n == name) return ex;
    throw InputError("unknown psi example '" + std::string(name) + "' (expected ex2_1 .. ex2_6 or custom)");
}

std::string_view to_string(ConditionVariant v) {
    return v == ConditionVariant::as_printed ? "as_printed" : "strict";
}

ConditionVariant condition_variant_from_name(std::string_view name) {
    if (name == "as_printed") return ConditionVariant::as_printed;
    if (name == "strict") return ConditionVariant::strict;
    throw InputError("unknown condition variant '" + std::string(name) + "' (expected as_printed or strict)");
}

std::string_view to_string(ConditionStatus s) {
    switch (s) {
        case ConditionStatus::holds: return "holds";
        case ConditionStatus::holds_vacuously: return "holds-vacuously";
        case ConditionStatus::fails: return "fails";
    }
    return "fails";
}

PsiFunction make_psi(PsiExample example, PsiParams params) {
    PsiFunction psi;
    psi.example_ = example;
    const std::string who(to_string(example));

    switch (example) {
        case PsiExample::ex2_1: {
            require_subidentity(params.delta, 1.0, who);
            psi.fn_ = [delta = params.delta](double u1, double u2, double u3, double u4) {
                return u1 - delta(std::max({u2, u3, u4}));
            };
            break;
        }
        case PsiExample::ex2_2: {
            require_k(params, who);
            psi.fn_ = [k = *params.k](double u1, double u2, double u3, double u4) {
                return u1 - k * std::min({u2, u3, u4});
            };
            break;
        }
        case PsiExample::ex2_3: {
            if (!params.delta3) throw InputError(who + " requires a three-argument delta gauge");
            for (std::size_t i = 1; i < kGaugeGrid; ++i) {
                const double u = grid_point(i, kGaugeGrid);
                const double d = std::max({params.delta3(0, u, 0), params.delta3(0, 0, u),
                                           params.delta3(u, 0, 0)});
                if (!(d < u)) {
                    std::ostringstream os;
                    os << who << ": max of delta on the axes at u = " << u << " is " << d
                       << ", not below u";
                    throw InputError(os.str());
                }
            }
            psi.fn_ = [delta = params.delta3](double u1, double u2, double u3, double u4) {
                return u1 - delta(u2, u3, u4);
            };
            break;
        }
        case PsiExample::ex2_4: {
            require_k(params, who);
            psi.fn_ = [k = *params.k](double u1, double u2, double u3, double u4) {
                return u1 - k * u2 - std::min(u3, u4);
            };
            break;
        }
        case PsiExample::ex2_5:
        case PsiExample::ex2_6: {
            require_density(params, who);
            if (example == PsiExample::ex2_5) {
                if (!params.a) throw InputError(who + " requires parameter a");
                if (!(*params.a >= 0.0 && *params.a < 1.0)) {
                    std::ostringstream os;
                    os << who << ": a = " << *params.a << " must satisfy 0 <= a < 1";
                    throw InputError(os.str());
                }
                psi.outer_ = [a = *params.a](double v1, double v2, double v3, double v4) {
                    return v1 - a * std::max({v2, v3, v4});
                };
            } else {
                const double mass = integrate_density(*params.density, 0.0, 1.0, params.quad_tol);
                require_subidentity(params.delta, std::max(1.0, mass), who);
                psi.outer_ = [delta = params.delta](double v1, double v2, double v3, double v4) {
                    return v1 - delta(std::max({v2, v3, v4}));
                };
            }
            psi.gauge_ = [d = *params.density, tol = params.quad_tol](double u) {
                return integrate_density(d, 0.0, 1.0 - u, tol);
            };
            psi.fn_ = [outer = psi.outer_, I = psi.gauge_](double u1, double u2, double u3, double u4) {
                return outer(I(u1), I(u2), I(u3), I(u4));
            };
            break;
        }
        case PsiExample::custom: {
            if (!params.custom) throw InputError("custom psi requires an evaluator");
            psi.fn_ = params.custom;
            break;
        }
    }
    psi.params_ = std::move(params);
    return psi;
}

double psi_eval(const PsiFunction& psi, double u1, double u2, double u3, double u4) {
    if (!in_unit(u1) || !in_unit(u2) || !in_unit(u3) || !in_unit(u4)) {
        std::ostringstream os;
        os << "psi arguments must lie in [0,1], got (" << u1 << ", " << u2 << ", " << u3 << ", " << u4
           << ")";
        throw InputError(os.str());
    }
    const double v = psi(u1, u2, u3, u4);
    if (!std::isfinite(v)) throw NumericalError("psi evaluated to a non-finite value");
    return v;
}

const ConditionResult& PsiReport::at(std::string_view condition) const {
    for (const auto& c : conditions)
        if (c.condition == condition) return c;
    throw std::out_of_range("no psi condition named " + std::string(condition));
}

bool PsiReport::all_hold() const {
    return std::none_of(conditions.begin(), conditions.end(),
                        [](const ConditionResult& c) { return c.status == ConditionStatus::fails; });
}

namespace {

// Nondecreasing sweeps of f in its first argument over `first`, for every
// (v2,v3,v4) drawn from `rest`. Witness = first decrease in scan order.
ConditionResult monotone_sweep(std::string name, const Psi4& f, const std::vector<double>& first,
                               const std::vector<double>& rest, int jobs,
                               const std::array<const char*, 4>& labels) {
    const std::size_t n = rest.size();
    const std::size_t combos = n * n * n;
    // Per combo: index of first decreasing step, or npos.
    std::vector<std::size_t> first_bad(combos, std::string::npos);
    parallel_for(combos, jobs, [&](std::size_t c) {
        const double v2 = rest[c / (n * n)];
        const double v3 = rest[(c / n) % n];
        const double v4 = rest[c % n];
        double prev = f(first[0], v2, v3, v4);
        for (std::size_t i = 1; i < first.size(); ++i) {
            const double cur = f(first[i], v2, v3, v4);
            if (cur < prev - kMonotoneTol) {
                first_bad[c] = i - 1;
                return;
            }
            prev = cur;
        }
    });

    ConditionResult r;
    r.condition = std::move(name);
    r.samples = combos * first.size();
    r.status = ConditionStatus::holds;
    for (std::size_t c = 0; c < combos; ++c) {
        if (first_bad[c] == std::string::npos) continue;
        const std::size_t i = first_bad[c];
        const double v2 = rest[c / (n * n)];
        const double v3 = rest[(c / n) % n];
        const double v4 = rest[c % n];
        r.status = ConditionStatus::fails;
        r.witness = Coordinates{{labels[0], first[i]},
                                {std::string(labels[0]) + "_next", first[i + 1]},
                                {labels[1], v2},
                                {labels[2], v3},
                                {labels[3], v4},
                                {"value", f(first[i], v2, v3, v4)},
                                {"value_next", f(first[i + 1], v2, v3, v4)}};
        break;
    }
    return r;
}

}  // namespace

PsiReport verify_psi(const PsiFunction& psi, ConditionVariant variant, std::size_t grid_n, int jobs) {
    if (grid_n < 3) throw InputError("psi verification grid needs at least 3 points");
    std::vector<double> grid(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i) grid[i] = grid_point(i, grid_n);

    PsiReport report;
    report.example = psi.example();
    report.variant = variant;

    const Psi4 f = [&psi](double a, double b, double c, double d) { return psi(a, b, c, d); };
    {
        ConditionResult r = monotone_sweep("psi1", f, grid, grid, jobs, {"u1", "u2", "u3", "u4"});
        r.note = "nondecreasing in u1 for every (u2,u3,u4) on the grid";
        report.conditions.push_back(std::move(r));
    }

    using Pattern = std::array<double, 4> (*)(double);
    const std::array<std::pair<const char*, Pattern>, 3> patterns{{
        {"psi2", [](double u) { return std::array<double, 4>{u, 0, u, 0}; }},
        {"psi3", [](double u) { return std::array<double, 4>{u, 0, 0, u}; }},
        {"psi4", [](double u) { return std::array<double, 4>{u, u, 0, 0}; }},
    }};
    for (const auto& [name, pattern] : patterns) {
        std::vector<double> values(grid_n);
        parallel_for(grid_n, jobs, [&](std::size_t i) {
            const auto args = pattern(grid[i]);
            values[i] = psi(args[0], args[1], args[2], args[3]);
        });
        ConditionResult r;
        r.condition = name;
        r.samples = grid_n;
        std::optional<std::size_t> bad;
        for (std::size_t i = 0; i < grid_n && !bad; ++i) {
            if (!(values[i] >= 0.0)) continue;  // antecedent false
            const double u = grid[i];
            const bool consequent = variant == ConditionVariant::as_printed ? u >= 0.0 : u <= 0.0;
            if (!consequent) bad = i;
        }
        if (bad) {
            const auto args = pattern(grid[*bad]);
            r.status = ConditionStatus::fails;
            r.witness = Coordinates{{"u", grid[*bad]}, {"u1", args[0]}, {"u2", args[1]},
                                    {"u3", args[2]}, {"u4", args[3]}, {"value", values[*bad]}};
            r.note = "psi >= 0 at the witness but u > 0";
        } else if (variant == ConditionVariant::as_printed) {
            r.status = ConditionStatus::holds_vacuously;
            r.note = "consequent u >= 0 is true everywhere on [0,1]";
        } else {
            r.status = ConditionStatus::holds;
            r.note = "psi >= 0 on the pattern only at u = 0";
        }
        report.conditions.push_back(std::move(r));
    }

    if (psi.integral_backed()) {
        const double top = psi.gauge()(0.0);
        std::vector<double> vgrid(grid_n);
        for (std::size_t i = 0; i < grid_n; ++i) vgrid[i] = grid_point(i, grid_n, top);
        ConditionResult r =
            monotone_sweep("psi1_gauge", psi.outer(), vgrid, vgrid, jobs, {"v1", "v2", "v3", "v4"});
        r.note = "outer relation nondecreasing in its first gauge coordinate v1 = I(u1)";
        report.conditions.push_back(std::move(r));
    }
    return report;
}

}  // namespace fuzzyfp
