#include "fuzzyfp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fuzzyfp/errors.hpp"
#include "fuzzyfp/parallel.hpp"

namespace fuzzyfp {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

struct Probe {
    double x = 0.0;
    double r = 0.0;
};

double residual(const MapQuadruple& quad, double x) {
    const FixedPointCertificate c = certify(quad, x);
    const double r = c.max_residual();
    if (!std::isfinite(r)) {
        std::ostringstream os;
        os << "common fixed point residual is not finite at x = " << x;
        throw NumericalError(os.str());
    }
    return r;
}

// Golden-section minimisation of r on [a, b]; the endpoints count as
// candidates so boundary minima are found exactly.
Probe golden(const MapQuadruple& quad, double a, double b, std::size_t max_iter, double tol,
             std::size_t* used = nullptr) {
    Probe best{a, residual(quad, a)};
    auto consider = [&](double x, double r) {
        if (r < best.r) best = {x, r};
    };
    consider(b, residual(quad, b));
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double rc = residual(quad, c), rd = residual(quad, d);
    consider(c, rc);
    consider(d, rd);
    std::size_t it = 0;
    while (it < max_iter && best.r >= tol && b - a > 1e-15 * std::max(1.0, std::abs(a))) {
        ++it;
        if (rc <= rd) {
            b = d;
            d = c;
            rd = rc;
            c = b - kInvPhi * (b - a);
            rc = residual(quad, c);
            consider(c, rc);
        } else {
            a = c;
            c = d;
            rc = rd;
            d = a + kInvPhi * (b - a);
            rd = residual(quad, d);
            consider(d, rd);
        }
    }
    if (used) *used += it;
    return best;
}

void merge_certificates(FixedPointSearch& out, double spacing) {
    std::vector<std::size_t> order(out.certificates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return out.certificates[l].z < out.certificates[r].z;
    });
    std::vector<FixedPointCertificate> certs;
    std::vector<Hull> hulls;
    for (std::size_t i : order) {
        const auto& c = out.certificates[i];
        const Hull& h = out.clusters[i];
        if (!certs.empty() && c.z - certs.back().z <= spacing * (1.0 + 1e-9)) {
            if (c.max_residual() < certs.back().max_residual()) certs.back() = c;
            hulls.back().lo = std::min(hulls.back().lo, h.lo);
            hulls.back().hi = std::max(hulls.back().hi, h.hi);
            continue;
        }
        certs.push_back(c);
        hulls.push_back(h);
    }
    out.certificates = std::move(certs);
    out.clusters = std::move(hulls);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

double FixedPointCertificate::max_residual() const {
    return std::max({residuals[0], residuals[1], residuals[2], residuals[3]});
}

FixedPointCertificate certify(const MapQuadruple& quad, double z) {
    FixedPointCertificate c;
    c.z = z;
    c.residuals = {std::abs(quad.A()(z) - z), std::abs(quad.B()(z) - z), std::abs(quad.F()(z) - z),
                   std::abs(quad.G()(z) - z)};
    return c;
}

FixedPointSearch find_common_fixed_points(const MapQuadruple& quad, double tol, std::size_t grid_n,
                                          int jobs) {
    if (!(tol > 0.0)) throw InputError("fixed point tolerance must be positive");
    const Carrier grid = grid_n ? quad.carrier().with_grid(grid_n) : quad.carrier();
    const std::vector<double> xs = grid.points();
    const std::size_t n = xs.size();
    std::vector<double> r(n);
    parallel_for(n, jobs, [&](std::size_t i) { r[i] = residual(quad, xs[i]); });

    FixedPointSearch out;
    out.grid_n = n;
    out.min_residual = *std::min_element(r.begin(), r.end());

    if (std::all_of(r.begin(), r.end(), [&](double v) { return v < tol; })) {
        out.all_fixed = true;
        for (double x : xs) out.certificates.push_back(certify(quad, x));
        out.clusters.push_back({xs.front(), xs.back()});
        return out;
    }

    const double h = grid.spacing();
    std::size_t i = 0;
    while (i < n) {
        if (r[i] < tol) {
            // A run of grid points already below tol: keep its best point.
            std::size_t j = i, arg = i;
            while (j < n && r[j] < tol) {
                if (r[j] < r[arg]) arg = j;
                ++j;
            }
            FixedPointCertificate c = certify(quad, xs[arg]);
            if (c.max_residual() > 0.0) {
                const Probe p = golden(quad, xs[arg > 0 ? arg - 1 : 0], xs[std::min(arg + 1, n - 1)],
                                       kMaxRefineIterations, 0.0);
                if (p.r < c.max_residual()) c = certify(quad, p.x);
            }
            out.certificates.push_back(c);
            out.clusters.push_back({xs[i], xs[j - 1]});
            i = j;
            continue;
        }
        const bool left_ok = i == 0 || r[i] <= r[i - 1];
        const bool right_ok = i + 1 == n || r[i] <= r[i + 1];
        if (left_ok && right_ok) {
            const Probe p = golden(quad, xs[i > 0 ? i - 1 : 0], xs[std::min(i + 1, n - 1)],
                                   kMaxRefineIterations, tol);
            if (p.r < tol) {
                out.certificates.push_back(certify(quad, p.x));
                out.clusters.push_back({p.x, p.x});
            }
            out.min_residual = std::min(out.min_residual, p.r);
        }
        ++i;
    }
    merge_certificates(out, h);
    return out;
}

RefineOutcome refine_fixed_point(const MapQuadruple& quad, double x0, double tol) {
    if (!(tol > 0.0)) throw InputError("fixed point tolerance must be positive");
    const Carrier& X = quad.carrier();
    if (!std::isfinite(x0) || !X.contains(x0, 1e-12)) {
        std::ostringstream os;
        os << "starting point " << x0 << " is outside the carrier [" << X.lo() << ", " << X.hi() << "]";
        throw InputError(os.str());
    }
    x0 = X.clamp(x0);
    RefineOutcome out;
    out.best = certify(quad, x0);
    double r0 = residual(quad, x0);
    if (r0 < tol) {
        out.converged = true;
        return out;
    }

    // Walk downhill with doubling steps until r rises or the carrier ends.
    const double h = X.spacing();
    const double rl = residual(quad, X.clamp(x0 - h));
    const double rr = residual(quad, X.clamp(x0 + h));
    const double dir = rl < rr ? -1.0 : 1.0;
    double prev = X.clamp(x0 - dir * h), cur = x0, rcur = r0, step = h;
    while (out.iterations < kMaxRefineIterations) {
        ++out.iterations;
        const double next = X.clamp(cur + dir * step);
        const double rn = residual(quad, next);
        if (rn < rcur) {
            prev = cur;
            cur = next;
            rcur = rn;
            const bool edge = next == X.lo() || next == X.hi();
            if (rn < tol || !edge) {
                if (rn < tol) break;
                step *= 2.0;
                continue;
            }
        }
        const double a = std::min(prev, next), b = std::max(prev, next);
        if (rcur >= tol && out.iterations < kMaxRefineIterations) {
            const Probe p = golden(quad, a, b, kMaxRefineIterations - out.iterations, tol, &out.iterations);
            if (p.r < rcur) {
                cur = p.x;
                rcur = p.r;
            }
        }
        break;
    }
    out.best = certify(quad, cur);
    out.converged = out.best.max_residual() < tol;
    return out;
}

// ------------------------------------------------------------ pipeline

namespace {

constexpr std::array<std::pair<std::string_view, ContainmentDirection>, 4> kDirections{{
    {"B_in_F", ContainmentDirection::B_in_F},
    {"G_in_A", ContainmentDirection::G_in_A},
    {"F_in_B", ContainmentDirection::F_in_B},
    {"A_in_G", ContainmentDirection::A_in_G},
}};

template <class Fn>
auto stage_guard(std::string_view stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const InputError& e) {
        throw InputError("stage " + std::string(stage) + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError("stage " + std::string(stage) + ": " + e.what());
    }
}

}  // namespace

std::string_view to_string(EAPair p) { return p == EAPair::AF ? "AF" : "BG"; }

std::string_view to_string(ContainmentDirection d) {
    for (const auto& [name, v] : kDirections)
        if (v == d) return name;
    return "?";
}

std::string_view to_string(ClosedTarget c) { return c == ClosedTarget::A ? "A" : "B"; }

EAPair ea_pair_from_name(std::string_view name) {
    if (name == "AF") return EAPair::AF;
    if (name == "BG") return EAPair::BG;
    throw InputError("unknown pair '" + std::string(name) + "' (expected AF or BG)");
}

ContainmentDirection containment_from_name(std::string_view name) {
    for (const auto& [n, v] : kDirections)
        if (n == name) return v;
    throw InputError("unknown containment direction '" + std::string(name) +
                     "' (expected B_in_F, G_in_A, F_in_B or A_in_G)");
}

ClosedTarget closed_target_from_name(std::string_view name) {
    if (name == "A") return ClosedTarget::A;
    if (name == "B") return ClosedTarget::B;
    throw InputError("unknown closedness target '" + std::string(name) + "' (expected A or B)");
}

const StageVerdict& TheoremReport::stage(std::string_view name) const {
    for (const auto& s : stages)
        if (s.stage == name) return s;
    throw InputError("no stage named '" + std::string(name) + "'");
}

bool TheoremReport::hypotheses_passed() const {
    for (std::string_view s : {"ea", "containment", "closedness", "contraction"})
        if (!stage(s).passed) return false;
    return true;
}

bool TheoremReport::passed() const {
    return std::all_of(stages.begin(), stages.end(), [](const StageVerdict& s) { return s.passed; });
}

TheoremReport run_theorem_pipeline(const TheoremConfig& cfg) {
    const MapQuadruple& q = cfg.quad;
    const FuzzyMetric& fm = q.metric();
    TheoremReport rep;

    rep.ea = stage_guard("ea", [&] {
        const MapPair pair = cfg.ea_pair == EAPair::AF ? q.pair_AF() : q.pair_BG();
        return check_property_EA(pair, cfg.sequence, cfg.tol.tail);
    });
    rep.stages.push_back({"ea", rep.ea.passed,
                          "pair " + std::string(to_string(cfg.ea_pair)) +
                              (rep.ea.passed ? " shares limit " + fmt(rep.ea.limit) : ": " + rep.ea.diagnostics)});

    rep.containment = stage_guard("containment", [&] {
        switch (cfg.containment) {
            case ContainmentDirection::B_in_F:
                return check_range_containment(q.B(), q.F(), cfg.tol.containment, cfg.containment_closure);
            case ContainmentDirection::G_in_A:
                return check_range_containment(q.G(), q.A(), cfg.tol.containment, cfg.containment_closure);
            case ContainmentDirection::F_in_B:
                return check_range_containment(q.F(), q.B(), cfg.tol.containment, cfg.containment_closure);
            case ContainmentDirection::A_in_G:
                return check_range_containment(q.A(), q.G(), cfg.tol.containment, cfg.containment_closure);
        }
        throw InputError("unknown containment direction");
    });
    {
        std::ostringstream os;
        os << to_string(cfg.containment) << ": [" << rep.containment.inner.lo << ", " << rep.containment.inner.hi
           << "] in [" << rep.containment.outer.lo << ", " << rep.containment.outer.hi << "]";
        rep.stages.push_back({"containment", rep.containment.passed, os.str()});
    }

    rep.closed = stage_guard("closedness", [&] {
        return check_range_closed(cfg.closed == ClosedTarget::A ? q.A() : q.B(), cfg.tol.closed,
                                  cfg.closed_options);
    });
    rep.stages.push_back({"closedness", rep.closed.verdict == ClosedVerdict::closed,
                          std::string(to_string(cfg.closed)) + "(X) " + std::string(to_string(rep.closed.verdict))});

    rep.contraction = stage_guard("contraction", [&] { return verify_contraction(q, cfg.contraction, cfg.plan); });
    rep.stages.push_back({"contraction", rep.contraction.passed,
                          rep.contraction.form + " worst margin " + fmt(rep.contraction.worst_margin) + " over " +
                              std::to_string(rep.contraction.samples) + " samples"});

    stage_guard("coincidence", [&] {
        rep.coincidences_AF = find_coincidence_points(q.A(), q.F(), cfg.tol.coincidence, cfg.plan.jobs);
        rep.coincidences_BG = find_coincidence_points(q.B(), q.G(), cfg.tol.coincidence, cfg.plan.jobs);
    });
    rep.stages.push_back({"coincidence",
                          !rep.coincidences_AF.points.empty() && !rep.coincidences_BG.points.empty(),
                          std::to_string(rep.coincidences_AF.points.size()) + " for (A, F), " +
                              std::to_string(rep.coincidences_BG.points.size()) + " for (B, G)"});

    stage_guard("commutation", [&] {
        const bool at_coincidences = cfg.commutation == CommutationVariant::weakly_compatible;
        const std::vector<double> grid = q.carrier().points();
        auto run = [&](const MapPair& pair, const CoincidenceResult& pts) {
            const std::vector<double>& sample = at_coincidences ? pts.points : grid;
            if (sample.empty()) {
                PredicateReport none;
                none.check = std::string(to_string(cfg.commutation));
                none.passed = false;
                none.note = "no coincidence points to test";
                return none;
            }
            return check_commutation_variant(pair, fm, cfg.commutation, cfg.R, sample, cfg.plan.t_grid,
                                             cfg.plan.jobs);
        };
        rep.commutation_AF = run(q.pair_AF(), rep.coincidences_AF);
        rep.commutation_BG = run(q.pair_BG(), rep.coincidences_BG);
    });
    rep.stages.push_back({"commutation", rep.commutation_AF.passed && rep.commutation_BG.passed,
                          std::string(to_string(cfg.commutation)) + ": (A, F) " +
                              (rep.commutation_AF.passed ? "pass" : "fail") + ", (B, G) " +
                              (rep.commutation_BG.passed ? "pass" : "fail")});

    if (cfg.families) {
        rep.family_commuting = stage_guard("family_commuting", [&] {
            const FamilySet& f = *cfg.families;
            return check_family_commuting(f.A, f.B, f.F, f.G);
        });
        rep.stages.push_back({"family_commuting", rep.family_commuting->passed,
                              std::to_string(rep.family_commuting->pairs_checked) + " pairs checked" +
                                  (rep.family_commuting->passed ? "" : ", first failure " +
                                                                           rep.family_commuting->witness_pair)});
    }

    rep.fixed_points = stage_guard("fixed_point", [&] {
        return find_common_fixed_points(q, cfg.tol.fixed_point, cfg.plan.grid_n, cfg.plan.jobs);
    });
    {
        const auto& fp = rep.fixed_points;
        std::string s = fp.all_fixed ? "all points fixed"
                                     : std::to_string(fp.certificates.size()) + " certificate(s)";
        if (!fp.all_fixed && !fp.certificates.empty()) s += ", z = " + fmt(fp.certificates.front().z);
        rep.stages.push_back({"fixed_point", !fp.certificates.empty(), s});
    }

    if (cfg.families) {
        rep.family_fixed = stage_guard("family_fixed", [&] {
            PredicateReport pr;
            pr.check = "component maps fix z";
            const FamilySet& f = *cfg.families;
            for (const auto& c : rep.fixed_points.certificates) {
                for (const Family* fam : {&f.A, &f.B, &f.F, &f.G}) {
                    for (const SelfMap& m : *fam) {
                        const double margin = cfg.tol.fixed_point - std::abs(m(c.z) - c.z);
                        ++pr.samples;
                        if (pr.samples == 1 || margin < pr.worst_margin) pr.worst_margin = margin;
                        if (!(margin > 0.0) && !pr.witness) {
                            pr.passed = false;
                            pr.witness = Coordinates{{"z", c.z}, {m.label(), m(c.z)}};
                            pr.note = m.label() + " moves z";
                        }
                    }
                }
            }
            if (pr.samples == 0) {
                pr.passed = false;
                pr.note = "no fixed point to test";
            }
            return pr;
        });
        rep.stages.push_back({"family_fixed", rep.family_fixed->passed,
                              rep.family_fixed->passed ? "every component map fixes z" : rep.family_fixed->note});
    }

    rep.uniqueness = stage_guard("uniqueness", [&] {
        const std::size_t base = cfg.plan.grid_n ? cfg.plan.grid_n : q.carrier().grid_n();
        const FixedPointSearch fine = find_common_fixed_points(q, cfg.tol.fixed_point, 2 * base - 1, cfg.plan.jobs);
        UniquenessScan u;
        u.grid_n = fine.grid_n;
        u.certificates = fine.certificates.size();
        u.unique = !fine.all_fixed && fine.certificates.size() == 1;
        if (fine.all_fixed)
            u.note = "not unique: every scanned point is fixed";
        else if (fine.certificates.empty())
            u.note = "no common fixed point on scanned grid";
        else if (u.unique)
            u.note = "unique on scanned grid";
        else
            u.note = "not unique: " + std::to_string(u.certificates) + " fixed points on scanned grid";
        return u;
    });
    rep.stages.push_back({"uniqueness", rep.uniqueness.unique, rep.uniqueness.note});
    return rep;
}

}  // namespace fuzzyfp
