#include "fuzzyfp/pairs.hpp"

#include <algorithm>
#include <memory>
#include <array>
#include <cmath>
#include <sstream>

#include "fuzzyfp/errors.hpp"
#include "fuzzyfp/parallel.hpp"

namespace fuzzyfp {

namespace {

constexpr double kMapTol = 1e-9;
constexpr double kPredicateTol = 1e-9;
constexpr int kBisectionSteps = 60;

void require_same_carrier(const Carrier& a, const Carrier& b, std::string_view what) {
    if (!(a == b)) throw InputError(std::string(what) + ": maps live on different carriers");
}

}  // namespace

SelfMap::SelfMap(Carrier carrier, std::function<double(double)> fn, std::string label)
    : carrier_(std::move(carrier)), fn_(std::move(fn)), label_(std::move(label)) {
    if (!fn_) throw InputError("self map '" + label_ + "' has no rule");
    for (double x : carrier_.points()) {
        const double y = fn_(x);
        if (!std::isfinite(y) || !carrier_.contains(y, kMapTol)) {
            std::ostringstream os;
            os << "map " << label_ << " sends " << x << " to " << y << ", outside [" << carrier_.lo()
               << ", " << carrier_.hi() << "]";
            throw InputError(os.str());
        }
    }
}

SelfMap SelfMap::identity(const Carrier& carrier) {
    return SelfMap(carrier, [](double x) { return x; }, "x");
}

SelfMap SelfMap::constant(const Carrier& carrier, double c) {
    std::ostringstream os;
    os << c;
    return SelfMap(carrier, [c](double) { return c; }, os.str());
}

MapQuadruple::MapQuadruple(SelfMap A, SelfMap B, SelfMap F, SelfMap G, FuzzyMetric fm)
    : maps_{std::move(A), std::move(B), std::move(F), std::move(G)}, fm_(std::move(fm)) {
    for (const auto& m : maps_) require_same_carrier(m.carrier(), fm_.carrier(), "quadruple");
}

// ------------------------------------------------------------ coincidences

CoincidenceResult find_coincidence_points(const SelfMap& f, const SelfMap& g, double tol, int jobs) {
    require_same_carrier(f.carrier(), g.carrier(), "coincidence search");
    if (!(tol > 0.0)) throw InputError("coincidence tolerance must be positive");
    const Carrier& c = f.carrier();
    const auto xs = c.points();
    const std::size_t n = xs.size();
    std::vector<double> h(n);
    parallel_for(n, jobs, [&](std::size_t i) { h[i] = f(xs[i]) - g(xs[i]); });

    CoincidenceResult out;
    const bool all = std::all_of(h.begin(), h.end(), [&](double v) { return std::abs(v) < tol; });
    if (all) {
        out.everywhere = true;
        out.points = xs;
        return out;
    }

    struct Candidate {
        double x;
        double residual;
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(h[i]) < tol) cands.push_back({xs[i], std::abs(h[i])});
        if (i + 1 < n && std::abs(h[i]) >= tol && std::abs(h[i + 1]) >= tol &&
            std::signbit(h[i]) != std::signbit(h[i + 1])) {
            double a = xs[i], b = xs[i + 1];
            double ha = h[i];
            for (int k = 0; k < kBisectionSteps; ++k) {
                const double m = 0.5 * (a + b);
                const double hm = f(m) - g(m);
                if (hm == 0.0) {
                    a = b = m;
                    break;
                }
                if (std::signbit(hm) == std::signbit(ha)) {
                    a = m;
                    ha = hm;
                } else {
                    b = m;
                }
            }
            const double r = 0.5 * (a + b);
            const double hr = std::abs(f(r) - g(r));
            if (hr < tol) cands.push_back({r, hr});  // jumps leave hr large
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& p, const Candidate& q) { return p.x < q.x; });

    const double radius = c.spacing() * (1.0 + 1e-9);
    for (std::size_t i = 0; i < cands.size();) {
        std::size_t j = i;
        Candidate best = cands[i];
        while (j + 1 < cands.size() && cands[j + 1].x - cands[j].x <= radius) {
            ++j;
            if (cands[j].residual < best.residual) best = cands[j];
        }
        out.points.push_back(best.x);
        i = j + 1;
    }
    return out;
}

// ------------------------------------------------------------ commutation

namespace {

constexpr std::array<std::pair<std::string_view, CommutationVariant>, 7> kVariantNames{{
    {"commuting", CommutationVariant::commuting},
    {"weakly_commuting", CommutationVariant::weakly_commuting},
    {"r_weak", CommutationVariant::r_weak},
    {"r_weak_Ag", CommutationVariant::r_weak_Ag},
    {"r_weak_Af", CommutationVariant::r_weak_Af},
    {"r_weak_P", CommutationVariant::r_weak_P},
    {"weakly_compatible", CommutationVariant::weakly_compatible},
}};

}  // namespace

std::string_view to_string(CommutationVariant v) {
    for (const auto& [name, var] : kVariantNames)
        if (var == v) return name;
    return "?";
}

CommutationVariant commutation_variant_from_name(std::string_view name) {
    for (const auto& [n, var] : kVariantNames)
        if (n == name) return var;
    throw InputError("unknown commutation variant '" + std::string(name) + "'");
}

PredicateReport check_commutation_variant(const MapPair& pair, const FuzzyMetric& fm,
                                          CommutationVariant variant, double R,
                                          std::span<const double> points,
                                          std::span<const double> t_grid, int jobs) {
    require_same_carrier(pair.first.carrier(), pair.second.carrier(), "commutation check");
    if (t_grid.empty()) throw InputError("commutation check needs a t-grid");
    for (double t : t_grid)
        if (!(t > 0.0)) throw InputError("t-grid values must be positive");
    if (points.empty()) {
        if (variant == CommutationVariant::weakly_compatible)
            throw InputError("weak compatibility needs at least one coincidence point");
        throw InputError("commutation check needs sample points");
    }
    const bool scaled = variant == CommutationVariant::r_weak || variant == CommutationVariant::r_weak_Ag ||
                        variant == CommutationVariant::r_weak_Af || variant == CommutationVariant::r_weak_P;
    if (scaled && !(R > 0.0)) throw InputError("R-weak commutativity needs R > 0");

    const SelfMap& A = pair.first;
    const SelfMap& S = pair.second;
    const std::size_t nt = t_grid.size();
    std::vector<double> margins(points.size() * nt);
    parallel_for(margins.size(), jobs, [&](std::size_t i) {
        const double x = points[i / nt];
        const double t = t_grid[i % nt];
        const double ax = A(x), sx = S(x);
        switch (variant) {
            case CommutationVariant::commuting:
            case CommutationVariant::weakly_compatible:
                margins[i] = fm(A(sx), S(ax), t) - 1.0;
                break;
            case CommutationVariant::weakly_commuting:
                margins[i] = fm(A(sx), S(ax), t) - fm(ax, sx, t);
                break;
            case CommutationVariant::r_weak:
                margins[i] = fm(A(sx), S(ax), t) - fm(ax, sx, t / R);
                break;
            case CommutationVariant::r_weak_Ag:
                margins[i] = fm(S(ax), A(ax), t) - fm(ax, sx, t / R);
                break;
            case CommutationVariant::r_weak_Af:
                margins[i] = fm(A(sx), S(sx), t) - fm(ax, sx, t / R);
                break;
            case CommutationVariant::r_weak_P:
                margins[i] = fm(A(ax), S(sx), t) - fm(ax, sx, t / R);
                break;
        }
    });
    const ScanSummary sum = summarize_margins(margins, -kPredicateTol);

    PredicateReport r;
    r.check = std::string(to_string(variant));
    r.passed = sum.passed();
    r.worst_margin = sum.worst_margin;
    r.samples = margins.size();
    if (sum.first_violation) {
        const std::size_t i = *sum.first_violation;
        r.witness = Coordinates{{"x", points[i / nt]}, {"t", t_grid[i % nt]}, {"margin", margins[i]}};
    }
    if (variant == CommutationVariant::weakly_compatible) r.note = "checked at coincidence points only";
    return r;
}

// ------------------------------------------------------------ sequences

std::string_view to_string(CompatVerdict v) {
    switch (v) {
        case CompatVerdict::compatible: return "compatible";
        case CompatVerdict::noncompatible: return "noncompatible";
        case CompatVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

std::vector<double> tail_points(const SequenceSpec& seq, const Carrier& carrier) {
    if (!seq.generator) throw InputError("sequence '" + seq.description + "' has no generator");
    if (seq.tail_len < 10) throw InputError("sequence tail length must be at least 10");
    std::vector<double> xs(seq.tail_len);
    for (std::size_t k = 0; k < seq.tail_len; ++k) {
        const double n = static_cast<double>(seq.tail_start + k);
        const double x = seq.generator(n);
        if (!std::isfinite(x) || !carrier.contains(x, kMapTol)) {
            std::ostringstream os;
            os << "sequence '" << seq.description << "' leaves the carrier at n = " << n << " (" << x << ")";
            throw InputError(os.str());
        }
        xs[k] = carrier.clamp(x);
    }
    return xs;
}

TailStats stats(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return {v.back(), *hi - *lo};
}

std::vector<double> image(const SelfMap& f, const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(), [&](double x) { return f(x); });
    return out;
}

}  // namespace

CompatibilityReport check_compatibility_on_sequence(const MapPair& pair, const FuzzyMetric& fm,
                                                    const SequenceSpec& seq,
                                                    std::span<const double> t_grid, double tol) {
    require_same_carrier(pair.first.carrier(), pair.second.carrier(), "compatibility check");
    if (t_grid.empty()) throw InputError("compatibility check needs a t-grid");
    const auto xs = tail_points(seq, pair.first.carrier());
    const auto ax = image(pair.first, xs);
    const auto sx = image(pair.second, xs);

    CompatibilityReport r;
    r.first_images = stats(ax);
    r.second_images = stats(sx);
    std::ostringstream diag;
    if (r.first_images.spread >= tol || r.second_images.spread >= tol) {
        diag << "image tails are not Cauchy within " << tol << " (spreads " << r.first_images.spread
             << ", " << r.second_images.spread << ")";
        r.diagnostics = diag.str();
        return r;
    }
    if (std::abs(r.first_images.last - r.second_images.last) >= tol) {
        diag << "image tails converge to different limits (" << r.first_images.last << " vs "
             << r.second_images.last << "); the sequence does not test compatibility";
        r.diagnostics = diag.str();
        return r;
    }

    r.verdict = CompatVerdict::compatible;
    r.membership_limit = 1.0;
    for (double t : t_grid) {
        std::vector<double> m(xs.size());
        for (std::size_t k = 0; k < xs.size(); ++k) m[k] = fm(pair.first(sx[k]), pair.second(ax[k]), t);
        const TailStats ms = stats(m);
        if (ms.spread >= tol) {
            if (r.verdict == CompatVerdict::compatible) {
                r.verdict = CompatVerdict::inconclusive;
                r.witness_t = t;
                r.membership_limit = ms.last;
                diag << "M(ASx_n, SAx_n, " << t << ") has not settled (spread " << ms.spread << ")";
            }
            continue;
        }
        if (1.0 - ms.last >= tol) {
            r.verdict = CompatVerdict::noncompatible;
            r.witness_t = t;
            r.membership_limit = ms.last;
            diag.str("");
            diag << "M(ASx_n, SAx_n, " << t << ") tends to " << ms.last << ", not 1";
            break;
        }
    }
    r.diagnostics = diag.str();
    return r;
}

EAReport check_property_EA(const MapPair& pair, const SequenceSpec& seq, double tol) {
    require_same_carrier(pair.first.carrier(), pair.second.carrier(), "property (E.A.)");
    const auto xs = tail_points(seq, pair.first.carrier());
    EAReport r;
    r.tails = {stats(image(pair.first, xs)), stats(image(pair.second, xs))};
    const double a = r.tails[0].last, b = r.tails[1].last;
    r.limit = 0.5 * (a + b);
    std::ostringstream diag;
    if (r.tails[0].spread >= tol || r.tails[1].spread >= tol) {
        diag << "image tails are not Cauchy within " << tol << " (spreads " << r.tails[0].spread << ", "
             << r.tails[1].spread << ")";
    } else if (std::abs(a - b) >= tol) {
        diag << "limits differ: " << a << " vs " << b;
    } else {
        r.passed = true;
        diag << "common limit " << r.limit << " (finite-tail estimate)";
    }
    r.diagnostics = diag.str();
    return r;
}

EAReport check_common_property_EA(const MapPair& first, const SequenceSpec& xs, const MapPair& second,
                                  const SequenceSpec& ys, double tol) {
    require_same_carrier(first.first.carrier(), second.first.carrier(), "common property (E.A.)");
    const auto px = tail_points(xs, first.first.carrier());
    const auto py = tail_points(ys, second.first.carrier());
    EAReport r;
    r.tails = {stats(image(first.first, px)), stats(image(first.second, px)),
               stats(image(second.first, py)), stats(image(second.second, py))};
    double lo = r.tails[0].last, hi = lo, spread = 0.0;
    for (const auto& t : r.tails) {
        lo = std::min(lo, t.last);
        hi = std::max(hi, t.last);
        spread = std::max(spread, t.spread);
    }
    r.limit = 0.5 * (lo + hi);
    std::ostringstream diag;
    if (spread >= tol) {
        diag << "an image tail is not Cauchy within " << tol << " (max spread " << spread << ")";
    } else if (hi - lo >= tol) {
        diag << "the four limits disagree: range [" << lo << ", " << hi << "]";
    } else {
        r.passed = true;
        diag << "common limit " << r.limit << " (finite-tail estimate)";
    }
    r.diagnostics = diag.str();
    return r;
}

// ------------------------------------------------------------ ranges

Hull range_hull(const SelfMap& f) {
    Hull h{f(f.carrier().lo()), f(f.carrier().lo())};
    for (double x : f.carrier().points()) {
        const double y = f(x);
        h.lo = std::min(h.lo, y);
        h.hi = std::max(h.hi, y);
    }
    return h;
}

ContainmentReport check_range_containment(const SelfMap& inner, const SelfMap& outer, double tol,
                                          bool closure) {
    require_same_carrier(inner.carrier(), outer.carrier(), "range containment");
    ContainmentReport r;
    r.closure = closure;
    r.inner = range_hull(inner);
    r.outer = range_hull(outer);
    for (double x : inner.carrier().points()) {
        const double y = inner(x);
        if (y < r.outer.lo - tol || y > r.outer.hi + tol) {
            r.passed = false;
            r.witness = Coordinates{{"x", x}, {"image", y}};
            break;
        }
    }
    return r;
}

std::string_view to_string(ClosedVerdict v) {
    switch (v) {
        case ClosedVerdict::closed: return "closed";
        case ClosedVerdict::not_closed: return "not-closed";
        case ClosedVerdict::not_verifiable: return "not-verifiable";
    }
    return "not-verifiable";
}

ClosedReport check_range_closed(const SelfMap& f, double tol, const ClosedOptions& opts) {
    const Carrier& c = f.carrier();
    std::vector<double> xs = c.points();
    if (opts.open_lo) xs.erase(xs.begin());
    if (opts.open_hi) xs.pop_back();
    if (xs.size() < 2) throw InputError("range closedness needs at least two sample points");

    std::vector<double> ys(xs.size());
    std::transform(xs.begin(), xs.end(), ys.begin(), [&](double x) { return f(x); });

    ClosedReport r;
    int last_sign = 0;
    std::size_t changes = 0;
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
        const double d = ys[i + 1] - ys[i];
        const int s = std::abs(d) <= tol ? 0 : (d > 0 ? 1 : -1);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) ++changes;
        last_sign = s;
    }
    r.monotone_pieces = changes + 1;
    const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
    r.hull = {*lo, *hi};
    if (r.monotone_pieces > opts.max_monotone_pieces) {
        r.verdict = ClosedVerdict::not_verifiable;
        r.note = "map oscillates too much on the grid for a hull-based verdict";
        return r;
    }

    // Excluded carrier ends: the continuous extension's value there is a
    // limit of the range. If it lies outside the sampled hull, the range
    // approaches it without attaining it.
    std::ostringstream note;
    r.verdict = ClosedVerdict::closed;
    for (const auto& [open, end] : {std::pair{opts.open_lo, c.lo()}, std::pair{opts.open_hi, c.hi()}}) {
        if (!open) continue;
        const double limit = f(end);
        if (limit < r.hull.lo - tol || limit > r.hull.hi + tol) {
            r.verdict = ClosedVerdict::not_closed;
            note << "range approaches " << limit << " at the excluded end " << end
                 << " without attaining it; ";
        }
    }
    if (r.verdict == ClosedVerdict::closed) note << "hull endpoints are attained by grid images";
    r.note = note.str();
    return r;
}

// ------------------------------------------------------------ families

SelfMap compose_family(const Family& family) {
    if (family.empty()) throw InputError("cannot compose an empty family");
    const Carrier& c = family.front().carrier();
    std::string label;
    for (const auto& m : family) {
        require_same_carrier(c, m.carrier(), "family composition");
        label += (label.empty() ? "" : " o ") + m.label();
    }
    if (family.size() == 1) return family.front();
    auto fns = std::make_shared<std::vector<std::function<double(double)>>>();
    for (const auto& m : family) fns->push_back(m.function());
    return SelfMap(c,
                   [fns](double x) {
                       for (auto it = fns->rbegin(); it != fns->rend(); ++it) x = (*it)(x);
                       return x;
                   },
                   label);
}

FamilyCommutingReport check_family_commuting(const Family& A, const Family& B, const Family& F,
                                             const Family& G, double tol) {
    std::vector<std::pair<const SelfMap*, const SelfMap*>> pairs;
    for (const Family* fam : {&A, &B, &F, &G})
        for (std::size_t j = 0; j < fam->size(); ++j)
            for (std::size_t k = j + 1; k < fam->size(); ++k) pairs.emplace_back(&(*fam)[j], &(*fam)[k]);
    for (const auto& a : A)
        for (const auto& f : F) pairs.emplace_back(&a, &f);
    for (const auto& b : B)
        for (const auto& g : G) pairs.emplace_back(&b, &g);

    FamilyCommutingReport r;
    r.pairs_checked = pairs.size();
    for (const auto& [p, q] : pairs) {
        require_same_carrier(p->carrier(), q->carrier(), "family commuting check");
        for (double x : p->carrier().points()) {
            ++r.samples;
            const double pq = (*p)((*q)(x));
            const double qp = (*q)((*p)(x));
            if (std::abs(pq - qp) > tol && r.passed) {
                r.passed = false;
                r.witness = Coordinates{{"x", x}, {"pq", pq}, {"qp", qp}};
                r.witness_pair = p->label() + " , " + q->label();
            }
        }
    }
    return r;
}

}  // namespace fuzzyfp
