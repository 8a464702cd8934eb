#include "fuzzyfp/metric_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fuzzyfp/errors.hpp"
#include "fuzzyfp/parallel.hpp"

namespace fuzzyfp {

TNorm TNorm::minimum() {
    return TNorm(TNormKind::minimum, [](double a, double b) { return std::min(a, b); }, "minimum");
}

TNorm TNorm::product() {
    return TNorm(TNormKind::product, [](double a, double b) { return a * b; }, "product");
}

TNorm TNorm::lukasiewicz() {
    return TNorm(TNormKind::lukasiewicz,
                 [](double a, double b) { return std::max(a + b - 1.0, 0.0); }, "lukasiewicz");
}

TNorm TNorm::custom(Fn fn, std::string name) {
    if (!fn) throw InputError("custom t-norm requires an evaluator");
    return TNorm(TNormKind::custom, std::move(fn), std::move(name));
}

TNorm TNorm::from_name(std::string_view name) {
    if (name == "minimum" || name == "min") return minimum();
    if (name == "product" || name == "prod") return product();
    if (name == "lukasiewicz") return lukasiewicz();
    throw InputError("unknown t-norm '" + std::string(name) +
                     "' (expected minimum, product or lukasiewicz)");
}

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

double tnorm_eval(const TNorm& tnorm, double a, double b) {
    if (!in_unit(a) || !in_unit(b)) {
        std::ostringstream os;
        os << "t-norm arguments must lie in [0,1], got (" << a << ", " << b << ")";
        throw InputError(os.str());
    }
    const double v = tnorm(a, b);
    if (!in_unit(v)) {
        std::ostringstream os;
        os << "t-norm '" << tnorm.name() << "' left [0,1] at (" << a << ", " << b << "): " << v;
        throw NumericalError(os.str());
    }
    return v;
}

Carrier::Carrier(double lo, double hi, std::size_t grid_n) : lo_(lo), hi_(hi), grid_n_(grid_n) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw InputError("carrier requires finite lo < hi");
    if (grid_n < 2) throw InputError("carrier grid needs at least 2 points");
}

double Carrier::point(std::size_t i) const {
    if (i + 1 >= grid_n_) return hi_;
    return lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(grid_n_ - 1);
}

std::vector<double> Carrier::points() const {
    std::vector<double> out(grid_n_);
    for (std::size_t i = 0; i < grid_n_; ++i) out[i] = point(i);
    return out;
}

double Carrier::clamp(double x) const { return std::clamp(x, lo_, hi_); }

FuzzyMetric::FuzzyMetric(Carrier carrier, Membership membership, TNorm tnorm, std::string label)
    : carrier_(std::move(carrier)),
      membership_(std::move(membership)),
      tnorm_(std::move(tnorm)),
      label_(std::move(label)) {
    if (!membership_) throw InputError("fuzzy metric requires a membership function");
    const auto pts = carrier_.points();
    for (double t : {0.0, 0.1, 1.0, 10.0}) {
        for (double x : pts) {
            for (double y : pts) {
                const double m = membership_(x, y, t);
                if (!in_unit(m)) {
                    std::ostringstream os;
                    os << "membership M(" << x << ", " << y << ", " << t << ") = " << m
                       << " is outside [0,1]";
                    throw InputError(os.str());
                }
            }
        }
    }
}

FuzzyMetric standard_fuzzy_metric(const Carrier& carrier, CrispMetric d, TNorm tnorm) {
    if (!d) throw InputError("standard fuzzy metric requires a crisp metric");
    const auto pts = carrier.points();
    for (double x : pts) {
        if (d(x, x) != 0.0) {
            std::ostringstream os;
            os << "crisp metric: d(" << x << ", " << x << ") = " << d(x, x) << " is not 0";
            throw InputError(os.str());
        }
        for (double y : pts) {
            const double dxy = d(x, y);
            if (!(dxy >= 0.0) || !std::isfinite(dxy)) {
                std::ostringstream os;
                os << "crisp metric: d(" << x << ", " << y << ") = " << dxy << " is negative";
                throw InputError(os.str());
            }
            if (dxy != d(y, x)) {
                std::ostringstream os;
                os << "crisp metric is not symmetric at (" << x << ", " << y << ")";
                throw InputError(os.str());
            }
        }
    }
    Membership m = [d = std::move(d)](double x, double y, double t) {
        if (t <= 0.0) return 0.0;
        return t / (t + d(x, y));
    };
    return FuzzyMetric(carrier, std::move(m), std::move(tnorm), "standard");
}

bool AxiomReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck& AxiomReport::at(std::string_view axiom) const {
    for (const auto& c : checks)
        if (c.axiom == axiom) return c;
    throw std::out_of_range("no axiom check named " + std::string(axiom));
}

namespace {

constexpr double kAxiomTol = 1e-12;
constexpr double kContinuityBound = 1e-3;
constexpr double kContinuityStep = 1e-6;

struct Samples {
    std::vector<std::pair<double, double>> pairs;
    std::vector<std::pair<double, double>> grid_offdiag;
    std::vector<double> singles;
    std::vector<std::array<double, 3>> triples;
};

Samples build_samples(const Carrier& carrier, const SamplingPlan& plan) {
    Samples s;
    const auto pts = carrier.points();
    for (double x : pts) {
        s.singles.push_back(x);
        for (double y : pts) {
            s.pairs.emplace_back(x, y);
            if (x != y) s.grid_offdiag.emplace_back(x, y);
        }
    }
    std::mt19937_64 rng(plan.seed);
    auto draw = [&] { return carrier.lo() + (carrier.hi() - carrier.lo()) * unit_from_bits(rng()); };
    for (std::size_t i = 0; i < plan.random_triples; ++i) {
        const double x = draw();
        const double y = draw();
        const double z = draw();
        s.triples.push_back({x, y, z});
        s.pairs.emplace_back(x, y);
        s.pairs.emplace_back(y, z);
        s.pairs.emplace_back(x, z);
        s.singles.push_back(x);
        s.singles.push_back(y);
        s.singles.push_back(z);
    }
    if (pts.size() <= 30) {
        for (double x : pts)
            for (double y : pts)
                for (double z : pts) s.triples.push_back({x, y, z});
    }
    return s;
}

// Fills margins[i] = margin(i) in parallel, then reduces sequentially.
template <class MarginFn, class PointFn>
AxiomCheck run_check(std::string name, std::size_t n, double threshold, int jobs,
                     MarginFn&& margin, PointFn&& point) {
    std::vector<double> margins(n);
    parallel_for(n, jobs, [&](std::size_t i) { margins[i] = margin(i); });
    const ScanSummary sum = summarize_margins(margins, threshold);
    AxiomCheck c;
    c.axiom = std::move(name);
    c.threshold = threshold;
    c.samples = n;
    c.violations = sum.violations;
    c.passed = sum.passed();
    c.worst_margin = sum.worst_margin;
    if (n > 0) c.worst_point = point(sum.worst_index);
    if (sum.first_violation) c.witness = point(*sum.first_violation);
    return c;
}

}  // namespace

AxiomReport verify_fm_axioms(const FuzzyMetric& fm, const SamplingPlan& plan) {
    if (plan.t_grid.empty()) throw InputError("axiom sampling plan has an empty t-grid");
    for (double t : plan.t_grid)
        if (!(t > 0.0) || !std::isfinite(t)) throw InputError("t-grid values must be positive");

    std::vector<double> ts = plan.t_grid;
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    const std::size_t nt = ts.size();
    const Samples s = build_samples(fm.carrier(), plan);
    const TNorm& T = fm.tnorm();

    AxiomReport report;

    report.checks.push_back(run_check(
        "FM-1", s.pairs.size(), 0.0, plan.jobs,
        [&](std::size_t i) { return -std::abs(fm(s.pairs[i].first, s.pairs[i].second, 0.0)); },
        [&](std::size_t i) {
            return Coordinates{{"x", s.pairs[i].first}, {"y", s.pairs[i].second}, {"t", 0.0}};
        }));

    report.checks.push_back(run_check(
        "FM-2", s.singles.size() * nt, -kAxiomTol, plan.jobs,
        [&](std::size_t i) {
            const double x = s.singles[i / nt];
            return -std::abs(fm(x, x, ts[i % nt]) - 1.0);
        },
        [&](std::size_t i) {
            const double x = s.singles[i / nt];
            return Coordinates{{"x", x}, {"y", x}, {"t", ts[i % nt]}};
        }));

    {
        AxiomCheck c = run_check(
            "FM-2-converse", s.grid_offdiag.size(), kAxiomTol, plan.jobs,
            [&](std::size_t i) {
                const auto [x, y] = s.grid_offdiag[i];
                double sep = 0.0;
                for (double t : ts) sep = std::max(sep, std::abs(1.0 - fm(x, y, t)));
                return sep;
            },
            [&](std::size_t i) {
                return Coordinates{{"x", s.grid_offdiag[i].first}, {"y", s.grid_offdiag[i].second}};
            });
        c.note = "M = 1 at every sampled t only for x = y; grid points only";
        report.checks.push_back(std::move(c));
    }

    report.checks.push_back(run_check(
        "FM-3", s.pairs.size() * nt, 0.0, plan.jobs,
        [&](std::size_t i) {
            const auto [x, y] = s.pairs[i / nt];
            const double t = ts[i % nt];
            return -std::abs(fm(x, y, t) - fm(y, x, t));
        },
        [&](std::size_t i) {
            const auto [x, y] = s.pairs[i / nt];
            return Coordinates{{"x", x}, {"y", y}, {"t", ts[i % nt]}};
        }));

    const std::size_t nts = nt * nt;
    report.checks.push_back(run_check(
        "FM-4", s.triples.size() * nts, -kAxiomTol, plan.jobs,
        [&](std::size_t i) {
            const auto& tr = s.triples[i / nts];
            const double t = ts[(i % nts) / nt];
            const double u = ts[i % nt];
            return fm(tr[0], tr[2], t + u) - T(fm(tr[0], tr[1], t), fm(tr[1], tr[2], u));
        },
        [&](std::size_t i) {
            const auto& tr = s.triples[i / nts];
            return Coordinates{{"x", tr[0]}, {"y", tr[1]}, {"z", tr[2]},
                               {"t", ts[(i % nts) / nt]}, {"s", ts[i % nt]}};
        }));

    auto pair_t_point = [&](std::size_t i) {
        const auto [x, y] = s.pairs[i / nt];
        return Coordinates{{"x", x}, {"y", y}, {"t", ts[i % nt]}};
    };

    {
        AxiomCheck c = run_check(
            "FM-5", s.pairs.size() * nt, 0.0, plan.jobs,
            [&](std::size_t i) {
                const auto [x, y] = s.pairs[i / nt];
                const double t = ts[i % nt];
                const double h = kContinuityStep * t;
                return kContinuityBound - std::abs(fm(x, y, t + h) - fm(x, y, t));
            },
            pair_t_point);
        c.note = "sampled modulus of continuity: |M(t+h)-M(t)| <= 1e-3 for h = 1e-6 t";
        report.checks.push_back(std::move(c));
    }

    report.checks.push_back(run_check(
        "Remark-1", s.pairs.size() * nt, -kAxiomTol, plan.jobs,
        [&](std::size_t i) {
            const auto [x, y] = s.pairs[i / nt];
            const std::size_t k = i % nt;
            const double t = ts[k];
            const double here = fm(x, y, t);
            double m = fm(x, y, t + kContinuityStep * t) - here;
            if (k + 1 < nt) m = std::min(m, fm(x, y, ts[k + 1]) - here);
            return m;
        },
        pair_t_point));

    return report;
}

Remark3Result remark3_search(const FuzzyMetric& fm, double r, const SamplingPlan& plan) {
    if (!(r > 0.0 && r < 1.0)) throw InputError("remark-3 ratio r must lie in (0,1)");
    if (plan.t_grid.empty()) throw InputError("remark-3 sampling plan has an empty t-grid");
    const auto pts = fm.carrier().points();
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) pairs.emplace_back(pts[i], pts[j]);

    std::vector<char> hit(pairs.size(), 0);
    parallel_for(pairs.size(), plan.jobs, [&](std::size_t i) {
        const auto [x, y] = pairs[i];
        bool all = true;
        for (double t : plan.t_grid) {
            if (!(fm(x, y, r * t) >= fm(x, y, t))) {
                all = false;
                break;
            }
        }
        hit[i] = all ? 1 : 0;
    });

    Remark3Result out;
    out.pairs_scanned = pairs.size();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!hit[i]) continue;
        ++out.witness_count;
        if (!out.witness) out.witness = pairs[i];
    }
    return out;
}

}  // namespace fuzzyfp
