#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyfp/scan.hpp"

namespace fuzzyfp {

enum class TNormKind { minimum, product, lukasiewicz, custom };

/// A t-norm on [0,1]. Builtin kinds are exact; custom kinds wrap any
/// binary function and are only as lawful as the function supplied.
class TNorm {
public:
    using Fn = std::function<double(double, double)>;

    static TNorm minimum();
    static TNorm product();
    static TNorm lukasiewicz();
    static TNorm custom(Fn fn, std::string name = "custom");
    /// "minimum" | "product" | "lukasiewicz"
    static TNorm from_name(std::string_view name);

    TNormKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

    // Unchecked evaluation.
    double operator()(double a, double b) const { return fn_(a, b); }

private:
    TNorm(TNormKind kind, Fn fn, std::string name)
        : kind_(kind), fn_(std::move(fn)), name_(std::move(name)) {}

    TNormKind kind_;
    Fn fn_;
    std::string name_;
};

/// Checked evaluation: throws InputError unless a, b lie in [0,1].
double tnorm_eval(const TNorm& tnorm, double a, double b);

/// Compact interval [lo, hi] sampled on a uniform grid of grid_n points.
class Carrier {
public:
    Carrier(double lo, double hi, std::size_t grid_n);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t grid_n() const { return grid_n_; }
    double spacing() const { return (hi_ - lo_) / static_cast<double>(grid_n_ - 1); }

    /// i-th grid point; the last one is exactly hi.
    double point(std::size_t i) const;
    std::vector<double> points() const;

    bool contains(double x, double tol = 0.0) const { return x >= lo_ - tol && x <= hi_ + tol; }
    double clamp(double x) const;

    /// Same interval, grid with 2n-1 points (every old point is kept).
    Carrier refined() const { return Carrier(lo_, hi_, 2 * grid_n_ - 1); }
    Carrier with_grid(std::size_t n) const { return Carrier(lo_, hi_, n); }

    friend bool operator==(const Carrier&, const Carrier&) = default;

private:
    double lo_;
    double hi_;
    std::size_t grid_n_;
};

using Membership = std::function<double(double x, double y, double t)>;
using CrispMetric = std::function<double(double x, double y)>;

/// Membership function M(x, y, t) over a carrier, paired with a t-norm.
/// Defined for t >= 0; the range [0,1] is validated on the carrier grid.
class FuzzyMetric {
public:
    FuzzyMetric(Carrier carrier, Membership membership, TNorm tnorm,
                std::string label = "custom");

    double operator()(double x, double y, double t) const { return membership_(x, y, t); }

    const Carrier& carrier() const { return carrier_; }
    const TNorm& tnorm() const { return tnorm_; }
    const std::string& label() const { return label_; }

private:
    Carrier carrier_;
    Membership membership_;
    TNorm tnorm_;
    std::string label_;
};

/// M(x,y,t) = t / (t + d(x,y)) for t > 0 and 0 at t = 0.
/// d is checked for symmetry, nonnegativity and d(x,x) = 0 on grid pairs.
FuzzyMetric standard_fuzzy_metric(const Carrier& carrier, CrispMetric d, TNorm tnorm);

struct SamplingPlan {
    std::vector<double> t_grid{0.1, 0.5, 1.0, 2.0, 10.0};
    std::size_t random_triples = 1000;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct AxiomCheck {
    std::string axiom;
    bool passed = true;
    /// pass iff every margin >= threshold
    double threshold = 0.0;
    double worst_margin = 0.0;
    std::size_t samples = 0;
    std::size_t violations = 0;
    std::optional<Coordinates> witness;
    Coordinates worst_point;
    std::string note;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;

    bool all_passed() const;
    /// Throws std::out_of_range for an unknown axiom name.
    const AxiomCheck& at(std::string_view axiom) const;
};

/// Sampled verification of FM-1 .. FM-5 and nondecreasing t-sections.
/// Checks reported: FM-1, FM-2, FM-2-converse, FM-3, FM-4, FM-5, Remark-1.
AxiomReport verify_fm_axioms(const FuzzyMetric& fm, const SamplingPlan& plan);

struct Remark3Result {
    std::optional<std::pair<double, double>> witness;
    std::size_t witness_count = 0;
    std::size_t pairs_scanned = 0;
};

/// Searches off-diagonal grid pairs x < y with M(x,y,rt) >= M(x,y,t) for
/// every t of the plan. Such a pair would contradict the rule that this
/// forces x = y.
Remark3Result remark3_search(const FuzzyMetric& fm, double r, const SamplingPlan& plan);

}  // namespace fuzzyfp
