#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzyfp {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr int kMaxQuadDepth = 40;

/// Nonnegative integrand on [0,1].
struct Density {
    std::function<double(double)> fn;
    std::string description;

    static Density constant(double c);
};

/// Adaptive Simpson estimate of the integral of `density` over [a, b],
/// 0 <= a <= b <= 1. Throws InputError on a bad interval or a negative
/// density sample, NumericalError when depth 40 is reached unconverged.
double integrate_density(const Density& density, double a, double b, double tol = kDefaultQuadTol);

struct PhiClassReport {
    bool passed = true;
    /// (epsilon, integral over [0, epsilon]) for each probe.
    std::vector<std::pair<double, double>> probes;
    std::optional<double> failing_epsilon;
};

/// Positive mass near zero: the integral over [0, eps] exceeds 1e-14 for
/// eps in {1e-3, 1e-2, 1e-1, 1}.
PhiClassReport check_phi_class(const Density& density, double tol = kDefaultQuadTol);

enum class AlteringKind { builtin_linear, builtin_quadratic, integral, custom };

struct AlteringProvenance {
    AlteringKind kind = AlteringKind::custom;
    std::string description;
    /// Integral kind only: the density is rescaled by `scale` when its
    /// total mass exceeds 1, so the gauge stays inside [0,1].
    double scale = 1.0;
    double raw_mass = 0.0;
};

/// Gauge phi: [0,1] -> [0,1], strictly decreasing with phi(1) = 0.
class AlteringDistance {
public:
    AlteringDistance(std::function<double(double)> fn, AlteringProvenance provenance);

    double operator()(double lambda) const { return fn_(lambda); }
    const std::function<double(double)>& function() const { return fn_; }
    const AlteringProvenance& provenance() const { return provenance_; }

private:
    std::function<double(double)> fn_;
    AlteringProvenance provenance_;
};

/// phi(s) = scale * integral of density over [0, 1 - s].
AlteringDistance make_integral_altering(const Density& density, double tol = kDefaultQuadTol);

/// "linear": 1 - lambda; "quadratic": (1 - lambda)^2.
AlteringDistance builtin_altering(std::string_view kind);

struct AlteringCheck {
    std::string condition;  // "range", "ad1", "ad2"
    bool passed = true;
    std::optional<double> witness;
    std::string detail;
};

struct AlteringReport {
    bool passed = true;
    std::vector<AlteringCheck> checks;

    const AlteringCheck& at(std::string_view condition) const;
};

/// Range [0,1], strict decrease on consecutive grid points (ad1), and
/// phi(1) = 0 within 1e-12 with phi > 0 below 1 (ad2). grid_n >= 3.
AlteringReport verify_altering(const std::function<double(double)>& candidate, std::size_t grid_n);

}  // namespace fuzzyfp
