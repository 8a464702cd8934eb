#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyfp/distances.hpp"
#include "fuzzyfp/scan.hpp"

namespace fuzzyfp {

enum class PsiExample { ex2_1, ex2_2, ex2_3, ex2_4, ex2_5, ex2_6, custom };

std::string_view to_string(PsiExample e);
PsiExample psi_example_from_name(std::string_view name);

using Gauge1 = std::function<double(double)>;
using Gauge3 = std::function<double(double, double, double)>;
using Psi4 = std::function<double(double, double, double, double)>;

/// Parameters for the implicit-relation constructions. Which fields are
/// required depends on the example:
///   ex2_1  delta            u1 - delta(max{u2,u3,u4})
///   ex2_2  k                u1 - k min{u2,u3,u4}
///   ex2_3  delta3           u1 - delta3(u2,u3,u4)
///   ex2_4  k                u1 - k u2 - min{u3,u4}
///   ex2_5  a, density       I(u1) - a max{I(u2),I(u3),I(u4)}
///   ex2_6  delta, density   I(u1) - delta(max{I(u2),I(u3),I(u4)})
/// with I(u) the integral of the density over [0, 1-u].
struct PsiParams {
    std::optional<double> k;
    std::optional<double> a;
    Gauge1 delta;
    Gauge3 delta3;
    std::optional<Density> density;
    double quad_tol = kDefaultQuadTol;
    Psi4 custom;
    std::string description;
};

class PsiFunction {
public:
    /// Unchecked evaluation.
    double operator()(double u1, double u2, double u3, double u4) const {
        return fn_(u1, u2, u3, u4);
    }

    PsiExample example() const { return example_; }
    const PsiParams& params() const { return params_; }

    /// Integral examples are outer(I(u1), .., I(u4)); these expose outer
    /// and I so the relation can be inspected in gauge coordinates.
    bool integral_backed() const { return static_cast<bool>(outer_); }
    const Psi4& outer() const { return outer_; }
    const Gauge1& gauge() const { return gauge_; }

private:
    friend PsiFunction make_psi(PsiExample, PsiParams);

    PsiExample example_ = PsiExample::custom;
    PsiParams params_;
    Psi4 fn_;
    Psi4 outer_;
    Gauge1 gauge_;
};

/// Throws InputError when the parameters do not fit the example
/// (0 < k < 1, 0 <= a < 1, delta(u) < u on a grid, density in class Phi).
PsiFunction make_psi(PsiExample example, PsiParams params);

/// Checked evaluation: every argument must lie in [0,1].
double psi_eval(const PsiFunction& psi, double u1, double u2, double u3, double u4);

/// as_printed: psi(pattern(u)) >= 0 implies u >= 0.
/// strict:     psi(pattern(u)) >= 0 implies u <= 0, i.e. u = 0.
enum class ConditionVariant { as_printed, strict };
enum class ConditionStatus { holds, holds_vacuously, fails };

std::string_view to_string(ConditionVariant v);
ConditionVariant condition_variant_from_name(std::string_view name);
std::string_view to_string(ConditionStatus s);

struct ConditionResult {
    std::string condition;  // psi1 .. psi4, psi1_gauge
    ConditionStatus status = ConditionStatus::holds;
    std::optional<Coordinates> witness;
    std::size_t samples = 0;
    std::string note;
};

struct PsiReport {
    PsiExample example = PsiExample::custom;
    ConditionVariant variant = ConditionVariant::as_printed;
    std::vector<ConditionResult> conditions;

    const ConditionResult& at(std::string_view condition) const;
    bool all_hold() const;
};

/// psi1 by monotone sweeps in u1 over a grid of (u2,u3,u4); psi2..psi4 by
/// scanning u over the grid on the patterns (u,0,u,0), (u,0,0,u),
/// (u,u,0,0). Integral examples also get psi1_gauge: monotonicity of the
/// outer relation in its first gauge coordinate.
PsiReport verify_psi(const PsiFunction& psi, ConditionVariant variant, std::size_t grid_n,
                     int jobs = 1);

}  // namespace fuzzyfp
