#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyfp/distances.hpp"
#include "fuzzyfp/implicit.hpp"
#include "fuzzyfp/pairs.hpp"

namespace fuzzyfp {

enum class ContractionForm {
    main_411,      // psi(phi(M(Fx,Gy,t)), phi(M(Ax,By,t)), phi(M(Ax,Fx,t)), phi(M(By,Gy,t))) >= 0
    cor43_A,       // phi(M1) >= delta(max{phi(M2), phi(M3), phi(M4)})
    cor43_B,       // phi(M1) >= k min{phi(M2), phi(M3), phi(M4)}
    cor43_C,       // phi(M1) >= delta3(phi(M2), phi(M3), phi(M4))
    cor43_D,       // phi(M1) >= k phi(M2) - min{phi(M3), phi(M4)}
    integral_511,  // psi(I(M1), I(M2), I(M3), I(M4)) >= 0
    cor51_A,       // I(M1) >= a max{I(M2), I(M3), I(M4)}
    cor51_B,       // I(M1) >= delta(max{I(M2), I(M3), I(M4)})
};

std::string_view to_string(ContractionForm f);
ContractionForm contraction_form_from_name(std::string_view name);

struct ContractionSpec {
    ContractionForm form = ContractionForm::main_411;
    std::optional<PsiFunction> psi;
    std::optional<AlteringDistance> phi;
    std::optional<Density> density;
    std::optional<double> k;
    std::optional<double> a;
    Gauge1 delta;
    Gauge3 delta3;
    double quad_tol = kDefaultQuadTol;
};

/// Throws InputError naming the first missing or out-of-range component.
void validate(const ContractionSpec& spec);

struct ContractionPlan {
    std::size_t grid_n = 0;  // 0 = carrier grid
    std::vector<double> t_grid{0.1, 0.5, 1.0, 2.0, 10.0};
    /// Re-check pass verdicts at 2n-1 points per axis.
    bool refine = true;
    int jobs = 1;
};

struct VerificationReport {
    std::string form;
    bool passed = true;
    double worst_margin = 0.0;
    double best_margin = 0.0;
    double mean_margin = 0.0;
    std::size_t violations = 0;
    std::size_t samples = 0;
    std::vector<std::size_t> resolutions;
    std::optional<Coordinates> witness;
    Coordinates worst_point;
    /// Base-resolution margins, index ((ix * n) + iy) * nt + it.
    std::vector<double> margins;
};

inline constexpr double kMarginTol = 1e-9;

VerificationReport verify_main_contraction(const MapQuadruple& quad, const PsiFunction& psi,
                                           const AlteringDistance& phi, const ContractionPlan& plan);

/// which is cor43_A .. cor43_D; the inequality is evaluated directly.
VerificationReport verify_corollary_condition(const MapQuadruple& quad, const ContractionSpec& spec,
                                              const ContractionPlan& plan);

/// which is integral_511, cor51_A or cor51_B. The four integrals are
/// computed by quadrature; densities with mass above 1 are rescaled to
/// unit mass so the gauge values stay in [0,1].
VerificationReport verify_integral_contraction(const MapQuadruple& quad, const ContractionSpec& spec,
                                               const ContractionPlan& plan);

/// Dispatches on spec.form after validate(spec).
VerificationReport verify_contraction(const MapQuadruple& quad, const ContractionSpec& spec,
                                      const ContractionPlan& plan);

/// Margin of spec's inequality at one point.
double contraction_margin(const MapQuadruple& quad, const ContractionSpec& spec, double x, double y,
                          double t);

}  // namespace fuzzyfp
