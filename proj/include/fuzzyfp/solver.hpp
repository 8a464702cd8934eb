#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyfp/pairs.hpp"
#include "fuzzyfp/verifier.hpp"

namespace fuzzyfp {

struct FixedPointCertificate {
    double z = 0.0;
    /// |Az - z|, |Bz - z|, |Fz - z|, |Gz - z|
    std::array<double, 4> residuals{};

    double max_residual() const;
};

FixedPointCertificate certify(const MapQuadruple& quad, double z);

struct FixedPointSearch {
    std::vector<FixedPointCertificate> certificates;
    /// Every grid point is a common fixed point.
    bool all_fixed = false;
    /// Extent of each run of consecutive grid points below tol, parallel to
    /// certificates unless all_fixed.
    std::vector<Hull> clusters;
    std::size_t grid_n = 0;
    double min_residual = 0.0;
};

/// Scans r(x) = max residual on the grid (grid_n = 0: carrier grid),
/// refines each local minimum by golden-section search on its two
/// neighbouring cells and keeps minima with r < tol.
FixedPointSearch find_common_fixed_points(const MapQuadruple& quad, double tol, std::size_t grid_n = 0,
                                          int jobs = 1);

struct RefineOutcome {
    bool converged = false;
    std::size_t iterations = 0;
    FixedPointCertificate best;
};

inline constexpr std::size_t kMaxRefineIterations = 200;

/// Downhill bracketing from x0 followed by golden-section search on r.
/// InputError when x0 is outside the carrier, NumericalError when a map
/// value is not finite.
RefineOutcome refine_fixed_point(const MapQuadruple& quad, double x0, double tol);

// ------------------------------------------------------------ pipeline

enum class EAPair { AF, BG };
enum class ContainmentDirection { B_in_F, G_in_A, F_in_B, A_in_G };
enum class ClosedTarget { A, B };

std::string_view to_string(EAPair p);
std::string_view to_string(ContainmentDirection d);
std::string_view to_string(ClosedTarget c);
EAPair ea_pair_from_name(std::string_view name);
ContainmentDirection containment_from_name(std::string_view name);
ClosedTarget closed_target_from_name(std::string_view name);

struct TheoremTolerances {
    double coincidence = 1e-9;
    double fixed_point = 1e-9;
    double tail = 1e-6;
    double containment = 1e-9;
    double closed = 1e-9;
};

struct FamilySet {
    Family A, B, F, G;
};

struct TheoremConfig {
    MapQuadruple quad;
    ContractionSpec contraction;
    ContractionPlan plan;
    EAPair ea_pair = EAPair::AF;
    SequenceSpec sequence;
    ContainmentDirection containment = ContainmentDirection::G_in_A;
    /// Compare against the closure of the inner range.
    bool containment_closure = false;
    ClosedTarget closed = ClosedTarget::A;
    ClosedOptions closed_options;
    CommutationVariant commutation = CommutationVariant::weakly_compatible;
    double R = 1.0;
    TheoremTolerances tol;
    /// When set, quad was composed from these and component maps are
    /// checked for commuting and for sharing the fixed point.
    std::optional<FamilySet> families;
};

struct StageVerdict {
    std::string stage;
    bool passed = false;
    std::string summary;
};

struct UniquenessScan {
    bool unique = false;
    std::size_t grid_n = 0;
    std::size_t certificates = 0;
    /// "unique on scanned grid", "no common fixed point on scanned grid", ...
    std::string note;
};

struct TheoremReport {
    std::vector<StageVerdict> stages;
    EAReport ea;
    ContainmentReport containment;
    ClosedReport closed;
    VerificationReport contraction;
    CoincidenceResult coincidences_AF;
    CoincidenceResult coincidences_BG;
    PredicateReport commutation_AF;
    PredicateReport commutation_BG;
    std::optional<FamilyCommutingReport> family_commuting;
    /// Component maps evaluated at each certificate, when families are set.
    std::optional<PredicateReport> family_fixed;
    FixedPointSearch fixed_points;
    UniquenessScan uniqueness;

    const StageVerdict& stage(std::string_view name) const;
    /// Stages a-d: E.A., containment, closedness, contraction.
    bool hypotheses_passed() const;
    bool passed() const;
};

/// Runs the stages in order. An InputError or NumericalError raised
/// inside a stage is rethrown with the stage name prefixed.
TheoremReport run_theorem_pipeline(const TheoremConfig& cfg);

}  // namespace fuzzyfp
