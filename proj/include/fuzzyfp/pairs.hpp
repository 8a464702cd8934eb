#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyfp/metric_core.hpp"
#include "fuzzyfp/scan.hpp"

namespace fuzzyfp {

/// A map of the carrier into itself; validated on the carrier grid with
/// tolerance 1e-9.
class SelfMap {
public:
    SelfMap(Carrier carrier, std::function<double(double)> fn, std::string label);

    static SelfMap identity(const Carrier& carrier);
    static SelfMap constant(const Carrier& carrier, double c);

    double operator()(double x) const { return fn_(x); }
    const Carrier& carrier() const { return carrier_; }
    const std::string& label() const { return label_; }
    const std::function<double(double)>& function() const { return fn_; }

private:
    Carrier carrier_;
    std::function<double(double)> fn_;
    std::string label_;
};

struct MapPair {
    SelfMap first;
    SelfMap second;
};

/// Four self maps sharing one carrier and fuzzy metric.
class MapQuadruple {
public:
    MapQuadruple(SelfMap A, SelfMap B, SelfMap F, SelfMap G, FuzzyMetric fm);

    const SelfMap& A() const { return maps_[0]; }
    const SelfMap& B() const { return maps_[1]; }
    const SelfMap& F() const { return maps_[2]; }
    const SelfMap& G() const { return maps_[3]; }
    const FuzzyMetric& metric() const { return fm_; }
    const Carrier& carrier() const { return fm_.carrier(); }

    MapPair pair_AF() const { return {A(), F()}; }
    MapPair pair_BG() const { return {B(), G()}; }

private:
    std::vector<SelfMap> maps_;
    FuzzyMetric fm_;
};

/// x_n = generator(n); limits are judged on the tail
/// n = tail_start, .., tail_start + tail_len - 1.
struct SequenceSpec {
    std::function<double(double)> generator;
    std::string description;
    std::size_t tail_start = 100000000;
    std::size_t tail_len = 10;
};

using Family = std::vector<SelfMap>;

/// Outcome of a pointwise predicate scan; margins >= -1e-9 pass.
struct PredicateReport {
    std::string check;
    bool passed = true;
    double worst_margin = 0.0;
    std::size_t samples = 0;
    std::optional<Coordinates> witness;
    std::string note;
};

// ------------------------------------------------------------ coincidences

struct CoincidenceResult {
    std::vector<double> points;
    /// Every grid point coincides; points then lists the whole grid.
    bool everywhere = false;
};

/// Grid points with |f - g| < tol plus bisection (60 steps) on sign
/// changes of f - g; candidates within one grid spacing are merged.
CoincidenceResult find_coincidence_points(const SelfMap& f, const SelfMap& g, double tol, int jobs = 1);

// ------------------------------------------------------------ commutation

enum class CommutationVariant {
    commuting,
    weakly_commuting,
    r_weak,
    r_weak_Ag,
    r_weak_Af,
    r_weak_P,
    weakly_compatible,
};

std::string_view to_string(CommutationVariant v);
CommutationVariant commutation_variant_from_name(std::string_view name);

/// Evaluates the variant's defining inequality for the pair (A, S) at
/// every (point, t):
///   commuting          M(ASx, SAx, t) = 1
///   weakly_commuting   M(ASx, SAx, t) >= M(Ax, Sx, t)
///   r_weak             M(ASx, SAx, t) >= M(Ax, Sx, t/R)
///   r_weak_Ag          M(SAx, AAx, t) >= M(Ax, Sx, t/R)
///   r_weak_Af          M(ASx, SSx, t) >= M(Ax, Sx, t/R)
///   r_weak_P           M(AAx, SSx, t) >= M(Ax, Sx, t/R)
///   weakly_compatible  M(ASu, SAu, t) = 1 at coincidence points u
/// weakly_compatible with no points is an InputError.
PredicateReport check_commutation_variant(const MapPair& pair, const FuzzyMetric& fm,
                                          CommutationVariant variant, double R,
                                          std::span<const double> points,
                                          std::span<const double> t_grid, int jobs = 1);

// ------------------------------------------------------------ sequences

enum class CompatVerdict { compatible, noncompatible, inconclusive };
std::string_view to_string(CompatVerdict v);

struct TailStats {
    double last = 0.0;
    double spread = 0.0;  // max - min over the tail
};

struct CompatibilityReport {
    CompatVerdict verdict = CompatVerdict::inconclusive;
    TailStats first_images;
    TailStats second_images;
    std::optional<double> witness_t;
    /// limit estimate of M(ASx_n, SAx_n, t) at the witness (or worst) t
    double membership_limit = 1.0;
    std::string diagnostics;
};

CompatibilityReport check_compatibility_on_sequence(const MapPair& pair, const FuzzyMetric& fm,
                                                    const SequenceSpec& seq,
                                                    std::span<const double> t_grid, double tol);

struct EAReport {
    bool passed = false;
    double limit = 0.0;
    std::vector<TailStats> tails;
    std::string diagnostics;
};

/// Both image tails are Cauchy within tol and agree with each other.
EAReport check_property_EA(const MapPair& pair, const SequenceSpec& seq, double tol);

/// Common property: A x_n, S x_n, B y_n, T y_n share one limit.
EAReport check_common_property_EA(const MapPair& first, const SequenceSpec& xs, const MapPair& second,
                                  const SequenceSpec& ys, double tol);

// ------------------------------------------------------------ ranges

struct Hull {
    double lo = 0.0;
    double hi = 0.0;
};

/// Interval hull of the grid images.
Hull range_hull(const SelfMap& f);

struct ContainmentReport {
    bool passed = true;
    bool closure = false;
    Hull inner;
    Hull outer;
    std::optional<Coordinates> witness;
};

ContainmentReport check_range_containment(const SelfMap& inner, const SelfMap& outer, double tol,
                                          bool closure = false);

enum class ClosedVerdict { closed, not_closed, not_verifiable };
std::string_view to_string(ClosedVerdict v);

struct ClosedOptions {
    /// Treat the carrier end as excluded (open-interval approximation).
    bool open_lo = false;
    bool open_hi = false;
    std::size_t max_monotone_pieces = 16;
};

struct ClosedReport {
    ClosedVerdict verdict = ClosedVerdict::closed;
    Hull hull;
    std::size_t monotone_pieces = 1;
    std::string note;
};

ClosedReport check_range_closed(const SelfMap& f, double tol, const ClosedOptions& opts = {});

// ------------------------------------------------------------ families

/// f1 o f2 o ... o fl, i.e. x -> f1(f2(...fl(x))).
SelfMap compose_family(const Family& family);

struct FamilyCommutingReport {
    bool passed = true;
    std::size_t pairs_checked = 0;
    std::size_t samples = 0;
    std::optional<Coordinates> witness;
    std::string witness_pair;
};

/// Pairwise commutation within each family and across (A, F), (B, G),
/// pointwise on the grid within tol.
FamilyCommutingReport check_family_commuting(const Family& A, const Family& B, const Family& F,
                                             const Family& G, double tol = 1e-9);

}  // namespace fuzzyfp
