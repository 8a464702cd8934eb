#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fuzzyfp {

/// Named coordinates of a sample point, in a fixed order, e.g. {x, y, t}.
using Coordinates = std::vector<std::pair<std::string, double>>;

/// Sequential reduction over per-sample margins.
///
/// A sample violates when !(margin >= threshold). The worst sample is the
/// minimum margin with ties broken by the lowest index; the witness is the
/// first violating sample in index order. Both are independent of how the
/// margins were produced.
struct ScanSummary {
    std::size_t count = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0;
    std::size_t worst_index = 0;
    double best_margin = 0.0;
    double mean_margin = 0.0;
    std::optional<std::size_t> first_violation;

    bool passed() const { return violations == 0; }
};

ScanSummary summarize_margins(std::span<const double> margins, double threshold);

/// Uniform double in [0, 1) from a 64-bit draw; bit-identical on every
/// platform, unlike std::uniform_real_distribution.
inline double unit_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace fuzzyfp
