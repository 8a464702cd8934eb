#include "fuzzyfp/scan.hpp"

#include <limits>

namespace fuzzyfp {

ScanSummary summarize_margins(std::span<const double> margins, double threshold) {
    ScanSummary s;
    s.count = margins.size();
    if (margins.empty()) return s;
    s.worst_margin = std::numeric_limits<double>::infinity();
    s.best_margin = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
        const double m = margins[i];
        if (!(m >= threshold)) {
            ++s.violations;
            if (!s.first_violation) s.first_violation = i;
        }
        if (m < s.worst_margin) {
            s.worst_margin = m;
            s.worst_index = i;
        }
        if (m > s.best_margin) s.best_margin = m;
        sum += m;
    }
    s.mean_margin = sum / static_cast<double>(margins.size());
    return s;
}

}  // namespace fuzzyfp
