#pragma once

#include <cmath>

#include "fuzzyfp/metric_core.hpp"
#include "fuzzyfp/pairs.hpp"

namespace fixtures {

inline fuzzyfp::Carrier unit(std::size_t n = 101) { return fuzzyfp::Carrier(0.0, 1.0, n); }

inline fuzzyfp::FuzzyMetric standard(std::size_t n = 101, fuzzyfp::TNorm tn = fuzzyfp::TNorm::product()) {
    return fuzzyfp::standard_fuzzy_metric(unit(n), [](double x, double y) { return std::abs(x - y); }, tn);
}

// Independent oracle for t / (t + |x - y|).
inline double membership(double x, double y, double t) { return t <= 0.0 ? 0.0 : t / (t + std::abs(x - y)); }

// A = x/2, B = x/4, F = x, G = 0 on [0,1].
inline fuzzyfp::MapQuadruple worked_example(std::size_t n = 101) {
    const auto X = unit(n);
    return fuzzyfp::MapQuadruple(fuzzyfp::SelfMap(X, [](double x) { return x / 2; }, "x/2"),
                                 fuzzyfp::SelfMap(X, [](double x) { return x / 4; }, "x/4"),
                                 fuzzyfp::SelfMap::identity(X), fuzzyfp::SelfMap::constant(X, 0.0), standard(n));
}

inline fuzzyfp::MapQuadruple all_identity(std::size_t n = 101) {
    const auto X = unit(n);
    const auto id = fuzzyfp::SelfMap::identity(X);
    return fuzzyfp::MapQuadruple(id, id, id, id, standard(n));
}

}  // namespace fixtures
