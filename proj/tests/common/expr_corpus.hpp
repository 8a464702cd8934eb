#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string_view>
#include <vector>

namespace corpus {

// Each entry is evaluated at x = 0.3, y = 2 and compared with plain C++.
struct Case {
    std::string_view text;
    std::function<double(double, double)> oracle;
};

inline std::vector<Case> expressions() {
    using std::abs, std::exp, std::sqrt, std::pow;
    return {
        {"0", [](double, double) { return 0.0; }},
        {"42", [](double, double) { return 42.0; }},
        {"3.25", [](double, double) { return 3.25; }},
        {"1e-3", [](double, double) { return 1e-3; }},
        {"2.5E2", [](double, double) { return 250.0; }},
        {"x", [](double x, double) { return x; }},
        {"x/2", [](double x, double) { return x / 2; }},
        {"x/4", [](double x, double) { return x / 4; }},
        {"1 - x", [](double x, double) { return 1 - x; }},
        {"x - x", [](double, double) { return 0.0; }},
        {"x + y * 3", [](double x, double y) { return x + y * 3; }},
        {"(x + y) * 3", [](double x, double y) { return (x + y) * 3; }},
        {"x - y - 1", [](double x, double y) { return (x - y) - 1; }},
        {"x / y / 4", [](double x, double y) { return (x / y) / 4; }},
        {"8 / 4 * 2", [](double, double) { return 4.0; }},
        {"x^2", [](double x, double) { return x * x; }},
        {"y^3", [](double, double y) { return y * y * y; }},
        {"2^3^2", [](double, double) { return 512.0; }},
        {"-y^2", [](double, double y) { return -(y * y); }},
        {"(-y)^2", [](double, double y) { return y * y; }},
        {"y^-1", [](double, double y) { return 1 / y; }},
        {"--x", [](double x, double) { return x; }},
        {"-x + y", [](double x, double y) { return -x + y; }},
        {"x * -y", [](double x, double y) { return x * -y; }},
        {"abs(-2) + 1", [](double, double) { return 3.0; }},
        {"abs(x - y)", [](double x, double y) { return abs(x - y); }},
        {"sqrt(y)", [](double, double y) { return sqrt(y); }},
        {"sqrt(x*x + y*y)", [](double x, double y) { return sqrt(x * x + y * y); }},
        {"exp(x)", [](double x, double) { return exp(x); }},
        {"exp(-y) * x", [](double x, double y) { return exp(-y) * x; }},
        {"min(x, 1 - x)", [](double x, double) { return std::min(x, 1 - x); }},
        {"max(x, y)", [](double x, double y) { return std::max(x, y); }},
        {"min(x)", [](double x, double) { return x; }},
        {"max(1, x, y, 0.5)", [](double x, double y) { return std::max({1.0, x, y, 0.5}); }},
        {"min(max(x, 0.2), 0.25)", [](double x, double) { return std::min(std::max(x, 0.2), 0.25); }},
        {"x * y / (1 + x)", [](double x, double y) { return x * y / (1 + x); }},
        {"1 / (1 + x^2)", [](double x, double) { return 1 / (1 + x * x); }},
        {"x^0.5", [](double x, double) { return pow(x, 0.5); }},
        {"2 * x * (1 - x)", [](double x, double) { return 2 * x * (1 - x); }},
        {"y / 2 + x / 4", [](double x, double y) { return y / 2 + x / 4; }},
        {"((((x))))", [](double x, double) { return x; }},
        {"  x\t+\n1 ", [](double x, double) { return x + 1; }},
        {"x*y - y*x", [](double, double) { return 0.0; }},
        {"exp(0)", [](double, double) { return 1.0; }},
        {"sqrt(abs(x - y)) + min(x, y)^2", [](double x, double y) { return sqrt(abs(x - y)) + pow(std::min(x, y), 2); }},
        {"1 - x / 2 - x / 4", [](double x, double) { return 1 - x / 2 - x / 4; }},
        {"(1 - x) * (1 - x)", [](double x, double) { return (1 - x) * (1 - x); }},
        {"3 * x^2 - 2 * x^3", [](double x, double) { return 3 * x * x - 2 * x * x * x; }},
        {"max(0, 1 - abs(x - 0.5) * 2)", [](double x, double) { return std::max(0.0, 1 - abs(x - 0.5) * 2); }},
        {"y - 2^-1 * y", [](double, double y) { return y - 0.5 * y; }},
    };
}

// Malformed inputs and the byte offset each error must point at.
struct Malformed {
    std::string_view text;
    std::size_t offset;
};

inline std::vector<Malformed> malformed() {
    return {{"x +", 3}, {"2 * (x - 1", 10}, {"min(x,, 1)", 6}};
}

}  // namespace corpus
