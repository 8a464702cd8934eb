#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyfp/metric_core.hpp"
#include "fuzzyfp/scan.hpp"

namespace fuzzyfp {

enum class BellmanOp { U1, U2, V1, V2 };
inline constexpr std::array<BellmanOp, 4> kBellmanOps{BellmanOp::U1, BellmanOp::U2, BellmanOp::V1, BellmanOp::V2};

std::string_view to_string(BellmanOp op);

using Payoff2 = std::function<double(double x, double y)>;
using Payoff3 = std::function<double(double x, double y, double z)>;

/// Discretised system: states on the W grid, decisions from the finite
/// set D. U_i uses L_i, V_i uses N_i.
struct DPProblem {
    Carrier W{0.0, 1.0, 201};
    std::vector<double> D;
    Payoff2 q;
    Payoff3 L1, L2, N1, N2;
    Payoff2 tau;
    double Lambda = 1.0;
    double beta = 0.5;
    /// Expression text of each component, for reports.
    std::array<std::string, 6> sources;  // q, L1, L2, N1, N2, tau

    const Payoff3& payoff(BellmanOp op) const;
};

/// Compiles the expressions (q, tau in x, y; payoffs in x, y, z) and
/// validates the result.
DPProblem make_dp_problem(Carrier W, std::vector<double> D, std::string_view q, std::string_view L1,
                          std::string_view L2, std::string_view N1, std::string_view N2, std::string_view tau,
                          double Lambda, double beta, std::uint64_t seed = 0);

/// beta in [0,1), Lambda > 0, tau into W within 1e-9, |L_i|, |N_i| <= Lambda
/// for z in [-Lambda/(1-beta), Lambda/(1-beta)], and a seeded spot check of
/// the z-Lipschitz constant beta. Throws InputError.
void validate(const DPProblem& prob, std::uint64_t seed = 0);

/// Values on the W grid, linear interpolation in between.
class ValueFunction {
public:
    ValueFunction(Carrier W, std::vector<double> values);

    static ValueFunction constant(const Carrier& W, double c);
    static ValueFunction from(const Carrier& W, const std::function<double(double)>& f);

    const Carrier& grid() const { return W_; }
    const std::vector<double>& values() const { return values_; }
    double at(double x) const;

private:
    Carrier W_;
    std::vector<double> values_;
};

/// Maximum absolute difference over grid points; InputError on a grid mismatch.
double sup_metric(const ValueFunction& r, const ValueFunction& p);

/// out(x) = max over y in D of q(x,y) + P(x, y, v(tau(x,y))), P = L_i or N_i.
ValueFunction apply_bellman_operator(const DPProblem& prob, BellmanOp op, const ValueFunction& v, int jobs = 1);

struct IterationResult {
    ValueFunction solution;
    std::size_t iterations = 0;
    double final_residual = 0.0;
    /// trace[k] = d(v_{k+1}, v_k)
    std::vector<double> trace;
    /// max over k of trace[k] - beta^k trace[0]; <= 1e-9 when the envelope holds.
    double envelope_excess = 0.0;
    bool envelope_ok = true;
};

inline constexpr double kEnvelopeTol = 1e-9;

/// Iterates until d(v_{k+1}, v_k) < tol; NumericalError with the residual
/// trace when max_iter is exhausted.
IterationResult value_iterate(const DPProblem& prob, BellmanOp op, const ValueFunction& init, double tol,
                              std::size_t max_iter, int jobs = 1);

struct SystemReport {
    std::vector<IterationResult> runs;  // in kBellmanOps order
    /// cross[i][j] = d(op_j P_i, P_i)
    std::array<std::array<double, 4>, 4> cross{};
    /// max over i, j of d(P_i, P_j)
    double agreement = 0.0;
    double tol = 0.0;
    /// agreement and every cross residual within 2 tol.
    bool common_solution = false;
};

SystemReport solve_system(const DPProblem& prob, double tol, std::size_t max_iter = 1000, int jobs = 1);

// ------------------------------------------------------------ existence conditions

/// r_n(x) = generator(x, n); the tail n = tail_start .. tail_start + tail_len - 1
/// stands in for the limit.
struct ValueSequence {
    std::function<double(double x, double n)> generator;
    std::string description;
    std::size_t tail_start = 1000;
    std::size_t tail_len = 5;
};

struct TailCondition {
    std::string condition;  // "i" or "ii"
    bool passed = false;
    /// max over the tail of d(op1 r_n, op2 r_n)
    double limit_gap = 0.0;
    /// d(op1 r_first, op1 r_last), likewise for op2
    double cauchy_spread = 0.0;
    /// d(op1 op2 r_n, op2 op1 r_n) at the last tail index
    double commutator = 0.0;
    std::string note;
};

struct ThetaCondition {
    bool passed = true;
    std::size_t pairs = 0;
    double worst_margin = 0.0;
    /// lambda(u) >= u and lambda(u) > u on every probed u.
    bool lambda_ge = true;
    bool lambda_gt = true;
    std::optional<Coordinates> witness;
    std::string note;
};

struct Theorem53Report {
    TailCondition cond_i;
    TailCondition cond_ii;
    ThetaCondition cond_iii;
};

/// The gauge in condition (iii), applied to sup-metric distances.
inline double phi_dp(double t) { return t - 1.0; }

/// Condition (iii) is sampled over the tail pairs (r_n, p_n) and
/// `random_pairs` seeded random value functions bounded by
/// (sup|q| + Lambda)/(1 - beta). InputError when lambda(u) >= u fails on the
/// probe grid.
Theorem53Report check_theorem53(const DPProblem& prob, const ValueSequence& rs, const ValueSequence& ps,
                                const std::function<double(double)>& lambda, double tol,
                                std::size_t random_pairs = 20, std::uint64_t seed = 0, int jobs = 1);

}  // namespace fuzzyfp
