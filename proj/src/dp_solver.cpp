#include "fuzzyfp/dp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fuzzyfp/errors.hpp"
#include "fuzzyfp/expr.hpp"
#include "fuzzyfp/parallel.hpp"

namespace fuzzyfp {

namespace {

constexpr double kTauTol = 1e-9;
constexpr std::size_t kBoundSamples = 21;
constexpr std::size_t kLipschitzSamples = 400;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

const char* payoff_name(std::size_t i) {
    static const char* names[] = {"L1", "L2", "N1", "N2"};
    return names[i];
}

double tau_checked(const DPProblem& prob, double x, double y) {
    const double s = prob.tau(x, y);
    if (!std::isfinite(s) || !prob.W.contains(s, kTauTol)) {
        throw InputError("tau(" + fmt(x) + ", " + fmt(y) + ") = " + fmt(s) + " lies outside W = [" +
                         fmt(prob.W.lo()) + ", " + fmt(prob.W.hi()) + "]");
    }
    return prob.W.clamp(s);
}

void require_same_grid(const ValueFunction& r, const ValueFunction& p) {
    if (!(r.grid() == p.grid())) throw InputError("value functions live on different grids");
}

}  // namespace

std::string_view to_string(BellmanOp op) {
    switch (op) {
        case BellmanOp::U1: return "U1";
        case BellmanOp::U2: return "U2";
        case BellmanOp::V1: return "V1";
        case BellmanOp::V2: return "V2";
    }
    return "?";
}

const Payoff3& DPProblem::payoff(BellmanOp op) const {
    switch (op) {
        case BellmanOp::U1: return L1;
        case BellmanOp::U2: return L2;
        case BellmanOp::V1: return N1;
        case BellmanOp::V2: return N2;
    }
    return L1;
}

DPProblem make_dp_problem(Carrier W, std::vector<double> D, std::string_view q, std::string_view L1,
                          std::string_view L2, std::string_view N1, std::string_view N2, std::string_view tau,
                          double Lambda, double beta, std::uint64_t seed) {
    auto two = [](std::string_view text) -> Payoff2 {
        const expr::Compiled c(expr::Expr::parse(text), {"x", "y"});
        return [c](double x, double y) { return c({x, y}); };
    };
    auto three = [](std::string_view text) -> Payoff3 {
        const expr::Compiled c(expr::Expr::parse(text), {"x", "y", "z"});
        return [c](double x, double y, double z) { return c({x, y, z}); };
    };
    DPProblem p{std::move(W), std::move(D), two(q), three(L1), three(L2), three(N1), three(N2), two(tau),
                Lambda, beta,
                {std::string(q), std::string(L1), std::string(L2), std::string(N1), std::string(N2),
                 std::string(tau)}};
    validate(p, seed);
    return p;
}

void validate(const DPProblem& prob, std::uint64_t seed) {
    if (!(prob.beta >= 0.0 && prob.beta < 1.0))
        throw InputError("beta = " + fmt(prob.beta) + " must satisfy 0 <= beta < 1");
    if (!(prob.Lambda > 0.0) || !std::isfinite(prob.Lambda))
        throw InputError("Lambda = " + fmt(prob.Lambda) + " must be positive");
    if (prob.D.empty()) throw InputError("decision grid D is empty");
    for (double y : prob.D)
        if (!std::isfinite(y)) throw InputError("decision grid D has a non-finite entry");
    if (!prob.q || !prob.tau || !prob.L1 || !prob.L2 || !prob.N1 || !prob.N2)
        throw InputError("dp problem is missing a component");

    const std::vector<double> xs = prob.W.points();
    for (double x : xs)
        for (double y : prob.D) {
            tau_checked(prob, x, y);
            if (!std::isfinite(prob.q(x, y)))
                throw InputError("q(" + fmt(x) + ", " + fmt(y) + ") is not finite");
        }

    const double zmax = prob.Lambda / (1.0 - prob.beta);
    const std::array<const Payoff3*, 4> fs{&prob.L1, &prob.L2, &prob.N1, &prob.N2};
    for (std::size_t ix = 0; ix < kBoundSamples; ++ix) {
        const double x = prob.W.point(ix * (prob.W.grid_n() - 1) / (kBoundSamples - 1));
        for (double y : prob.D)
            for (std::size_t iz = 0; iz < kBoundSamples; ++iz) {
                const double z = -zmax + 2.0 * zmax * static_cast<double>(iz) / (kBoundSamples - 1);
                for (std::size_t f = 0; f < fs.size(); ++f) {
                    const double v = (*fs[f])(x, y, z);
                    if (!(std::abs(v) <= prob.Lambda * (1.0 + 1e-12) + 1e-12)) {
                        throw InputError(std::string("|") + payoff_name(f) + "(" + fmt(x) + ", " + fmt(y) + ", " +
                                         fmt(z) + ")| = " + fmt(std::abs(v)) + " exceeds Lambda = " +
                                         fmt(prob.Lambda));
                    }
                }
            }
    }

    std::mt19937_64 rng(seed);
    auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit_from_bits(rng()); };
    for (std::size_t s = 0; s < kLipschitzSamples; ++s) {
        const double x = draw(prob.W.lo(), prob.W.hi());
        const double y = prob.D[static_cast<std::size_t>(rng() % prob.D.size())];
        const double a = draw(-zmax, zmax), b = draw(-zmax, zmax);
        for (std::size_t f = 0; f < fs.size(); ++f) {
            const double lhs = std::abs((*fs[f])(x, y, a) - (*fs[f])(x, y, b));
            if (lhs > prob.beta * std::abs(a - b) + 1e-9) {
                throw InputError(std::string(payoff_name(f)) + " is not " + fmt(prob.beta) +
                                 "-Lipschitz in z: at x = " + fmt(x) + ", y = " + fmt(y) + ", z = " + fmt(a) +
                                 ", " + fmt(b));
            }
        }
    }
}

// ------------------------------------------------------------ value functions

ValueFunction::ValueFunction(Carrier W, std::vector<double> values) : W_(std::move(W)), values_(std::move(values)) {
    if (values_.size() != W_.grid_n())
        throw InputError("value function has " + std::to_string(values_.size()) + " values for " +
                         std::to_string(W_.grid_n()) + " grid points");
    for (double v : values_)
        if (!std::isfinite(v)) throw NumericalError("value function has a non-finite value");
}

ValueFunction ValueFunction::constant(const Carrier& W, double c) {
    return ValueFunction(W, std::vector<double>(W.grid_n(), c));
}

ValueFunction ValueFunction::from(const Carrier& W, const std::function<double(double)>& f) {
    std::vector<double> v(W.grid_n());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(W.point(i));
    return ValueFunction(W, std::move(v));
}

double ValueFunction::at(double x) const {
    const std::size_t n = W_.grid_n();
    const double pos = (W_.clamp(x) - W_.lo()) / W_.spacing();
    std::size_t i = static_cast<std::size_t>(std::floor(pos));
    if (i >= n - 1) return values_[n - 1];
    const double w = pos - static_cast<double>(i);
    if (w == 0.0) return values_[i];
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

double sup_metric(const ValueFunction& r, const ValueFunction& p) {
    require_same_grid(r, p);
    double d = 0.0;
    for (std::size_t i = 0; i < r.values().size(); ++i) d = std::max(d, std::abs(r.values()[i] - p.values()[i]));
    return d;
}

ValueFunction apply_bellman_operator(const DPProblem& prob, BellmanOp op, const ValueFunction& v, int jobs) {
    if (!(v.grid() == prob.W)) throw InputError("value function grid does not match W");
    const Payoff3& P = prob.payoff(op);
    const std::size_t n = prob.W.grid_n();
    std::vector<double> out(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        const double x = prob.W.point(i);
        double best = -std::numeric_limits<double>::infinity();
        for (double y : prob.D) best = std::max(best, prob.q(x, y) + P(x, y, v.at(tau_checked(prob, x, y))));
        if (!std::isfinite(best))
            throw NumericalError(std::string(to_string(op)) + " produced a non-finite value at x = " + fmt(x));
        out[i] = best;
    });
    return ValueFunction(prob.W, std::move(out));
}

IterationResult value_iterate(const DPProblem& prob, BellmanOp op, const ValueFunction& init, double tol,
                              std::size_t max_iter, int jobs) {
    if (!(tol > 0.0)) throw InputError("value iteration tolerance must be positive");
    if (max_iter == 0) throw InputError("max_iter must be positive");
    IterationResult res{init, 0, 0.0, {}, 0.0, true};
    ValueFunction v = init;
    double envelope = 1.0;
    while (res.iterations < max_iter) {
        ValueFunction next = apply_bellman_operator(prob, op, v, jobs);
        const double r = sup_metric(next, v);
        res.trace.push_back(r);
        const double excess = r - envelope * res.trace.front();
        if (res.iterations == 0 || excess > res.envelope_excess) res.envelope_excess = excess;
        envelope *= prob.beta;
        ++res.iterations;
        v = std::move(next);
        res.final_residual = r;
        if (r < tol) {
            res.envelope_ok = res.envelope_excess <= kEnvelopeTol;
            res.solution = std::move(v);
            return res;
        }
    }
    std::ostringstream os;
    os << to_string(op) << " value iteration did not reach tol " << tol << " in " << max_iter
       << " iterations; residual trace:";
    const std::size_t from = res.trace.size() > 8 ? res.trace.size() - 8 : 0;
    if (from > 0) os << " ...";
    for (std::size_t k = from; k < res.trace.size(); ++k) os << ' ' << res.trace[k];
    throw NumericalError(os.str());
}

SystemReport solve_system(const DPProblem& prob, double tol, std::size_t max_iter, int jobs) {
    SystemReport rep;
    rep.tol = tol;
    const ValueFunction zero = ValueFunction::constant(prob.W, 0.0);
    for (BellmanOp op : kBellmanOps) rep.runs.push_back(value_iterate(prob, op, zero, tol, max_iter, jobs));
    bool ok = true;
    for (std::size_t i = 0; i < 4; ++i) {
        const ValueFunction& P = rep.runs[i].solution;
        for (std::size_t j = 0; j < 4; ++j) {
            rep.cross[i][j] = sup_metric(apply_bellman_operator(prob, kBellmanOps[j], P, jobs), P);
            ok = ok && rep.cross[i][j] <= 2.0 * tol;
            rep.agreement = std::max(rep.agreement, sup_metric(P, rep.runs[j].solution));
        }
    }
    rep.common_solution = ok && rep.agreement <= 2.0 * tol;
    return rep;
}

// ------------------------------------------------------------ existence conditions

namespace {

TailCondition check_tail(const DPProblem& prob, const ValueSequence& seq, BellmanOp op1, BellmanOp op2,
                         std::string name, double tol, int jobs) {
    if (!seq.generator) throw InputError("condition (" + name + ") needs a value function sequence");
    if (seq.tail_len == 0) throw InputError("sequence tail length must be positive");
    TailCondition c;
    c.condition = std::move(name);
    std::optional<ValueFunction> first1, first2, last1, last2;
    for (std::size_t k = 0; k < seq.tail_len; ++k) {
        const double n = static_cast<double>(seq.tail_start + k);
        const ValueFunction r = ValueFunction::from(prob.W, [&](double x) { return seq.generator(x, n); });
        ValueFunction a = apply_bellman_operator(prob, op1, r, jobs);
        ValueFunction b = apply_bellman_operator(prob, op2, r, jobs);
        c.limit_gap = std::max(c.limit_gap, sup_metric(a, b));
        if (k + 1 == seq.tail_len) {
            const ValueFunction ab = apply_bellman_operator(prob, op1, b, jobs);
            const ValueFunction ba = apply_bellman_operator(prob, op2, a, jobs);
            c.commutator = sup_metric(ab, ba);
        }
        if (k == 0) {
            first1 = a;
            first2 = b;
        }
        last1 = std::move(a);
        last2 = std::move(b);
    }
    c.cauchy_spread = std::max(sup_metric(*first1, *last1), sup_metric(*first2, *last2));
    c.passed = c.limit_gap <= tol && c.cauchy_spread <= tol && c.commutator <= tol;
    std::ostringstream os;
    os << to_string(op1) << "/" << to_string(op2) << " on " << seq.description;
    if (c.limit_gap > tol) os << "; limits differ by " << c.limit_gap;
    if (c.cauchy_spread > tol) os << "; tail not settled (spread " << c.cauchy_spread << ")";
    if (c.commutator > tol) os << "; commutator " << c.commutator;
    c.note = os.str();
    return c;
}

}  // namespace

Theorem53Report check_theorem53(const DPProblem& prob, const ValueSequence& rs, const ValueSequence& ps,
                                const std::function<double(double)>& lambda, double tol,
                                std::size_t random_pairs, std::uint64_t seed, int jobs) {
    if (!(tol > 0.0)) throw InputError("tolerance must be positive");
    if (!lambda) throw InputError("condition (iii) needs a lambda gauge");

    // Probe lambda where phi_dp can land: phi_dp(d) >= -1.
    ThetaCondition th;
    std::vector<double> probes;
    for (int i = 0; i <= 400; ++i) probes.push_back(-1.0 + 0.01 * i);
    for (double u : probes) {
        const double l = lambda(u);
        if (!(l >= u)) {
            throw InputError("lambda(" + fmt(u) + ") = " + fmt(l) + " is below u; condition (iii) requires lambda(u) >= u");
        }
        if (!(l > u)) th.lambda_gt = false;
    }

    Theorem53Report rep;
    rep.cond_i = check_tail(prob, rs, BellmanOp::U1, BellmanOp::U2, "i", tol, jobs);
    rep.cond_ii = check_tail(prob, ps, BellmanOp::V1, BellmanOp::V2, "ii", tol, jobs);

    std::vector<std::pair<ValueFunction, ValueFunction>> pairs;
    for (std::size_t k = 0; k < std::min(rs.tail_len, ps.tail_len); ++k) {
        const double nr = static_cast<double>(rs.tail_start + k), np = static_cast<double>(ps.tail_start + k);
        pairs.emplace_back(ValueFunction::from(prob.W, [&](double x) { return rs.generator(x, nr); }),
                           ValueFunction::from(prob.W, [&](double x) { return ps.generator(x, np); }));
    }
    double qmax = 0.0;
    for (double x : prob.W.points())
        for (double y : prob.D) qmax = std::max(qmax, std::abs(prob.q(x, y)));
    const double bound = (qmax + prob.Lambda) / (1.0 - prob.beta);
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < random_pairs; ++k) {
        std::vector<double> a(prob.W.grid_n()), b(prob.W.grid_n());
        for (double& v : a) v = bound * (2.0 * unit_from_bits(rng()) - 1.0);
        for (double& v : b) v = bound * (2.0 * unit_from_bits(rng()) - 1.0);
        pairs.emplace_back(ValueFunction(prob.W, std::move(a)), ValueFunction(prob.W, std::move(b)));
    }

    const std::size_t n = prob.W.grid_n();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [r, p] = pairs[k];
        const ValueFunction U1r = apply_bellman_operator(prob, BellmanOp::U1, r, jobs);
        const ValueFunction U2r = apply_bellman_operator(prob, BellmanOp::U2, r, jobs);
        const ValueFunction V1p = apply_bellman_operator(prob, BellmanOp::V1, p, jobs);
        const ValueFunction V2p = apply_bellman_operator(prob, BellmanOp::V2, p, jobs);
        const double arg = std::max({phi_dp(sup_metric(U2r, V2p)), phi_dp(sup_metric(U2r, U1r)),
                                     phi_dp(sup_metric(V2p, V1p))});
        const double theta = lambda(arg);
        if (!(theta >= arg)) {
            throw InputError("lambda(" + fmt(arg) + ") = " + fmt(theta) + " is below its argument");
        }
        if (!(theta > arg)) th.lambda_gt = false;

        std::vector<double> lhs(n);
        std::vector<double> arg_y(n);
        parallel_for(n, jobs, [&](std::size_t i) {
            const double x = prob.W.point(i);
            double best = -1.0;
            for (double y : prob.D) {
                const double s = tau_checked(prob, x, y);
                const double v = std::abs(prob.L1(x, y, r.at(s)) - prob.N1(x, y, p.at(s)));
                if (v > best) {
                    best = v;
                    arg_y[i] = y;
                }
            }
            lhs[i] = best;
        });
        for (std::size_t i = 0; i < n; ++i) {
            const double margin = theta - lhs[i];
            if (th.pairs == 0 && i == 0) th.worst_margin = margin;
            th.worst_margin = std::min(th.worst_margin, margin);
            if (margin < -kEnvelopeTol && !th.witness) {
                th.passed = false;
                th.witness = Coordinates{{"pair", static_cast<double>(k)},
                                         {"x", prob.W.point(i)},
                                         {"y", arg_y[i]},
                                         {"lhs", lhs[i]},
                                         {"theta", theta}};
            }
        }
        ++th.pairs;
    }
    std::ostringstream os;
    os << th.pairs << " (r, p) pairs: " << std::min(rs.tail_len, ps.tail_len) << " from the tails, " << random_pairs
       << " random; lambda(u) " << (th.lambda_gt ? "> u" : ">= u (not strictly)");
    th.note = os.str();
    rep.cond_iii = th;
    return rep;
}

}  // namespace fuzzyfp
