#include "fuzzyfp/verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "fuzzyfp/errors.hpp"
#include "fuzzyfp/parallel.hpp"

namespace fuzzyfp {

namespace {

constexpr std::array<std::pair<std::string_view, ContractionForm>, 8> kFormNames{{
    {"main_411", ContractionForm::main_411},
    {"cor43_A", ContractionForm::cor43_A},
    {"cor43_B", ContractionForm::cor43_B},
    {"cor43_C", ContractionForm::cor43_C},
    {"cor43_D", ContractionForm::cor43_D},
    {"integral_511", ContractionForm::integral_511},
    {"cor51_A", ContractionForm::cor51_A},
    {"cor51_B", ContractionForm::cor51_B},
}};

constexpr std::size_t kGaugeGrid = 201;

bool is_integral(ContractionForm f) {
    return f == ContractionForm::integral_511 || f == ContractionForm::cor51_A ||
           f == ContractionForm::cor51_B;
}

std::string name_of(ContractionForm f) { return std::string(to_string(f)); }

void require_unit_k(const ContractionSpec& s) {
    if (!s.k) throw InputError(name_of(s.form) + " requires parameter k");
    if (!(*s.k > 0.0 && *s.k < 1.0)) {
        std::ostringstream os;
        os << name_of(s.form) << ": k = " << *s.k << " must satisfy 0 < k < 1";
        throw InputError(os.str());
    }
}

void require_delta(const ContractionSpec& s, double hi) {
    if (!s.delta) throw InputError(name_of(s.form) + " requires a delta gauge");
    for (std::size_t i = 0; i < kGaugeGrid; ++i) {
        const double u = hi * static_cast<double>(i) / static_cast<double>(kGaugeGrid - 1);
        const double d = s.delta(u);
        const bool ok = u == 0.0 ? d == 0.0 || (s.form == ContractionForm::cor51_B && d >= 0.0)
                                 : (d >= 0.0 && d < u);
        if (!ok) {
            std::ostringstream os;
            os << name_of(s.form) << ": delta(" << u << ") = " << d << " violates delta(0) = 0, 0 <= delta(u) < u";
            throw InputError(os.str());
        }
    }
}

void require_density(const ContractionSpec& s) {
    if (!s.density) throw InputError(name_of(s.form) + " requires a density");
    const auto r = check_phi_class(*s.density, s.quad_tol);
    if (!r.passed) {
        std::ostringstream os;
        os << name_of(s.form) << ": density '" << s.density->description << "' has no mass on [0, "
           << *r.failing_epsilon << "]";
        throw InputError(os.str());
    }
}

using Kernel = std::function<double(double, double, double, double)>;

// Integral gauge used by the integral forms: s * integral over [0, 1 - m].
Gauge1 integral_gauge(const ContractionSpec& spec) {
    const Density d = *spec.density;
    const double tol = spec.quad_tol;
    const double mass = integrate_density(d, 0.0, 1.0, tol);
    const double scale = mass > 1.0 ? 1.0 / mass : 1.0;
    return [d, tol, scale](double m) { return scale * integrate_density(d, 0.0, 1.0 - m, tol); };
}

// Maps the four memberships (M(Fx,Gy), M(Ax,By), M(Ax,Fx), M(By,Gy)) to a margin.
Kernel make_kernel(const ContractionSpec& spec) {
    switch (spec.form) {
        case ContractionForm::main_411: {
            const PsiFunction psi = *spec.psi;
            const AlteringDistance phi = *spec.phi;
            return [psi, phi](double m1, double m2, double m3, double m4) {
                return psi(phi(m1), phi(m2), phi(m3), phi(m4));
            };
        }
        case ContractionForm::cor43_A:
            return [phi = *spec.phi, delta = spec.delta](double m1, double m2, double m3, double m4) {
                return phi(m1) - delta(std::max({phi(m2), phi(m3), phi(m4)}));
            };
        case ContractionForm::cor43_B:
            return [phi = *spec.phi, k = *spec.k](double m1, double m2, double m3, double m4) {
                return phi(m1) - k * std::min({phi(m2), phi(m3), phi(m4)});
            };
        case ContractionForm::cor43_C:
            return [phi = *spec.phi, delta = spec.delta3](double m1, double m2, double m3, double m4) {
                return phi(m1) - delta(phi(m2), phi(m3), phi(m4));
            };
        case ContractionForm::cor43_D:
            return [phi = *spec.phi, k = *spec.k](double m1, double m2, double m3, double m4) {
                return phi(m1) - (k * phi(m2) - std::min(phi(m3), phi(m4)));
            };
        case ContractionForm::integral_511:
            return [psi = *spec.psi, I = integral_gauge(spec)](double m1, double m2, double m3, double m4) {
                return psi(I(m1), I(m2), I(m3), I(m4));
            };
        case ContractionForm::cor51_A:
            return [a = *spec.a, I = integral_gauge(spec)](double m1, double m2, double m3, double m4) {
                return I(m1) - a * std::max({I(m2), I(m3), I(m4)});
            };
        case ContractionForm::cor51_B:
            return [delta = spec.delta, I = integral_gauge(spec)](double m1, double m2, double m3, double m4) {
                return I(m1) - delta(std::max({I(m2), I(m3), I(m4)}));
            };
    }
    throw InputError("unknown contraction form");
}

struct ScanResult {
    std::vector<double> margins;
    std::vector<double> xs;
    std::size_t nt = 0;
};

ScanResult scan(const MapQuadruple& quad, const Kernel& kernel, std::size_t grid_n,
                const std::vector<double>& ts, int jobs) {
    const Carrier grid = quad.carrier().with_grid(grid_n);
    ScanResult r;
    r.xs = grid.points();
    r.nt = ts.size();
    const std::size_t n = r.xs.size();
    std::vector<double> ax(n), fx(n), by(n), gy(n);
    for (std::size_t i = 0; i < n; ++i) {
        ax[i] = quad.A()(r.xs[i]);
        fx[i] = quad.F()(r.xs[i]);
        by[i] = quad.B()(r.xs[i]);
        gy[i] = quad.G()(r.xs[i]);
    }
    const FuzzyMetric& M = quad.metric();
    r.margins.resize(n * n * r.nt);
    parallel_for(r.margins.size(), jobs, [&](std::size_t idx) {
        const std::size_t ix = idx / (n * r.nt);
        const std::size_t iy = (idx / r.nt) % n;
        const double t = ts[idx % r.nt];
        const double m1 = M(fx[ix], gy[iy], t);
        const double m2 = M(ax[ix], by[iy], t);
        const double m3 = M(ax[ix], fx[ix], t);
        const double m4 = M(by[iy], gy[iy], t);
        double m;
        try {
            m = kernel(m1, m2, m3, m4);
        } catch (const NumericalError& e) {
            std::ostringstream os;
            os << e.what() << " (at x = " << r.xs[ix] << ", y = " << r.xs[iy] << ", t = " << t << ")";
            throw NumericalError(os.str());
        }
        if (!std::isfinite(m)) {
            std::ostringstream os;
            os << "non-finite contraction margin at x = " << r.xs[ix] << ", y = " << r.xs[iy] << ", t = " << t;
            throw NumericalError(os.str());
        }
        r.margins[idx] = m;
    });
    return r;
}

Coordinates point_of(const ScanResult& r, std::size_t idx, const std::vector<double>& ts) {
    const std::size_t n = r.xs.size();
    return {{"x", r.xs[idx / (n * r.nt)]}, {"y", r.xs[(idx / r.nt) % n]}, {"t", ts[idx % r.nt]}};
}

VerificationReport run(const MapQuadruple& quad, const ContractionSpec& spec, const ContractionPlan& plan) {
    if (plan.t_grid.empty()) throw InputError("contraction plan has an empty t-grid");
    for (double t : plan.t_grid)
        if (!(t > 0.0) || !std::isfinite(t)) throw InputError("t-grid values must be positive");
    const std::size_t n = plan.grid_n ? plan.grid_n : quad.carrier().grid_n();
    if (n < 2) throw InputError("contraction plan needs at least 2 grid points");

    const Kernel kernel = make_kernel(spec);
    VerificationReport rep;
    rep.form = name_of(spec.form);

    ScanResult base = scan(quad, kernel, n, plan.t_grid, plan.jobs);
    ScanSummary sum = summarize_margins(base.margins, -kMarginTol);
    rep.resolutions.push_back(n);
    rep.samples = base.margins.size();
    rep.passed = sum.passed();
    rep.worst_margin = sum.worst_margin;
    rep.best_margin = sum.best_margin;
    rep.mean_margin = sum.mean_margin;
    rep.violations = sum.violations;
    rep.worst_point = point_of(base, sum.worst_index, plan.t_grid);
    if (sum.first_violation) rep.witness = point_of(base, *sum.first_violation, plan.t_grid);

    if (rep.passed && plan.refine) {
        const std::size_t fine = 2 * n - 1;
        ScanResult ref = scan(quad, kernel, fine, plan.t_grid, plan.jobs);
        const ScanSummary rs = summarize_margins(ref.margins, -kMarginTol);
        rep.resolutions.push_back(fine);
        rep.samples += ref.margins.size();
        rep.violations += rs.violations;
        rep.passed = rs.passed();
        rep.best_margin = std::max(rep.best_margin, rs.best_margin);
        if (rs.worst_margin < rep.worst_margin) {
            rep.worst_margin = rs.worst_margin;
            rep.worst_point = point_of(ref, rs.worst_index, plan.t_grid);
        }
        if (rs.first_violation) rep.witness = point_of(ref, *rs.first_violation, plan.t_grid);
    }
    rep.margins = std::move(base.margins);
    return rep;
}

}  // namespace

std::string_view to_string(ContractionForm f) {
    for (const auto& [name, form] : kFormNames)
        if (form == f) return name;
    return "?";
}

ContractionForm contraction_form_from_name(std::string_view name) {
    for (const auto& [n, form] : kFormNames)
        if (n == name) return form;
    throw InputError("unknown contraction form '" + std::string(name) + "'");
}

void validate(const ContractionSpec& spec) {
    const std::string who = name_of(spec.form);
    if (!(spec.quad_tol > 0.0)) throw InputError(who + ": quadrature tolerance must be positive");
    if (!is_integral(spec.form)) {
        if (!spec.phi) throw InputError(who + " requires an altering distance");
        const AlteringReport ar = verify_altering(spec.phi->function(), 101);
        if (!ar.passed) {
            for (const auto& c : ar.checks) {
                if (c.passed) continue;
                std::ostringstream os;
                os << who << ": altering distance fails " << c.condition;
                if (c.witness) os << " at lambda = " << *c.witness;
                throw InputError(os.str());
            }
        }
    }
    switch (spec.form) {
        case ContractionForm::main_411:
            if (!spec.psi) throw InputError(who + " requires psi");
            break;
        case ContractionForm::cor43_A:
            require_delta(spec, 1.0);
            break;
        case ContractionForm::cor43_B:
        case ContractionForm::cor43_D:
            require_unit_k(spec);
            break;
        case ContractionForm::cor43_C:
            if (!spec.delta3) throw InputError(who + " requires a three-argument delta gauge");
            for (std::size_t i = 1; i < kGaugeGrid; ++i) {
                const double u = static_cast<double>(i) / static_cast<double>(kGaugeGrid - 1);
                const double d = std::max({spec.delta3(0, u, 0), spec.delta3(0, 0, u), spec.delta3(u, 0, 0)});
                if (!(d < u)) {
                    std::ostringstream os;
                    os << who << ": delta on the axes at u = " << u << " is " << d << ", not below u";
                    throw InputError(os.str());
                }
            }
            break;
        case ContractionForm::integral_511:
            if (!spec.psi) throw InputError(who + " requires psi");
            require_density(spec);
            break;
        case ContractionForm::cor51_A:
            require_density(spec);
            if (!spec.a) throw InputError(who + " requires parameter a");
            if (!(*spec.a >= 0.0 && *spec.a < 1.0)) {
                std::ostringstream os;
                os << who << ": a = " << *spec.a << " must satisfy 0 <= a < 1";
                throw InputError(os.str());
            }
            break;
        case ContractionForm::cor51_B:
            require_density(spec);
            require_delta(spec, 1.0);
            break;
    }
}

VerificationReport verify_main_contraction(const MapQuadruple& quad, const PsiFunction& psi,
                                           const AlteringDistance& phi, const ContractionPlan& plan) {
    ContractionSpec spec;
    spec.form = ContractionForm::main_411;
    spec.psi = psi;
    spec.phi = phi;
    validate(spec);
    return run(quad, spec, plan);
}

VerificationReport verify_corollary_condition(const MapQuadruple& quad, const ContractionSpec& spec,
                                              const ContractionPlan& plan) {
    switch (spec.form) {
        case ContractionForm::cor43_A:
        case ContractionForm::cor43_B:
        case ContractionForm::cor43_C:
        case ContractionForm::cor43_D:
            break;
        default:
            throw InputError("verify_corollary_condition expects one of cor43_A .. cor43_D");
    }
    validate(spec);
    return run(quad, spec, plan);
}

VerificationReport verify_integral_contraction(const MapQuadruple& quad, const ContractionSpec& spec,
                                               const ContractionPlan& plan) {
    if (!is_integral(spec.form))
        throw InputError("verify_integral_contraction expects integral_511, cor51_A or cor51_B");
    validate(spec);
    return run(quad, spec, plan);
}

VerificationReport verify_contraction(const MapQuadruple& quad, const ContractionSpec& spec,
                                      const ContractionPlan& plan) {
    validate(spec);
    return run(quad, spec, plan);
}

double contraction_margin(const MapQuadruple& quad, const ContractionSpec& spec, double x, double y,
                          double t) {
    validate(spec);
    const FuzzyMetric& M = quad.metric();
    const double ax = quad.A()(x), fx = quad.F()(x), by = quad.B()(y), gy = quad.G()(y);
    return make_kernel(spec)(M(fx, gy, t), M(ax, by, t), M(ax, fx, t), M(by, gy, t));
}

}  // namespace fuzzyfp
