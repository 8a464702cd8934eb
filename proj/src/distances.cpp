#include "fuzzyfp/distances.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fuzzyfp/errors.hpp"

namespace fuzzyfp {

Density Density::constant(double c) {
    std::ostringstream os;
    os << c;
    return Density{[c](double) { return c; }, os.str()};
}

namespace {

double sample(const Density& d, double x) {
    const double v = d.fn(x);
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "density '" << d.description << "' is not finite at x = " << x;
        throw NumericalError(os.str());
    }
    if (v < 0.0) {
        std::ostringstream os;
        os << "density '" << d.description << "' is negative at x = " << x << " (" << v << ")";
        throw InputError(os.str());
    }
    return v;
}

struct Simpson {
    const Density& d;

    double step(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = sample(d, lm);
        const double frm = sample(d, rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        if (depth >= kMaxQuadDepth) {
            std::ostringstream os;
            os << "adaptive Simpson did not converge on [" << a << ", " << b << "] for density '"
               << d.description << "'";
            throw NumericalError(os.str());
        }
        return step(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               step(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

double integrate_density(const Density& density, double a, double b, double tol) {
    if (!density.fn) throw InputError("density has no evaluator");
    if (!(tol > 0.0)) throw InputError("quadrature tolerance must be positive");
    if (!(a <= b)) {
        std::ostringstream os;
        os << "integration bounds reversed: a = " << a << " > b = " << b;
        throw InputError(os.str());
    }
    if (a < 0.0 || b > 1.0) {
        std::ostringstream os;
        os << "integration bounds [" << a << ", " << b << "] leave [0,1]";
        throw InputError(os.str());
    }
    if (a == b) return 0.0;
    const double fa = sample(density, a);
    const double fb = sample(density, b);
    const double fm = sample(density, 0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Simpson{density}.step(a, b, fa, fm, fb, whole, tol, 0);
}

PhiClassReport check_phi_class(const Density& density, double tol) {
    PhiClassReport r;
    for (double eps : {1e-3, 1e-2, 1e-1, 1.0}) {
        const double mass = integrate_density(density, 0.0, eps, tol);
        r.probes.emplace_back(eps, mass);
        if (!(mass > 1e-14) && r.passed) {
            r.passed = false;
            r.failing_epsilon = eps;
        }
    }
    return r;
}

AlteringDistance::AlteringDistance(std::function<double(double)> fn, AlteringProvenance provenance)
    : fn_(std::move(fn)), provenance_(std::move(provenance)) {
    if (!fn_) throw InputError("altering distance needs an evaluator");
}

AlteringDistance make_integral_altering(const Density& density, double tol) {
    const PhiClassReport phi = check_phi_class(density, tol);
    if (!phi.passed) {
        std::ostringstream os;
        os << "density '" << density.description << "' has no mass on [0, " << *phi.failing_epsilon
           << "]";
        throw InputError(os.str());
    }
    const double mass = integrate_density(density, 0.0, 1.0, tol);
    AlteringProvenance prov;
    prov.kind = AlteringKind::integral;
    prov.description = "integral of " + density.description + " over [0, 1-s]";
    prov.raw_mass = mass;
    prov.scale = mass > 1.0 ? 1.0 / mass : 1.0;

    auto fn = [density, tol, scale = prov.scale](double s) {
        if (!(s >= 0.0 && s <= 1.0)) {
            std::ostringstream os;
            os << "altering distance argument " << s << " outside [0,1]";
            throw InputError(os.str());
        }
        return scale * integrate_density(density, 0.0, 1.0 - s, tol);
    };
    AlteringDistance out(fn, prov);

    const AlteringReport check = verify_altering(out.function(), 101);
    if (!check.passed) {
        for (const auto& c : check.checks) {
            if (c.passed) continue;
            std::ostringstream os;
            os << "integral gauge of '" << density.description << "' fails " << c.condition;
            if (c.witness) os << " at " << *c.witness;
            throw InputError(os.str());
        }
    }
    return out;
}

AlteringDistance builtin_altering(std::string_view kind) {
    if (kind == "linear")
        return AlteringDistance([](double l) { return 1.0 - l; },
                                {AlteringKind::builtin_linear, "1 - lambda", 1.0, 0.0});
    if (kind == "quadratic")
        return AlteringDistance([](double l) { return (1.0 - l) * (1.0 - l); },
                                {AlteringKind::builtin_quadratic, "(1 - lambda)^2", 1.0, 0.0});
    throw InputError("unknown altering distance kind '" + std::string(kind) +
                     "' (expected linear or quadratic)");
}

const AlteringCheck& AlteringReport::at(std::string_view condition) const {
    for (const auto& c : checks)
        if (c.condition == condition) return c;
    throw std::out_of_range("no altering check named " + std::string(condition));
}

AlteringReport verify_altering(const std::function<double(double)>& candidate, std::size_t grid_n) {
    if (grid_n < 3) throw InputError("altering verification grid needs at least 3 points");
    if (!candidate) throw InputError("altering candidate has no evaluator");
    std::vector<double> lam(grid_n), val(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i) {
        lam[i] = (i + 1 == grid_n) ? 1.0 : static_cast<double>(i) / static_cast<double>(grid_n - 1);
        val[i] = candidate(lam[i]);
    }

    AlteringCheck range{"range", true, std::nullopt, "phi maps into [0,1]"};
    for (std::size_t i = 0; i < grid_n; ++i) {
        if (!(val[i] >= -1e-12 && val[i] <= 1.0 + 1e-12)) {
            range.passed = false;
            range.witness = lam[i];
            break;
        }
    }

    AlteringCheck ad1{"ad1", true, std::nullopt, "strictly decreasing on consecutive grid points"};
    for (std::size_t i = 0; i + 1 < grid_n; ++i) {
        if (!(val[i + 1] < val[i])) {
            ad1.passed = false;
            ad1.witness = lam[i];
            break;
        }
    }

    AlteringCheck ad2{"ad2", true, std::nullopt, "phi(1) = 0 and phi > 0 below 1"};
    for (std::size_t i = 0; i + 1 < grid_n; ++i) {
        if (!(val[i] > 0.0)) {
            ad2.passed = false;
            ad2.witness = lam[i];
            break;
        }
    }
    if (ad2.passed && !(std::abs(val.back()) <= 1e-12)) {
        ad2.passed = false;
        ad2.witness = 1.0;
    }

    AlteringReport r;
    r.checks = {range, ad1, ad2};
    r.passed = range.passed && ad1.passed && ad2.passed;
    return r;
}

}  // namespace fuzzyfp
