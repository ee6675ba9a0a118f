#include "pursuit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pursuit/errors.hpp"

namespace pursuit {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
// Discriminants within this of zero are treated as a repeated root.
constexpr double kDegenerateDisc = 1e-12;
}  // namespace

Equilibrium equilibrium_circular(double a, double n) {
    if (!(a > 0.0) || !(n > 0.0)) {
        throw InvalidRegimeError("equilibrium_circular requires a > 0, n > 0");
    }
    if (n > 1.0) {
        throw NoEquilibriumError(
            "circular system has no equilibrium for n > 1");
    }
    return {a * std::sqrt(1.0 - n * n), std::acos(n)};
}

CircularSpectrum jacobian_circular(double a, double n) {
    if (!(a > 0.0) || !(n > 0.0) || n >= 1.0) {
        throw InvalidRegimeError("jacobian_circular requires 0 < n < 1");
    }
    const double w = std::sqrt(1.0 - n * n);
    const double rho_star = a * w;
    CircularSpectrum spec;
    spec.jacobian = Mat2{0.0, -w, 1.0 / (a * a * w), -n / (a * w)};

    const double disc = 5.0 * n * n - 4.0;
    const double denom = 2.0 * a * w;
    if (disc > kDegenerateDisc) {
        const double r = std::sqrt(disc);
        spec.lambda_plus = Complex((-n + r) / denom, 0.0);
        spec.lambda_minus = Complex((-n - r) / denom, 0.0);
        spec.classification = EquilibriumClass::StableNode;
    } else if (disc < -kDegenerateDisc) {
        const double r = std::sqrt(-disc);
        spec.lambda_plus = Complex(-n / denom, r / denom);
        spec.lambda_minus = Complex(-n / denom, -r / denom);
        spec.classification = EquilibriumClass::StableSpiral;
    } else {
        spec.lambda_plus = spec.lambda_minus = Complex(-n / denom, 0.0);
        spec.classification = EquilibriumClass::Degenerate;
    }
    (void)rho_star;
    return spec;
}

EquilibriumReport equilibrium_report(double a, double n) {
    const Equilibrium eq = equilibrium_circular(a, n);
    const CircularSpectrum spec = jacobian_circular(a, n);
    return {eq.rho_star,     eq.zeta_star,      spec.jacobian,
            spec.lambda_plus, spec.lambda_minus, spec.classification};
}

double blowup_upper_bound(const EllipseGeometry& g, double n, double mu0,
                          double phi0) {
    if (!(n > 1.0)) {
        throw InvalidRegimeError("blow-up upper bound requires n > 1");
    }
    const double f_min = rate_bounds(g).f_min;
    return phi0 + std::exp(mu0) / (f_min * (n - 1.0));
}

double blowup_lower_bound(const EllipseGeometry& g, double n, double mu0) {
    if (!(n > 0.0)) {
        throw InvalidRegimeError("blow-up lower bound requires n > 0");
    }
    const double f_max = rate_bounds(g).f_max;
    return std::exp(mu0) / (f_max * (n + 1.0));
}

CaptureReport measure_capture(const EllipseGeometry& g, double n, double mu0,
                              double zeta0, double phi0, double span,
                              const IntegratorConfig& cfg) {
    CaptureReport rep;
    rep.phi0 = phi0;
    rep.mu0 = mu0;
    rep.lower_bound = blowup_lower_bound(g, n, mu0);
    if (n > 1.0) {
        rep.upper_bound = blowup_upper_bound(g, n, mu0, phi0);
    }
    const OdeRhs rhs = make_logpolar_phi_system(g, n);
    const double y0[2] = {mu0, zeta0};
    const IntegrationResult r =
        integrate(rhs, y0, phi0, phi0 + span, cfg, std::size_t{0});
    if (r.outcome.status == RunStatus::Failed) {
        throw Error("capture measurement failed: " + r.outcome.diagnostic);
    }
    if (r.outcome.status == RunStatus::Captured) {
        rep.captured = true;
        rep.s_crossing = r.outcome.capture->s_crossing;
        rep.phi_B_measured = r.outcome.capture->phi_blowup;
    }
    return rep;
}

Complex poincare_map(Complex z0, double phi0, const EllipseGeometry& g,
                     double n, const IntegratorConfig& cfg) {
    if (std::abs(z0) == 0.0) {
        throw ZeroModulusError("poincare_map: |z0| = 0");
    }
    const OdeRhs rhs = make_complex_phi_system(g, n);
    const double y0[2] = {z0.real(), z0.imag()};
    const IntegrationResult r = integrate(rhs, y0, phi0, phi0 + kPi, cfg);
    if (r.outcome.status != RunStatus::Completed) {
        throw Error("poincare_map integration failed: " +
                    r.outcome.diagnostic);
    }
    const double floor = std::exp(cfg.mu_min);
    for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
        const auto& y = r.trajectory.state(i);
        if (std::hypot(y[0], y[1]) <= floor) {
            throw InvalidRegimeError(
                "poincare_map: trajectory collapsed to capture");
        }
    }
    return {r.outcome.final_state[0], r.outcome.final_state[1]};
}

PoincareResult find_periodic_orbit(const EllipseGeometry& g, double n,
                                   double phi0, Complex seed,
                                   const IntegratorConfig& cfg, double tol,
                                   int max_iters) {
    if (!(n > 0.0) || !(n < 1.0)) {
        throw InvalidRegimeError(
            "periodic orbit requires the regime 0 < n < 1");
    }
    PoincareResult out;
    out.iterates.push_back(seed);
    Complex z = seed;
    double delta = std::numeric_limits<double>::infinity();
    for (int k = 0; k < max_iters; ++k) {
        const Complex zn = poincare_map(z, phi0, g, n, cfg);
        out.iterates.push_back(zn);
        delta = std::abs(zn - z);
        z = zn;
        if (delta < tol) {
            out.fixed_point = z;
            out.residual = std::abs(poincare_map(z, phi0, g, n, cfg) - z);
            out.iterations = static_cast<std::size_t>(k + 1);
            return out;
        }
    }
    throw MaxItersExceededError(
        "Poincare iteration did not converge within " +
            std::to_string(max_iters) + " iterations (last delta " +
            std::to_string(delta) + ")",
        delta);
}

PeriodicOrbit solve_periodic_orbit(const EllipseGeometry& g, double n,
                                   double phi0, Complex seed,
                                   const IntegratorConfig& cfg, double tol,
                                   int max_iters) {
    PeriodicOrbit orbit{find_periodic_orbit(g, n, phi0, seed, cfg, tol,
                                            max_iters),
                        {}, 0.0, 0.0};
    const OdeRhs rhs = make_complex_phi_system(g, n);
    const double y0[2] = {orbit.result.fixed_point.real(),
                          orbit.result.fixed_point.imag()};
    IntegrationResult r = integrate(rhs, y0, phi0, phi0 + kPi, cfg);
    if (r.outcome.status != RunStatus::Completed) {
        throw Error("periodic orbit sampling failed: " + r.outcome.diagnostic);
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    const int kSamples = 2048;
    for (int i = 0; i <= kSamples; ++i) {
        const double phi = phi0 + kPi * static_cast<double>(i) / kSamples;
        const auto y = r.trajectory.eval(phi);
        const double rho = std::hypot(y[0], y[1]);
        lo = std::min(lo, rho);
        hi = std::max(hi, rho);
    }
    orbit.period = std::move(r.trajectory);
    orbit.rho_min = lo;
    orbit.rho_max = hi;
    return orbit;
}

double distance_functional(Complex z1, Complex z2) {
    return std::norm(z1 - z2);
}

double distance_slope(Complex z1, Complex z2, double phi,
                      const EllipseGeometry& g, double n) {
    const double r1 = std::abs(z1), r2 = std::abs(z2);
    if (r1 == 0.0 || r2 == 0.0) {
        throw ZeroModulusError("distance_slope: zero modulus");
    }
    // cos(zeta1 - zeta2) = Re(z1 conj z2) / (rho1 rho2), branch-free.
    const double cosd = (z1.real() * z2.real() + z1.imag() * z2.imag()) /
                        (r1 * r2);
    const double f = angular_rate(g, phi);
    return -(2.0 * n / f) * (r1 + r2) * (1.0 - cosd);
}

double period_shift(const Trajectory& ztraj, double phi) {
    const auto y1 = ztraj.eval(phi);
    const auto y2 = ztraj.eval(phi + kPi);
    const double dx = y2[0] - y1[0], dy = y2[1] - y1[1];
    return dx * dx + dy * dy;
}

AnnulusBounds annulus_bounds(Vec2 pursuer_start, const EllipseGeometry& g) {
    const double R0 = std::max(norm(pursuer_start), g.a);
    return {R0, g.a + R0, std::nullopt};
}

double compare_parametrizations(const EllipseGeometry& g, double n,
                                Vec2 pursuer_start, double t0, double t1,
                                const Reparametrization& reparam,
                                const IntegratorConfig& cfg, int samples) {
    if (!(t1 > t0) || !(reparam.s1 > reparam.s0)) {
        throw ConfigError("compare_parametrizations: empty span");
    }
    const double ends[2] = {reparam.map(reparam.s0), reparam.map(reparam.s1)};
    const double slack = 1e-8 * std::max(1.0, std::abs(t1 - t0));
    if (std::abs(ends[0] - t0) > slack || std::abs(ends[1] - t1) > slack) {
        throw ConfigError(
            "compare_parametrizations: map([s0, s1]) must equal [t0, t1]");
    }

    const EvaderPath base = ellipse_path_standard(g);
    const EvaderPath warped = reparametrize(base, reparam.map, reparam.rate);

    const double p0[2] = {pursuer_start.x, pursuer_start.y};
    const IntegrationResult run1 =
        integrate(make_cartesian_system(base, n), p0, t0, t1, cfg);
    const IntegrationResult run2 = integrate(
        make_cartesian_system(warped, n), p0, reparam.s0, reparam.s1, cfg);
    if (run1.outcome.status != RunStatus::Completed ||
        run2.outcome.status != RunStatus::Completed) {
        throw Error("compare_parametrizations: integration failed: " +
                    run1.outcome.diagnostic + run2.outcome.diagnostic);
    }

    double worst = 0.0;
    for (int k = 0; k <= samples; ++k) {
        const double t = t0 + (t1 - t0) * static_cast<double>(k) / samples;
        // Invert the monotone map by bisection to find the matched s.
        double lo = reparam.s0, hi = reparam.s1;
        for (int it = 0; it < 100 && (hi - lo) > 1e-14 * (1.0 + std::abs(hi));
             ++it) {
            const double mid = 0.5 * (lo + hi);
            if (reparam.map(mid) < t) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double s_match = 0.5 * (lo + hi);
        const auto a1 = run1.trajectory.eval(t);
        const auto a2 = run2.trajectory.eval(s_match);
        worst = std::max(worst, std::hypot(a1[0] - a2[0], a1[1] - a2[1]));
    }
    return worst;
}

}  // namespace pursuit
