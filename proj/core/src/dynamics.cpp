#include "pursuit/dynamics.hpp"

#include <cmath>
#include <utility>

#include "pursuit/errors.hpp"

namespace pursuit {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double lambda_of(double rho, double n) { return rho / n; }

Vec2 cartesian_rhs(const CartesianPair& p, const Vec2& evader_vel, double n) {
    const Vec2 d = p.evader - p.pursuer;
    const double rho = norm(d);
    if (rho == 0.0) {
        throw ZeroSeparationError("pursuit direction undefined at zero separation");
    }
    const double speed = n * norm(evader_vel);
    return (speed / rho) * d;
}

PolarRate circular_rhs_t(const PolarState& s, double a, double n) {
    if (s.rho == 0.0) {
        throw ZeroSeparationError("circular_rhs_t: rho = 0");
    }
    return {std::cos(s.zeta) - n, -std::sin(s.zeta) / s.rho + 1.0 / a};
}

PolarRate circular_rhs_phi(const PolarState& s, double a, double n) {
    if (s.rho == 0.0) {
        throw ZeroSeparationError("circular_rhs_phi: rho = 0");
    }
    return {a * (std::cos(s.zeta) - n), 1.0 - a * std::sin(s.zeta) / s.rho};
}

PolarRate elliptical_rhs_phi(const PolarState& s, double phi,
                             const EllipseGeometry& g, double n) {
    if (s.rho == 0.0) {
        throw ZeroSeparationError("elliptical_rhs_phi: rho = 0");
    }
    const double f = angular_rate(g, phi);
    return {(std::cos(s.zeta) - n) / f, 1.0 - std::sin(s.zeta) / (s.rho * f)};
}

LogPolarRate logpolar_rhs_t(const LogPolarState& s, double phidot, double n) {
    const double em = std::exp(-s.mu);
    return {em * (std::cos(s.zeta) - n), -em * std::sin(s.zeta) + phidot};
}

LogPolarRate logpolar_rhs_phi(const LogPolarState& s, double phi,
                              const EllipseGeometry& g, double n) {
    const double f = angular_rate(g, phi);
    const double em = std::exp(-s.mu);
    return {em * (std::cos(s.zeta) - n) / f,
            1.0 - em * std::sin(s.zeta) / f};
}

Complex complex_rhs_phi(Complex z, double phi, const EllipseGeometry& g,
                        double n) {
    const double r = std::abs(z);
    if (r == 0.0) {
        throw ZeroModulusError("complex_rhs_phi: |z| = 0");
    }
    const double f = angular_rate(g, phi);
    return 1.0 / f - (n / f) * (z / r) + Complex(0.0, 1.0) * z;
}

Complex to_complex(const LogPolarState& s) {
    return std::polar(std::exp(s.mu), s.zeta);
}

LogPolarState from_complex(Complex z) {
    const double r = std::abs(z);
    if (r == 0.0) {
        throw ZeroModulusError("from_complex: |z| = 0");
    }
    return {std::log(r), std::arg(z)};
}

LogPolarState from_complex(Complex z, double zeta_ref) {
    LogPolarState s = from_complex(z);
    s.zeta = wind_to_reference(s.zeta, zeta_ref);
    return s;
}

LogPolarState to_logpolar(const PolarState& s) {
    if (s.rho <= 0.0) {
        throw ZeroSeparationError("to_logpolar: rho must be positive");
    }
    return {std::log(s.rho), s.zeta};
}

PolarState to_polar(const LogPolarState& s) {
    return {std::exp(s.mu), s.zeta};
}

double wind_to_reference(double angle, double ref) {
    return angle + kTwoPi * std::round((ref - angle) / kTwoPi);
}

Vec2 reconstruct_pursuer(const PolarState& s, double phi,
                         const EllipseGeometry& g) {
    const Vec2 e = evader_position(g, phi);
    const double d = phi - s.zeta;
    return {e.x - s.rho * std::cos(d), e.y - s.rho * std::sin(d)};
}

Vec2 reconstruct_pursuer_circular(const PolarState& s, double t, double a) {
    const double u = t / a;
    const double phi = u + 1.5707963267948966;
    const double d = phi - s.zeta;
    return {a * std::cos(u) - s.rho * std::cos(d),
            a * std::sin(u) - s.rho * std::sin(d)};
}

PolarState cartesian_to_reduced(const CartesianPair& p, double phi,
                                double zeta_ref) {
    const Vec2 d = p.evader - p.pursuer;
    const double rho = norm(d);
    if (rho == 0.0) {
        throw ZeroSeparationError("cartesian_to_reduced: zero separation");
    }
    const double zeta = phi - std::atan2(d.y, d.x);
    return {rho, wind_to_reference(zeta, zeta_ref)};
}

OdeRhs make_logpolar_phi_system(const EllipseGeometry& g, double n) {
    return [g, n](double phi, std::span<const double> y,
                  std::span<double> dydx) {
        const LogPolarRate r = logpolar_rhs_phi({y[0], y[1]}, phi, g, n);
        dydx[0] = r.dmu;
        dydx[1] = r.dzeta;
    };
}

OdeRhs make_polar_phi_system(const EllipseGeometry& g, double n) {
    return [g, n](double phi, std::span<const double> y,
                  std::span<double> dydx) {
        const PolarRate r = elliptical_rhs_phi({y[0], y[1]}, phi, g, n);
        dydx[0] = r.drho;
        dydx[1] = r.dzeta;
    };
}

OdeRhs make_complex_phi_system(const EllipseGeometry& g, double n) {
    return [g, n](double phi, std::span<const double> y,
                  std::span<double> dydx) {
        const Complex dz = complex_rhs_phi({y[0], y[1]}, phi, g, n);
        dydx[0] = dz.real();
        dydx[1] = dz.imag();
    };
}

OdeRhs make_polar_t_system(const EllipseGeometry& g, double n) {
    return [g, n](double, std::span<const double> y, std::span<double> dydx) {
        const double phidot = angular_rate(g, y[2]);
        if (y[0] == 0.0) {
            throw ZeroSeparationError("polar_t system: rho = 0");
        }
        dydx[0] = std::cos(y[1]) - n;
        dydx[1] = -std::sin(y[1]) / y[0] + phidot;
        dydx[2] = phidot;
    };
}

OdeRhs make_cartesian_system(EvaderPath path, double n) {
    return [path = std::move(path), n](double t, std::span<const double> y,
                                       std::span<double> dydx) {
        const EvaderSample e = path(t);
        const Vec2 v = cartesian_rhs({e.position, {y[0], y[1]}}, e.velocity, n);
        dydx[0] = v.x;
        dydx[1] = v.y;
    };
}

OdeRhs make_cartesian_unit_speed_system(const EllipseGeometry& g, double n) {
    return [g, n](double, std::span<const double> y, std::span<double> dydx) {
        const double phi = y[2];
        const Vec2 v = cartesian_rhs({evader_position(g, phi), {y[0], y[1]}},
                                     evader_velocity(phi), n);
        dydx[0] = v.x;
        dydx[1] = v.y;
        dydx[2] = angular_rate(g, phi);
    };
}

EvaderPath ellipse_path_standard(const EllipseGeometry& g) {
    return [g](double u) -> EvaderSample {
        return {{g.a * std::cos(u), g.b * std::sin(u)},
                {-g.a * std::sin(u), g.b * std::cos(u)}};
    };
}

EvaderPath reparametrize(EvaderPath base, std::function<double(double)> map,
                         std::function<double(double)> rate) {
    return [base = std::move(base), map = std::move(map),
            rate = std::move(rate)](double s) -> EvaderSample {
        const EvaderSample e = base(map(s));
        return {e.position, rate(s) * e.velocity};
    };
}

}  // namespace pursuit
