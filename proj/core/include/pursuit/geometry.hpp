#pragma once
#include "pursuit/vec2.hpp"

namespace pursuit {

/// Evader ellipse X^2/a^2 + Y^2/b^2 = 1, traversed counterclockwise at unit
/// speed and parameterized by the tangent (velocity) angle phi.
struct EllipseGeometry {
    double a = 1.0;  ///< semi-major axis, a >= b
    double b = 1.0;  ///< semi-minor axis, b > 0

    bool valid() const { return b > 0.0 && a >= b; }
    bool circular() const { return a == b; }
};

/// Validating factory; rejects a < b and non-positive axes.
EllipseGeometry make_ellipse(double a, double b);

/// Angular rate f(phi) = dphi/dt of the unit-speed evader,
/// f(phi) = (a^2 sin^2 phi + b^2 cos^2 phi)^(3/2) / (a^2 b^2).
/// Strictly positive and pi-periodic.
double angular_rate(const EllipseGeometry& g, double phi);

struct RateBounds {
    double f_min;  ///< b / a^2, attained at phi = 0 mod pi
    double f_max;  ///< a / b^2, attained at phi = pi/2 mod pi
};

RateBounds rate_bounds(const EllipseGeometry& g);

/// Evader position as a function of its velocity angle.
Vec2 evader_position(const EllipseGeometry& g, double phi);

/// Unit evader velocity (cos phi, sin phi).
Vec2 evader_velocity(double phi);

/// Elapsed unit-speed time t = integral of dphi / f(phi) over [phi0, phi1].
/// Adaptive Simpson quadrature; additive over concatenated intervals.
double t_of_phi(const EllipseGeometry& g, double phi0, double phi1,
                double abs_tol = 1e-10);

}  // namespace pursuit
