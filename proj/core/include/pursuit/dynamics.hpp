#pragma once
#include <complex>
#include <functional>
#include <span>

#include "pursuit/geometry.hpp"
#include "pursuit/vec2.hpp"

namespace pursuit {

using Complex = std::complex<double>;

/// Positions of both players in the plane.
struct CartesianPair {
    Vec2 evader;
    Vec2 pursuer;

    double separation() const { return norm(evader - pursuer); }
};

/// Reduced state: separation distance rho and angular difference
/// zeta = phi - theta between the players' velocity directions.
/// Angles are stored unwrapped; reduction mod 2pi happens only inside trig.
struct PolarState {
    double rho;
    double zeta;
};

/// Log-separation variant: mu = log rho. Capture corresponds to
/// mu -> -infinity, so the vector field stays finite at small separation.
struct LogPolarState {
    double mu;
    double zeta;
};

struct PolarRate {
    double drho;
    double dzeta;
};

struct LogPolarRate {
    double dmu;
    double dzeta;
};

/// Evader sample for pursuer integration in cartesian coordinates.
struct EvaderSample {
    Vec2 position;
    Vec2 velocity;
};

using EvaderPath = std::function<EvaderSample(double t)>;

/// lambda(t) = rho / n, the ratio of separation to pursuer speed.
double lambda_of(double rho, double n);

/// Pure-pursuit velocity: parallel to evader - pursuer, magnitude
/// n * |evader velocity|. Throws ZeroSeparationError at zero separation.
Vec2 cartesian_rhs(const CartesianPair& p, const Vec2& evader_vel, double n);

/// Circular evader of radius a, time-parameterized:
///   drho/dt  = cos zeta - n
///   dzeta/dt = -sin(zeta)/rho + 1/a
PolarRate circular_rhs_t(const PolarState& s, double a, double n);

/// Same system parameterized by phi (dt/dphi = a):
///   rho'  = a (cos zeta - n)
///   zeta' = 1 - a sin(zeta)/rho
PolarRate circular_rhs_phi(const PolarState& s, double a, double n);

/// Elliptical evader, phi-parameterized:
///   rho'  = (cos zeta - n) / f(phi)
///   zeta' = 1 - sin(zeta) / (rho f(phi))
PolarRate elliptical_rhs_phi(const PolarState& s, double phi,
                             const EllipseGeometry& g, double n);

/// Log-polar form in time, for a prescribed angular rate phidot:
///   dmu/dt   = e^{-mu} (cos zeta - n)
///   dzeta/dt = -e^{-mu} sin zeta + phidot
LogPolarRate logpolar_rhs_t(const LogPolarState& s, double phidot, double n);

/// Log-polar form in phi:
///   mu'   = e^{-mu} (cos zeta - n) / f(phi)
///   zeta' = 1 - e^{-mu} sin(zeta) / f(phi)
LogPolarRate logpolar_rhs_phi(const LogPolarState& s, double phi,
                              const EllipseGeometry& g, double n);

/// Complex form for z = e^{mu + i zeta}:
///   dz/dphi = 1/f(phi) - (n/f(phi)) z/|z| + i z
Complex complex_rhs_phi(Complex z, double phi, const EllipseGeometry& g,
                        double n);

Complex to_complex(const LogPolarState& s);

/// Inverse of to_complex with zeta on the principal branch (-pi, pi].
LogPolarState from_complex(Complex z);

/// Inverse of to_complex with zeta rewound to the branch nearest zeta_ref.
LogPolarState from_complex(Complex z, double zeta_ref);

LogPolarState to_logpolar(const PolarState& s);
PolarState to_polar(const LogPolarState& s);

/// angle + 2 pi k with the result within pi of ref.
double wind_to_reference(double angle, double ref);

/// Pursuer position from the reduced state on the ellipse:
///   P = E(phi) - rho (cos(phi - zeta), sin(phi - zeta)).
Vec2 reconstruct_pursuer(const PolarState& s, double phi,
                         const EllipseGeometry& g);

/// Circular version with the unit-speed convention phi = t/a + pi/2,
/// evader at (a cos(t/a), a sin(t/a)).
Vec2 reconstruct_pursuer_circular(const PolarState& s, double t, double a);

/// Inverse of reconstruct_pursuer: recovers (rho, zeta) from positions,
/// with zeta reported on the branch nearest zeta_ref.
PolarState cartesian_to_reduced(const CartesianPair& p, double phi,
                                double zeta_ref);

// -- state-vector adapters for the integrator ------------------------------

using OdeRhs =
    std::function<void(double, std::span<const double>, std::span<double>)>;

OdeRhs make_logpolar_phi_system(const EllipseGeometry& g, double n);  // (mu, zeta)
OdeRhs make_polar_phi_system(const EllipseGeometry& g, double n);     // (rho, zeta)
OdeRhs make_complex_phi_system(const EllipseGeometry& g, double n);   // (Re z, Im z)

/// Time-parameterized reduced system (rho, zeta, phi) with phi' = f(phi).
OdeRhs make_polar_t_system(const EllipseGeometry& g, double n);

/// Pursuer (x, y) chasing an arbitrary evader path.
OdeRhs make_cartesian_system(EvaderPath path, double n);

/// Pursuer (x, y, phi) chasing the unit-speed ellipse evader; phi' = f(phi).
OdeRhs make_cartesian_unit_speed_system(const EllipseGeometry& g, double n);

/// Standard (non-unit-speed) ellipse path E(u) = (a cos u, b sin u).
EvaderPath ellipse_path_standard(const EllipseGeometry& g);

/// Path traversed with the substituted parameter: E(map(s)), velocity scaled
/// by rate(s) = d map/ds > 0.
EvaderPath reparametrize(EvaderPath base, std::function<double(double)> map,
                         std::function<double(double)> rate);

}  // namespace pursuit
