#pragma once
#include <complex>
#include <optional>
#include <vector>

#include "pursuit/dynamics.hpp"
#include "pursuit/integrate.hpp"

namespace pursuit {

struct Mat2 {
    double m00, m01, m10, m11;
};

enum class EquilibriumClass { StableSpiral, StableNode, Degenerate };

struct EquilibriumReport {
    double rho_star;
    double zeta_star;
    Mat2 jacobian;
    Complex lambda_plus;
    Complex lambda_minus;
    EquilibriumClass classification;
};

/// Equilibrium (rho*, zeta*) = (a sqrt(1-n^2), arccos n) of the circular
/// time-parameterized system; requires 0 < n <= 1 (NoEquilibriumError for
/// n > 1, where rho decreases for all t).
struct Equilibrium {
    double rho_star;
    double zeta_star;
};
Equilibrium equilibrium_circular(double a, double n);

struct CircularSpectrum {
    Mat2 jacobian;
    Complex lambda_plus;
    Complex lambda_minus;
    EquilibriumClass classification;
};

/// Jacobian of the circular system at the equilibrium and its closed-form
/// eigenvalues lambda_pm = (-n +- sqrt(5 n^2 - 4)) / (2 a sqrt(1 - n^2)).
/// Requires 0 < n < 1 (InvalidRegimeError otherwise).
CircularSpectrum jacobian_circular(double a, double n);

/// Bundles equilibrium and spectrum for reporting; 0 < n < 1.
EquilibriumReport equilibrium_report(double a, double n);

/// Upper bound on the blow-up value of phi for n > 1:
///   phi_B <= phi0 + e^{mu0} / (f_min (n-1)) with f_min = b/a^2.
/// InvalidRegimeError when n <= 1.
double blowup_upper_bound(const EllipseGeometry& g, double n, double mu0,
                          double phi0);

/// Lower bound on the blow-up span phi_B - phi0:
///   phi_B - phi0 >= e^{mu0} / (f_max (n+1)) = e^{mu0} b^2 / (a (n+1)).
double blowup_lower_bound(const EllipseGeometry& g, double n, double mu0);

struct CaptureReport {
    double phi0;
    double mu0;
    bool captured = false;
    double s_crossing = 0.0;       ///< mu = mu_min crossing (when captured)
    double phi_B_measured = 0.0;   ///< extrapolated blow-up value of phi
    double lower_bound = 0.0;      ///< bound on the span phi_B - phi0
    std::optional<double> upper_bound;  ///< absolute phi bound, n > 1 only
};

/// Integrates the log-polar system over [phi0, phi0 + span] with capture
/// monitoring and assembles the measured value plus both bounds.
CaptureReport measure_capture(const EllipseGeometry& g, double n, double mu0,
                              double zeta0, double phi0, double span,
                              const IntegratorConfig& cfg);

/// One application of the Poincare (period-pi flow) map of the complex
/// system: integrates dz/dphi over [phi0, phi0 + pi]. Raises
/// InvalidRegimeError if the trajectory collapses below e^{mu_min}.
Complex poincare_map(Complex z0, double phi0, const EllipseGeometry& g,
                     double n, const IntegratorConfig& cfg);

struct PoincareResult {
    Complex fixed_point;
    std::vector<Complex> iterates;  ///< z0, P(z0), P^2(z0), ...
    double residual;                ///< |P(z*) - z*|
    std::size_t iterations;
};

/// Fixed-point iteration of the Poincare map (globally convergent for
/// 0 < n < 1). Throws MaxItersExceededError with the last residual when the
/// iteration cap is hit.
PoincareResult find_periodic_orbit(const EllipseGeometry& g, double n,
                                   double phi0, Complex seed,
                                   const IntegratorConfig& cfg,
                                   double tol = 1e-10, int max_iters = 200);

struct PeriodicOrbit {
    PoincareResult result;
    Trajectory period;  ///< converged orbit over [phi0, phi0 + pi]
    double rho_min;
    double rho_max;
};

/// find_periodic_orbit plus one densely sampled period of the limit orbit.
PeriodicOrbit solve_periodic_orbit(const EllipseGeometry& g, double n,
                                   double phi0, Complex seed,
                                   const IntegratorConfig& cfg,
                                   double tol = 1e-10, int max_iters = 200);

/// Squared distance L = |z1 - z2|^2 between two solutions.
double distance_functional(Complex z1, Complex z2);

/// Closed-form slope along the flow,
///   dL/dphi = -(2n / f(phi)) (rho1 + rho2) (1 - cos(zeta1 - zeta2)) <= 0.
double distance_slope(Complex z1, Complex z2, double phi,
                      const EllipseGeometry& g, double n);

/// Squared period-shift D(phi) = |z(phi + pi) - z(phi)|^2 on a trajectory of
/// the complex system (components Re z, Im z).
double period_shift(const Trajectory& ztraj, double phi);

struct AnnulusBounds {
    double R0;       ///< max(|pursuer start|, a)
    double N_prime;  ///< a + R0, trap radius for rho = |z|
    std::optional<double> r_measured;  ///< empirical min rho of a limit orbit
};

AnnulusBounds annulus_bounds(Vec2 pursuer_start, const EllipseGeometry& g);

/// Orientation-preserving parameter substitution u = map(s) with
/// rate = du/ds > 0 on [s0, s1].
struct Reparametrization {
    std::function<double(double)> map;
    std::function<double(double)> rate;
    double s0;
    double s1;
};

/// Integrates the pursuer against the standard ellipse path E(t) over
/// [t0, t1] and against the reparameterized path over [s0, s1], then
/// compares pursuer positions at matched evader positions. Returns the
/// maximum pointwise deviation.
double compare_parametrizations(const EllipseGeometry& g, double n,
                                Vec2 pursuer_start, double t0, double t1,
                                const Reparametrization& reparam,
                                const IntegratorConfig& cfg,
                                int samples = 200);

}  // namespace pursuit
