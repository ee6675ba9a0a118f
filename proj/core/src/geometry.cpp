#include "pursuit/geometry.hpp"

#include <cmath>
#include <string>

#include "pursuit/errors.hpp"

namespace pursuit {

EllipseGeometry make_ellipse(double a, double b) {
    EllipseGeometry g{a, b};
    if (!std::isfinite(a) || !std::isfinite(b) || !g.valid()) {
        throw ConfigError("ellipse requires a >= b > 0, got a=" +
                          std::to_string(a) + " b=" + std::to_string(b));
    }
    return g;
}

double angular_rate(const EllipseGeometry& g, double phi) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    const double q = g.a * g.a * s * s + g.b * g.b * c * c;
    return q * std::sqrt(q) / (g.a * g.a * g.b * g.b);
}

RateBounds rate_bounds(const EllipseGeometry& g) {
    return {g.b / (g.a * g.a), g.a / (g.b * g.b)};
}

Vec2 evader_position(const EllipseGeometry& g, double phi) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    const double r = std::sqrt(g.a * g.a * s * s + g.b * g.b * c * c);
    return {g.a * g.a * s / r, -g.b * g.b * c / r};
}

Vec2 evader_velocity(double phi) { return {std::cos(phi), std::sin(phi)}; }

namespace {

double simpson(const EllipseGeometry& g, double lo, double hi, double flo,
               double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

// Adaptive Simpson with the classic whole-vs-halves error estimate.
double adaptive_panel(const EllipseGeometry& g, double lo, double hi,
                      double flo, double fmid, double fhi, double whole,
                      double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double fq1 = 1.0 / angular_rate(g, 0.5 * (lo + mid));
    const double fq3 = 1.0 / angular_rate(g, 0.5 * (mid + hi));
    const double left = simpson(g, lo, mid, flo, fq1, fmid);
    const double right = simpson(g, mid, hi, fmid, fq3, fhi);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    return adaptive_panel(g, lo, mid, flo, fq1, fmid, left, 0.5 * tol,
                          depth - 1) +
           adaptive_panel(g, mid, hi, fmid, fq3, fhi, right, 0.5 * tol,
                          depth - 1);
}

}  // namespace

double t_of_phi(const EllipseGeometry& g, double phi0, double phi1,
                double abs_tol) {
    if (phi1 < phi0) {
        throw Error("t_of_phi requires phi1 >= phi0");
    }
    if (phi1 == phi0) {
        return 0.0;
    }
    // Split into half-period panels so the adaptive refinement never has to
    // straddle more than one oscillation of f.
    const double half_pi = 1.5707963267948966;
    double total = 0.0;
    double lo = phi0;
    while (lo < phi1) {
        const double hi = std::min(phi1, lo + half_pi);
        const double mid = 0.5 * (lo + hi);
        const double flo = 1.0 / angular_rate(g, lo);
        const double fmid = 1.0 / angular_rate(g, mid);
        const double fhi = 1.0 / angular_rate(g, hi);
        const double whole = simpson(g, lo, hi, flo, fmid, fhi);
        total += adaptive_panel(g, lo, hi, flo, fmid, fhi, whole,
                                abs_tol * (hi - lo) / (phi1 - phi0), 48);
        lo = hi;
    }
    return total;
}

}  // namespace pursuit
