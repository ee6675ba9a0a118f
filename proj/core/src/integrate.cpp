#include "pursuit/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pursuit/errors.hpp"

namespace pursuit {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                 c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// 5th-minus-4th order error weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

bool all_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

std::vector<double> eval_interval(const Trajectory::Interval& iv, double s) {
    const double theta = (s - iv.s0) / iv.h;
    const double theta1 = 1.0 - theta;
    const std::size_t n = iv.rcont[0].size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = iv.rcont[0][i] +
               theta * (iv.rcont[1][i] +
                        theta1 * (iv.rcont[2][i] +
                                  theta * (iv.rcont[3][i] +
                                           theta1 * iv.rcont[4][i])));
    }
    return y;
}

}  // namespace

void Trajectory::start(double s0, std::vector<double> y0) {
    dim_ = y0.size();
    s_ = {s0};
    y_ = {std::move(y0)};
    intervals_.clear();
}

void Trajectory::push_step(double s1, std::vector<double> y1,
                           Interval interval) {
    s_.push_back(s1);
    y_.push_back(std::move(y1));
    intervals_.push_back(std::move(interval));
}

void Trajectory::truncate_last(double s_new, std::vector<double> y_new) {
    s_.back() = s_new;
    y_.back() = std::move(y_new);
}

std::vector<double> Trajectory::eval(double s) const {
    const double lo = s_.front(), hi = s_.back();
    const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (s < lo - slack || s > hi + slack) {
        throw OutOfSpanError("dense evaluation outside trajectory span");
    }
    s = std::clamp(s, lo, hi);
    if (intervals_.empty()) {
        return y_.front();
    }
    // Exact at stored nodes.
    auto it = std::lower_bound(s_.begin(), s_.end(), s);
    if (it != s_.end() && *it == s) {
        return y_[static_cast<std::size_t>(it - s_.begin())];
    }
    std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(s_.begin(), s_.end(), s) - s_.begin());
    idx = std::min(std::max<std::size_t>(idx, 1) - 1, intervals_.size() - 1);
    return eval_interval(intervals_[idx], s);
}

namespace {

double error_norm(const std::vector<double>& y0, const std::vector<double>& y1,
                  const std::vector<double>& err, double atol, double rtol) {
    double sum = 0.0;
    for (std::size_t i = 0; i < y0.size(); ++i) {
        const double sc =
            atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = err[i] / sc;
        sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(y0.size()));
}

// Classical two-probe starting-step heuristic.
double initial_step(const OdeRhs& rhs, double s0, const std::vector<double>& y0,
                    const std::vector<double>& f0, double span, double atol,
                    double rtol) {
    const std::size_t n = y0.size();
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::abs(y0[i]);
        d0 += (y0[i] / sc) * (y0[i] / sc);
        d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    d1 = std::sqrt(d1 / static_cast<double>(n));
    double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);

    std::vector<double> y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h0 * f0[i];
    rhs(s0 + h0, y1, f1);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::abs(y0[i]);
        const double q = (f1[i] - f0[i]) / sc;
        d2 += q * q;
    }
    d2 = std::sqrt(d2 / static_cast<double>(n)) / h0;

    const double dm = std::max(d1, d2);
    const double h1 =
        (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, span});
}

}  // namespace

IntegrationResult integrate(const OdeRhs& rhs, std::span<const double> y0in,
                            double s0, double s1, const IntegratorConfig& cfg,
                            std::optional<std::size_t> capture_component) {
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || !(cfg.event_tol > 0.0)) {
        throw ConfigError("integrator tolerances must be positive");
    }
    if (!(cfg.mu_min < 0.0)) {
        throw ConfigError("mu_min must be negative");
    }
    if (!(s1 > s0)) {
        throw ConfigError("integration span must satisfy s1 > s0");
    }

    const std::size_t n = y0in.size();
    std::vector<double> y(y0in.begin(), y0in.end());

    IntegrationResult res;
    res.trajectory.start(s0, y);

    auto fail = [&](std::string why, double s) {
        res.outcome.status = RunStatus::Failed;
        res.outcome.diagnostic = std::move(why);
        res.outcome.s_final = s;
        res.outcome.final_state = y;
        return res;
    };

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n), errv(n);

    double s = s0;
    try {
        rhs(s, y, k1);
    } catch (const Error& e) {
        return fail(std::string("rhs singular at start: ") + e.what(), s);
    }
    if (!all_finite(k1)) {
        return fail("rhs not finite at start", s);
    }

    const double span = s1 - s0;
    const double hmax = cfg.max_step > 0.0 ? std::min(cfg.max_step, span) : span;
    double h = cfg.init_step > 0.0
                   ? std::min(cfg.init_step, hmax)
                   : std::min(initial_step(rhs, s, y, k1, span, cfg.abs_tol,
                                           cfg.rel_tol),
                              hmax);

    // PI controller state (Hairer's dopri5 defaults).
    const double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
    const double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
    double facold = 1e-4;
    bool rejected = false;

    for (std::size_t step = 0; step < cfg.max_steps; ++step) {
        if (s >= s1) break;
        h = std::min(h, s1 - s);
        if (h <= std::abs(s) * std::numeric_limits<double>::epsilon() * 16.0 ||
            h < std::numeric_limits<double>::min() * 1e4) {
            return fail("step size underflow", s);
        }

        bool stage_error = false;
        std::string stage_diag;
        try {
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + h * a21 * k1[i];
            rhs(s + c2 * h, ytmp, k2);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            rhs(s + c3 * h, ytmp, k3);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            rhs(s + c4 * h, ytmp, k4);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                      a54 * k4[i]);
            rhs(s + c5 * h, ytmp, k5);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                      a64 * k4[i] + a65 * k5[i]);
            rhs(s + h, ytmp, k6);
            for (std::size_t i = 0; i < n; ++i)
                ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                      b5 * k5[i] + b6 * k6[i]);
            rhs(s + h, ynew, k7);
        } catch (const Error& e) {
            stage_error = true;
            stage_diag = e.what();
        }

        double err = 2.0;
        if (!stage_error && all_finite(ynew) && all_finite(k7)) {
            for (std::size_t i = 0; i < n; ++i) {
                errv[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                               e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            }
            err = error_norm(y, ynew, errv, cfg.abs_tol, cfg.rel_tol);
            if (!std::isfinite(err)) err = 2.0;
        }

        if (err <= 1.0) {
            // Accept: store the dense interpolant for [s, s+h].
            Trajectory::Interval iv;
            iv.s0 = s;
            iv.h = h;
            for (auto& r : iv.rcont) r.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                iv.rcont[0][i] = y[i];
                iv.rcont[1][i] = ydiff;
                iv.rcont[2][i] = bspl;
                iv.rcont[3][i] = ydiff - h * k7[i] - bspl;
                iv.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                      d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            const double s_next = s + h;
            res.trajectory.push_step(s_next, ynew, std::move(iv));

            if (capture_component && y[*capture_component] > cfg.mu_min &&
                ynew[*capture_component] <= cfg.mu_min) {
                const double sB = locate_capture(
                    res.trajectory, *capture_component, cfg.mu_min,
                    cfg.event_tol);
                const double phiB =
                    extrapolate_blowup(res.trajectory, *capture_component, sB);
                std::vector<double> yB = res.trajectory.eval(sB);
                res.trajectory.truncate_last(sB, yB);
                res.outcome.status = RunStatus::Captured;
                res.outcome.s_final = sB;
                res.outcome.final_state = std::move(yB);
                res.outcome.capture = CaptureInfo{sB, phiB};
                return res;
            }

            s = s_next;
            y = ynew;
            k1 = k7;  // FSAL

            facold = std::max(err, 1e-4);
            double fac = std::pow(err, expo1) / std::pow(facold, beta);
            fac = std::max(facc2, std::min(facc1, fac / safe));
            double hnew = h / fac;
            if (rejected) hnew = std::min(hnew, h);
            rejected = false;
            h = std::min(hnew, hmax);
        } else {
            if (stage_error && h <= 1e-12 * std::max(1.0, std::abs(s))) {
                return fail("rhs singularity: " + stage_diag, s);
            }
            rejected = true;
            if (stage_error) {
                h *= 0.1;
            } else {
                const double fac =
                    std::min(facc1, std::pow(err, expo1) / safe);
                h /= fac;
            }
        }
    }

    if (s < s1) {
        return fail("maximum step count exceeded", s);
    }
    res.outcome.status = RunStatus::Completed;
    res.outcome.s_final = s;
    res.outcome.final_state = y;
    return res;
}

double locate_capture(const Trajectory& traj, std::size_t comp, double level,
                      double event_tol) {
    const auto& nodes = traj.nodes();
    std::size_t idx = nodes.size();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (traj.state(i)[comp] > level && traj.state(i + 1)[comp] <= level) {
            idx = i;
            break;
        }
    }
    if (idx == nodes.size()) {
        throw Error("locate_capture: no bracketing node pair");
    }
    double lo = nodes[idx], hi = nodes[idx + 1];
    for (int it = 0; it < 200 && (hi - lo) > event_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (traj.eval(mid)[comp] > level) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

double extrapolate_blowup(const Trajectory& traj, std::size_t comp,
                          double s_event) {
    // Trailing nodes strictly before the event, plus the event point.
    const auto& nodes = traj.nodes();
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = nodes.size(); i-- > 0;) {
        if (nodes[i] < s_event) {
            pts.emplace_back(nodes[i] - s_event,
                             std::exp(traj.state(i)[comp]));
            if (pts.size() >= 6) break;
        }
    }
    pts.emplace_back(0.0, std::exp(traj.eval(s_event)[comp]));
    if (pts.size() < 2) return s_event;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, yv] : pts) {
        sx += x;
        sy += yv;
        sxx += x * x;
        sxy += x * yv;
    }
    const double m = static_cast<double>(pts.size());
    const double det = m * sxx - sx * sx;
    if (det == 0.0) return s_event;
    const double slope = (m * sxy - sx * sy) / det;
    const double icept = (sy * sxx - sx * sxy) / det;
    if (!(slope < 0.0) || !std::isfinite(slope) || !std::isfinite(icept)) {
        return s_event;
    }
    return s_event - icept / slope;
}

}  // namespace pursuit
