#pragma once
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pursuit/dynamics.hpp"

namespace pursuit {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;     ///< 0 means no explicit bound beyond the span
    double mu_min = -20.0;     ///< capture threshold on the monitored component
    double event_tol = 1e-10;  ///< independent-variable tolerance for events
    double init_step = 0.0;    ///< 0 means choose automatically
    std::size_t max_steps = 2000000;
};

/// Accepted-step record of an adaptive run with a per-interval quartic
/// interpolant (the standard order-4 dense output of the 5(4) pair).
class Trajectory {
public:
    struct Interval {
        double s0;  ///< left node
        double h;   ///< step length used to build the interpolant
        std::array<std::vector<double>, 5> rcont;
    };

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return s_.size(); }
    const std::vector<double>& nodes() const { return s_; }
    const std::vector<double>& state(std::size_t i) const { return y_[i]; }
    double front() const { return s_.front(); }
    double back() const { return s_.back(); }

    /// Dense evaluation; exact at nodes. Throws OutOfSpanError outside
    /// [front(), back()] (up to round-off slack).
    std::vector<double> eval(double s) const;

    // Construction interface used by integrate().
    void start(double s0, std::vector<double> y0);
    void push_step(double s1, std::vector<double> y1, Interval interval);
    void truncate_last(double s_new, std::vector<double> y_new);

private:
    std::size_t dim_ = 0;
    std::vector<double> s_;
    std::vector<std::vector<double>> y_;
    std::vector<Interval> intervals_;
};

enum class RunStatus { Completed, Captured, Failed };

struct CaptureInfo {
    double s_crossing;   ///< where the monitored component reached mu_min
    double phi_blowup;   ///< linear extrapolation of e^mu to zero
};

struct Outcome {
    RunStatus status = RunStatus::Completed;
    double s_final = 0.0;
    std::vector<double> final_state;
    std::optional<CaptureInfo> capture;
    std::string diagnostic;  ///< non-empty only when status == Failed
};

struct IntegrationResult {
    Trajectory trajectory;
    Outcome outcome;
};

/// Adaptive explicit Runge-Kutta 5(4) (Dormand-Prince) with PI step-size
/// control and dense output. When capture_component is given, the run
/// terminates at the first crossing of y[capture_component] below
/// cfg.mu_min, localized on the dense output to cfg.event_tol.
IntegrationResult integrate(const OdeRhs& rhs, std::span<const double> y0,
                            double s0, double s1, const IntegratorConfig& cfg,
                            std::optional<std::size_t> capture_component = {});

/// Bisection of the first crossing of component comp below level on the
/// dense output. Requires that a node pair brackets the crossing.
double locate_capture(const Trajectory& traj, std::size_t comp, double level,
                      double event_tol);

/// Least-squares linear extrapolation of exp(y[comp]) to zero over the
/// trailing accepted nodes before s_event (plus the event point itself).
/// Returns s_event when the fit is unusable.
double extrapolate_blowup(const Trajectory& traj, std::size_t comp,
                          double s_event);

}  // namespace pursuit
