#pragma once

#include <limits>
#include <string>
#include <vector>

#include "pmuobs/scenario.hpp"

namespace pmuobs {

// Outcome of one named structural check evaluated over a whole trajectory.
// Checks against a fixed absolute tolerance report `worst` as the largest
// observed deviation; scale-aware checks report `worst` as the largest
// deviation-to-allowance ratio with `tolerance` = 1.
struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;
    double tolerance = 0.0;
};

// Convergence summary for one observer on one run. `convergence_time` is the
// start of the first window of length `RunReport::hold` on which the
// observer's error norm stays below `RunReport::threshold`; infinity when no
// such window fits inside the horizon.
struct ObserverReport {
    std::string observer;  // "drem", "overparam", or "gradient"
    double gain = 0.0;
    bool converged = false;
    double convergence_time = std::numeric_limits<double>::infinity();
    double terminal_error = 0.0;  // error norm at the final grid point
};

struct RunReport {
    std::string name;
    double horizon = 0.0;
    double threshold = 1e-3;  // convergence error-norm threshold
    double hold = 0.5;        // seconds the norm must stay below threshold

    std::vector<ObserverReport> observers;

    // Excitation diagnostics; NaN when the run had no mixing estimator.
    double int_delta_sq = std::numeric_limits<double>::quiet_NaN();
    double min_abs_delta = std::numeric_limits<double>::quiet_NaN();
    double max_cond_phi = std::numeric_limits<double>::quiet_NaN();

    std::vector<CheckResult> checks;

    bool all_checks_passed() const;
    const ObserverReport* find_observer(const std::string& name) const;
};

// Evaluates every structural check applicable to the trajectory's enabled
// blocks and summarizes observer convergence. Deterministic.
RunReport build_report(const Trajectory& traj, const std::string& name = "run");

// Cumulative integral of regularly sampled f using quadratic three-point
// panels (fourth-order local truncation); out[k] approximates the integral
// up to sample k. Falls back to the trapezoid rule below 3 samples.
std::vector<double> cumulative_integral(const std::vector<double>& f, double h);

// JSON round-trip. Non-finite numbers are stored as null and read back as
// quiet NaN (infinity only arises in convergence_time, carried by the
// `converged` flag instead). Serialization is byte-deterministic.
std::string report_to_json(const RunReport& r);
RunReport report_from_json(const std::string& text);

// Fixed-width text table of convergence times and terminal errors, one row
// per observer per report, followed by notes flagging non-converged
// consistency-error baselines and the estimator-vs-state-observer speed
// ordering. Requires at least one report.
std::string compare_report(const std::vector<RunReport>& reports);

}  // namespace pmuobs
