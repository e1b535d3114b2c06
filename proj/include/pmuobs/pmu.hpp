#pragma once

#include <Eigen/Dense>

#include "pmuobs/machine.hpp"

namespace pmuobs {

// One synchronized measurement frame at the machine terminal:
// (voltage phase, voltage magnitude, current phase, current magnitude,
//  active power, reactive power).
struct PmuSample {
    double y1 = 0.0;  // theta_t, rad
    double y2 = 0.0;  // V_t, pu (> 0)
    double y3 = 0.0;  // phi_t, rad
    double y4 = 0.0;  // I_t, pu (>= 0)
    double y5 = 0.0;  // P_t, pu
    double y6 = 0.0;  // Q_t, pu
};

// Measurable signals entering the observer construction. Y1 equals
// x3^2 + x4^2; (Y2, Y3) is the rotation of (x3, x4) by the machine angle.
struct DerivedSignals {
    double z0 = 0.0;  // y6 + y2^2/xqp
    double Y1 = 0.0;  // pu^2, strictly positive
    double Y2 = 0.0;
    double Y3 = 0.0;
};

// Time-varying matrix driving the internal-voltage subsystem,
// d/dt [x3; x4] = A [x3; x4] + [0; c1 u2], built from measured signals only.
using MeasMatrix = Eigen::Matrix2d;

// Certificate data for the non-injectivity of the state-to-output map: the
// analytic Jacobian of n_map at v, the null vector (1, -v3, v2), and the
// residual ||jacobian * null_vector||_inf (zero in exact arithmetic).
struct NonInjectivityCertificate {
    Eigen::Matrix3d jacobian;
    Eigen::Vector3d null_vector;
    double residual = 0.0;
};

// Evaluates the measurement map at a plant state under bus phasor (y1, y2).
// y4 is the nonnegative root; radicands in [-1e-12, 0) are clamped to zero,
// anything more negative throws InconsistentState. y3 is synthesized as the
// phase of the terminal-current phasor (no downstream consumer).
PmuSample measure(const PlantState& x, double y1, double y2, double x_qp);

// Direct- and quadrature-axis currents; Id^2 + Iq^2 equals y4^2.
std::pair<double, double> dq_currents(const PlantState& x, double y1, double y2,
                                      double x_dp, double x_qp);

// Forms (z0, Y1, Y2, Y3) from one PMU sample. Throws ObservabilityLoss when
// Y1 falls at or below the 1e-9 gate.
DerivedSignals derived_signals(const PmuSample& s, double x_qp);

// Assembles the measured dynamics matrix. Throws ObservabilityLoss on a
// gated Y1.
MeasMatrix meas_matrix(const DerivedSignals& d, const PmuSample& s,
                       const DerivedCoefficients& c, double x_qp);

// The reduced output map whose Jacobian carries the non-injectivity argument:
// v -> (-2 y2 (v2 cos v1 + v3 sin v1), v2 sin v1 - v3 cos v1,
//       v2 cos v1 + v3 sin v1).
Eigen::Vector3d n_map(const Eigen::Vector3d& v, double y2);

// Analytic Jacobian of n_map with its null vector and residual.
NonInjectivityCertificate noninjectivity_certificate(const Eigen::Vector3d& v,
                                                     double y2);

}  // namespace pmuobs
