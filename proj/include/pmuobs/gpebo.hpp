#pragma once

#include <Eigen/Dense>

#include "pmuobs/pmu.hpp"

namespace pmuobs {

// Dynamic extension (xi, Phi): a copy of the internal-voltage dynamics from
// zero initial state plus the transition matrix of the homogeneous part.
// Along a trajectory, [x3; x4] = xi + Phi * theta with theta the initial
// condition of the error system, so state observation reduces to estimating
// the constant theta.
struct ExtensionState {
    Eigen::Vector2d xi = Eigen::Vector2d::Zero();
    Eigen::Matrix2d phi = Eigen::Matrix2d::Identity();
};

// One sample of the nonlinear regression yE = psi . Theta(theta), where
// Theta(theta) = (theta1, theta2, theta1*theta2, theta1^2, theta2^2).
struct RegressorSample {
    double yE = 0.0;
    Eigen::Matrix<double, 5, 1> psi = Eigen::Matrix<double, 5, 1>::Zero();
};

struct ThetaEstimate {
    Eigen::Vector2d theta_hat = Eigen::Vector2d::Zero();
};

enum class AngleMode {
    Arcsin,  // principal-branch arcsin of (x3h*Y3 - x4h*Y2)/Y1
    Atan2,   // atan2(x3h*Y3 - x4h*Y2, x3h*Y2 + x4h*Y3), valid on all of S^1
};

struct Reconstruction {
    double x1_hat = 0.0;
    double x3_hat = 0.0;
    double x4_hat = 0.0;
};

// Derivative of the extension: (A xi + [0; c1 u2], A Phi).
ExtensionState extension_rhs(const ExtensionState& e, const MeasMatrix& A,
                             double u2, double c1);

// Builds the regressor sample from the extension and the measured Y1:
// yE = Y1 - |xi|^2 and psi per the quadratic expansion of |xi + Phi theta|^2.
RegressorSample build_regressor(const ExtensionState& e, double Y1);

// Reconstructs (x1, x3, x4) from the extension and a theta estimate.
// (x3h, x4h) = xi + Phi theta_hat; the angle comes from the rotation
// identities. In Arcsin mode an argument beyond 1 + 1e-9 in magnitude throws
// ReconstructionDomain; within the slack it is clamped to [-1, 1].
Reconstruction reconstruct_states(const ExtensionState& e, const ThetaEstimate& th,
                                  const DerivedSignals& d,
                                  AngleMode mode = AngleMode::Arcsin);

}  // namespace pmuobs
