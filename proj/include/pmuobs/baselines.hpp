#pragma once

#include <Eigen/Dense>

#include "pmuobs/cofactor.hpp"
#include "pmuobs/gpebo.hpp"

namespace pmuobs {

// Gradient estimator over the overparameterized vector
// Theta = (theta1, theta2, theta1*theta2, theta1^2, theta2^2) treated as five
// independent unknowns.
struct OverparamEstimator {
    Vector5d Theta_hat = Vector5d::Zero();
    Matrix5d Gamma = Matrix5d::Identity();  // symmetric positive definite
};

// Gradient-descent observer on the measured circle |x34|^2 = Y1, combined
// with a copy of the internal-voltage dynamics.
struct GradObserverState {
    Eigen::Vector2d x34_hat = Eigen::Vector2d::Zero();
    Eigen::Matrix2d Gamma2 = Eigen::Matrix2d::Identity();  // SPD
};

// d/dt Theta_hat = -Gamma psi (psi . Theta_hat - yE).
Vector5d overparam_update(const OverparamEstimator& o, const RegressorSample& r);

// Exact step of the same ODE with the regressor frozen over [t, t+h]:
// the misfit s = psi . Theta_hat - yE obeys s' = -(psi . Gamma psi) s, so
// Theta_hat(t+h) = Theta_hat(t) - Gamma psi s(t) (1 - e^{-a h})/a with
// a = psi . Gamma psi. Used by the integrator because explicit stepping is
// unstable at the gains of interest (a h >> 1); reduces to the Euler update
// as a h -> 0.
Vector5d overparam_exact_step(const OverparamEstimator& o, const RegressorSample& r,
                              double h);

// Consistency error of the overparameterized estimate, evaluated exactly in
// the published component form:
// e = (Th1 Th2 - Th3, Th1 - Th4^2, Th2 - Th5^2).
Eigen::Vector3d consistency_error(const Vector5d& Theta_hat);

// Companion diagnostic with the squares on the first components:
// (Th1 Th2 - Th3, Th1^2 - Th4, Th2^2 - Th5). This variant vanishes on the
// manifold Theta = (t1, t2, t1 t2, t1^2, t2^2); the published rows 2-3 do not.
Eigen::Vector3d consistency_error_alt(const Vector5d& Theta_hat);

// d/dt x34_hat = Gamma2 (Y1 - |x34_hat|^2) x34_hat + A x34_hat + [0; c1 u2].
// The first term is -Gamma2 grad T with T = (1/4)(Y1 - |x34_hat|^2)^2.
Eigen::Vector2d grad_observer_rhs(const GradObserverState& g, double Y1,
                                  const MeasMatrix& A, double u2, double c1);

}  // namespace pmuobs
