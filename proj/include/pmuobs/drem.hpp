#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "pmuobs/cofactor.hpp"
#include "pmuobs/gpebo.hpp"

namespace pmuobs {

// Bank of first-order unity-DC-gain lags d_i/(s + d_i) applied to the scalar
// regression (yE, psi). The first output channel of the stacked operator is
// the raw signal itself; the four filtered rows carry states here.
// state(i, 0) filters yE through pole d[i]; state(i, 1..5) filter psi.
struct FilterBank {
    std::array<double, 4> d{2.0, 4.0, 6.0, 8.0};
    Eigen::Matrix<double, 4, 6> state = Eigen::Matrix<double, 4, 6>::Zero();
};

// Stacked regression YE = Psi * Theta: row 1 is the unfiltered sample, rows
// 2..5 the filter outputs.
struct ExtendedRegression {
    Vector5d YE = Vector5d::Zero();
    Matrix5d Psi = Matrix5d::Zero();
};

// Mixed scalar regressions calY_i = Delta * Theta_i.
struct MixedRegression {
    double Delta = 0.0;
    Vector5d calY = Vector5d::Zero();
};

// Scalar estimators for theta1, theta2 (the components of Theta the observer
// consumes), with an optional full five-component estimate for diagnostics.
struct ScalarEstimators {
    Eigen::Vector2d theta_hat = Eigen::Vector2d::Zero();
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    bool full_diagnostics = false;
    Vector5d Theta_full = Vector5d::Zero();  // integrated with gain gamma1
};

// Validates pole positivity and pairwise distinctness.
void validate_poles(const std::array<double, 4>& d);

// Derivative of every filter state: -d_i x + d_i * input per channel.
Eigen::Matrix<double, 4, 6> filter_rhs(const FilterBank& f, const RegressorSample& in);

// Stacks the raw sample and the filter outputs into (YE, Psi).
ExtendedRegression assemble_regression(const FilterBank& f, const RegressorSample& in);

// Adjugate-route mixing: Delta = det Psi, calY = adj(Psi) YE.
MixedRegression mix(const ExtendedRegression& r);

// Determinant-replacement route for the same vector, for cross-checking.
Vector5d mix_cramer(const ExtendedRegression& r);

// Derivative of the scalar estimators:
// d/dt theta_hat_k = -gamma_k * Delta * (Delta * theta_hat_k - calY_k).
ScalarEstimators scalar_update(const ScalarEstimators& est, const MixedRegression& m);

// Trapezoidal integral of Delta^2 over a uniform grid with spacing h.
double excitation_integral(const std::vector<double>& delta_series, double h);

}  // namespace pmuobs
