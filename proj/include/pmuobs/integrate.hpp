#pragma once

#include <sstream>

#include <Eigen/Dense>

#include "pmuobs/errors.hpp"

namespace pmuobs {

// Classical fourth-order Runge-Kutta step, fixed h, no adaptive logic.
// Throws IntegrationDiverged when any stage derivative is non-finite.
template <typename F>
Eigen::VectorXd rk4_step(F&& rhs, const Eigen::VectorXd& x, double t, double h) {
    const auto check = [](const Eigen::VectorXd& k, double ts) {
        if (!k.allFinite()) {
            std::ostringstream os;
            os << "non-finite derivative at t = " << ts;
            throw IntegrationDiverged(ts, os.str());
        }
    };
    const Eigen::VectorXd k1 = rhs(t, x);
    check(k1, t);
    const Eigen::VectorXd k2 = rhs(t + 0.5 * h, Eigen::VectorXd(x + 0.5 * h * k1));
    check(k2, t + 0.5 * h);
    const Eigen::VectorXd k3 = rhs(t + 0.5 * h, Eigen::VectorXd(x + 0.5 * h * k2));
    check(k3, t + 0.5 * h);
    const Eigen::VectorXd k4 = rhs(t + h, Eigen::VectorXd(x + h * k3));
    check(k4, t + h);
    return x + h * ((k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0);
}

}  // namespace pmuobs
