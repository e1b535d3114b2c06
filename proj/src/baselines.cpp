#include "pmuobs/baselines.hpp"

#include <cmath>

namespace pmuobs {

Vector5d overparam_update(const OverparamEstimator& o, const RegressorSample& r) {
    const double misfit = r.psi.dot(o.Theta_hat) - r.yE;
    return -o.Gamma * r.psi * misfit;
}

Vector5d overparam_exact_step(const OverparamEstimator& o, const RegressorSample& r,
                              double h) {
    const double misfit = r.psi.dot(o.Theta_hat) - r.yE;
    const double a = r.psi.dot(o.Gamma * r.psi);
    // (1 - e^{-a h})/a, continuous at a = 0 where it equals h.
    double gain;
    const double ah = a * h;
    if (ah > 1e-8) {
        gain = (1.0 - std::exp(-ah)) / a;
    } else {
        gain = h * (1.0 - 0.5 * ah);
    }
    return o.Theta_hat - o.Gamma * r.psi * (misfit * gain);
}

Eigen::Vector3d consistency_error(const Vector5d& t) {
    return {t(0) * t(1) - t(2),
            t(0) - t(3) * t(3),
            t(1) - t(4) * t(4)};
}

Eigen::Vector3d consistency_error_alt(const Vector5d& t) {
    return {t(0) * t(1) - t(2),
            t(0) * t(0) - t(3),
            t(1) * t(1) - t(4)};
}

Eigen::Vector2d grad_observer_rhs(const GradObserverState& g, double Y1,
                                  const MeasMatrix& A, double u2, double c1) {
    const double gap = Y1 - g.x34_hat.squaredNorm();
    return g.Gamma2 * (gap * g.x34_hat) + A * g.x34_hat + Eigen::Vector2d(0.0, c1 * u2);
}

}  // namespace pmuobs
