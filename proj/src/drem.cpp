#include "pmuobs/drem.hpp"

#include <sstream>

#include "pmuobs/errors.hpp"

namespace pmuobs {

void validate_poles(const std::array<double, 4>& d) {
    for (int i = 0; i < 4; ++i) {
        if (!(d[i] > 0.0)) {
            std::ostringstream os;
            os << "filter pole d" << i + 2 << " must be positive, got " << d[i];
            throw InvalidParams(os.str());
        }
        for (int j = 0; j < i; ++j)
            if (d[i] == d[j]) {
                std::ostringstream os;
                os << "filter poles must be pairwise distinct, d" << j + 2
                   << " = d" << i + 2 << " = " << d[i];
                throw InvalidParams(os.str());
            }
    }
}

Eigen::Matrix<double, 4, 6> filter_rhs(const FilterBank& f, const RegressorSample& in) {
    Eigen::Matrix<double, 4, 6> dx;
    for (int i = 0; i < 4; ++i) {
        dx(i, 0) = f.d[i] * (in.yE - f.state(i, 0));
        for (int j = 0; j < 5; ++j)
            dx(i, j + 1) = f.d[i] * (in.psi(j) - f.state(i, j + 1));
    }
    return dx;
}

ExtendedRegression assemble_regression(const FilterBank& f, const RegressorSample& in) {
    ExtendedRegression r;
    r.YE(0) = in.yE;
    r.Psi.row(0) = in.psi.transpose();
    for (int i = 0; i < 4; ++i) {
        r.YE(i + 1) = f.state(i, 0);
        for (int j = 0; j < 5; ++j) r.Psi(i + 1, j) = f.state(i, j + 1);
    }
    return r;
}

MixedRegression mix(const ExtendedRegression& r) {
    MixedRegression m;
    m.Delta = det5(r.Psi);
    m.calY = adjugate5(r.Psi) * r.YE;
    return m;
}

Vector5d mix_cramer(const ExtendedRegression& r) {
    return cramer5(r.Psi, r.YE);
}

ScalarEstimators scalar_update(const ScalarEstimators& est, const MixedRegression& m) {
    ScalarEstimators d;
    d.gamma1 = 0.0;
    d.gamma2 = 0.0;
    d.full_diagnostics = est.full_diagnostics;
    d.theta_hat(0) = -est.gamma1 * m.Delta * (m.Delta * est.theta_hat(0) - m.calY(0));
    d.theta_hat(1) = -est.gamma2 * m.Delta * (m.Delta * est.theta_hat(1) - m.calY(1));
    if (est.full_diagnostics)
        for (int i = 0; i < 5; ++i)
            d.Theta_full(i) = -est.gamma1 * m.Delta * (m.Delta * est.Theta_full(i) - m.calY(i));
    return d;
}

double excitation_integral(const std::vector<double>& delta_series, double h) {
    if (delta_series.size() < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 1; k < delta_series.size(); ++k) {
        const double a = delta_series[k - 1] * delta_series[k - 1];
        const double b = delta_series[k] * delta_series[k];
        acc += 0.5 * h * (a + b);
    }
    return acc;
}

}  // namespace pmuobs
