#include "pmuobs/gpebo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmuobs/errors.hpp"

namespace pmuobs {

ExtensionState extension_rhs(const ExtensionState& e, const MeasMatrix& A,
                             double u2, double c1) {
    ExtensionState d;
    d.xi = A * e.xi + Eigen::Vector2d(0.0, c1 * u2);
    d.phi = A * e.phi;
    return d;
}

RegressorSample build_regressor(const ExtensionState& e, double Y1) {
    const auto& p = e.phi;
    RegressorSample r;
    r.yE = Y1 - e.xi.squaredNorm();
    r.psi << 2.0 * (p(0, 0) * e.xi(0) + p(1, 0) * e.xi(1)),
             2.0 * (p(0, 1) * e.xi(0) + p(1, 1) * e.xi(1)),
             2.0 * (p(0, 0) * p(0, 1) + p(1, 0) * p(1, 1)),
             p(0, 0) * p(0, 0) + p(1, 0) * p(1, 0),
             p(0, 1) * p(0, 1) + p(1, 1) * p(1, 1);
    return r;
}

Reconstruction reconstruct_states(const ExtensionState& e, const ThetaEstimate& th,
                                  const DerivedSignals& d, AngleMode mode) {
    constexpr double kArcsinSlack = 1e-9;
    Reconstruction r;
    const Eigen::Vector2d x34 = e.xi + e.phi * th.theta_hat;
    r.x3_hat = x34(0);
    r.x4_hat = x34(1);
    const double sin_num = x34(0) * d.Y3 - x34(1) * d.Y2;
    if (mode == AngleMode::Atan2) {
        const double cos_num = x34(0) * d.Y2 + x34(1) * d.Y3;
        r.x1_hat = std::atan2(sin_num, cos_num);
        return r;
    }
    double arg = sin_num / d.Y1;
    if (std::abs(arg) > 1.0 + kArcsinSlack) {
        std::ostringstream os;
        os << "arcsin argument " << arg << " outside [-1, 1] beyond tolerance";
        throw ReconstructionDomain(os.str());
    }
    arg = std::clamp(arg, -1.0, 1.0);
    r.x1_hat = std::asin(arg);
    return r;
}

}  // namespace pmuobs
