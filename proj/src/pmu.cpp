#include "pmuobs/pmu.hpp"

#include <cmath>
#include <sstream>

#include "pmuobs/errors.hpp"

namespace pmuobs {

namespace {

constexpr double kRadicandSlack = 1e-12;  // tolerated negative radicand
constexpr double kY1Gate = 1e-9;          // positivity gate on Y1, pu^2

}  // namespace

PmuSample measure(const PlantState& x, double y1, double y2, double x_qp) {
    if (!(y2 > 0.0))
        throw InconsistentState("bus voltage magnitude y2 must be positive");
    const double beta = x.x1 - y1;
    const double sb = std::sin(beta);
    const double cb = std::cos(beta);

    PmuSample s;
    s.y1 = y1;
    s.y2 = y2;
    double radicand = (x.x3 * x.x3 + x.x4 * x.x4 + y2 * y2
                       - 2.0 * y2 * (x.x4 * cb + x.x3 * sb)) / (x_qp * x_qp);
    if (radicand < 0.0) {
        if (radicand < -kRadicandSlack) {
            std::ostringstream os;
            os << "current-magnitude radicand is negative beyond tolerance: " << radicand;
            throw InconsistentState(os.str());
        }
        radicand = 0.0;
    }
    s.y4 = std::sqrt(radicand);
    s.y5 = y2 / x_qp * (x.x4 * sb - x.x3 * cb);
    s.y6 = y2 / x_qp * (x.x4 * cb + x.x3 * sb - y2);
    // Current phase: (Iq - j Id) e^{j x1} has magnitude y4; its phase is the
    // measured phi_t. Equivalently y1 + atan2(-y6, y5) when y4 > 0.
    const double id = (x.x4 - y2 * cb) / x_qp;
    const double iq = (-x.x3 + y2 * sb) / x_qp;
    const double re = iq * std::cos(x.x1) + id * std::sin(x.x1);
    const double im = iq * std::sin(x.x1) - id * std::cos(x.x1);
    s.y3 = std::atan2(im, re);
    return s;
}

std::pair<double, double> dq_currents(const PlantState& x, double y1, double y2,
                                      double x_dp, double x_qp) {
    const double beta = x.x1 - y1;
    const double id = (x.x4 - y2 * std::cos(beta)) / x_dp;
    const double iq = (-x.x3 + y2 * std::sin(beta)) / x_qp;
    return {id, iq};
}

DerivedSignals derived_signals(const PmuSample& s, double x_qp) {
    if (!(s.y2 > 0.0))
        throw InconsistentState("bus voltage magnitude y2 must be positive");
    DerivedSignals d;
    d.z0 = s.y6 + s.y2 * s.y2 / x_qp;
    d.Y1 = x_qp * x_qp * s.y4 * s.y4 + 2.0 * x_qp * s.y6 + s.y2 * s.y2;
    if (!(d.Y1 > kY1Gate)) {
        std::ostringstream os;
        os << "Y1 = " << d.Y1 << " fell below the " << kY1Gate << " gate";
        throw ObservabilityLoss(0.0, os.str());
    }
    const double c = std::cos(s.y1);
    const double sn = std::sin(s.y1);
    const double p = -x_qp * s.y5 / s.y2;
    const double q = x_qp * s.y6 / s.y2 + s.y2;
    d.Y2 = c * p - sn * q;
    d.Y3 = sn * p + c * q;
    return d;
}

MeasMatrix meas_matrix(const DerivedSignals& d, const PmuSample& s,
                       const DerivedCoefficients& c, double x_qp) {
    if (!(d.Y1 > kY1Gate)) {
        std::ostringstream os;
        os << "Y1 = " << d.Y1 << " fell below the " << kY1Gate << " gate";
        throw ObservabilityLoss(0.0, os.str());
    }
    const double r = x_qp / d.Y1;
    MeasMatrix a;
    a(0, 0) = -c.a2 + c.b2 * r * d.z0;
    a(0, 1) = c.b2 * r * s.y5;
    a(1, 0) = -c.b1 * r * s.y5;
    a(1, 1) = -c.a1 + c.b1 * r * d.z0;
    return a;
}

Eigen::Vector3d n_map(const Eigen::Vector3d& v, double y2) {
    const double sv = std::sin(v(0));
    const double cv = std::cos(v(0));
    return {-2.0 * y2 * (v(1) * cv + v(2) * sv),
            v(1) * sv - v(2) * cv,
            v(1) * cv + v(2) * sv};
}

NonInjectivityCertificate noninjectivity_certificate(const Eigen::Vector3d& v,
                                                     double y2) {
    const double sv = std::sin(v(0));
    const double cv = std::cos(v(0));
    NonInjectivityCertificate cert;
    cert.jacobian << 2.0 * y2 * (v(1) * sv - v(2) * cv), -2.0 * y2 * cv, -2.0 * y2 * sv,
                     v(1) * cv + v(2) * sv,              sv,             -cv,
                     -v(1) * sv + v(2) * cv,             cv,              sv;
    cert.null_vector << 1.0, -v(2), v(1);
    cert.residual = (cert.jacobian * cert.null_vector).cwiseAbs().maxCoeff();
    return cert;
}

}  // namespace pmuobs
