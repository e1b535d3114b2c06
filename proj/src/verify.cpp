#include "pmuobs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "pmuobs/cofactor.hpp"
#include "pmuobs/errors.hpp"
#include "pmuobs/pmu.hpp"

namespace pmuobs {

namespace {

constexpr double kTolNullResidual = 1e-12;
constexpr double kTolDetBound = 1e-10;
constexpr double kTolJacobianFd = 1e-6;
constexpr double kFdStep = 1e-6;
constexpr int kFdProbes = 100;
constexpr double kTolAdjIdentity = 1e-9;
constexpr double kTolRouteAgreement = 1e-10;

// Uniform draw in [-range, range). Mapped from raw engine output rather than
// through uniform_real_distribution so that a seed pins the exact sample
// sequence independently of the standard library in use.
class UniformBox {
  public:
    UniformBox(std::uint64_t seed, double range) : eng_(seed), range_(range) {}
    double operator()() {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return range_ * (2.0 * u - 1.0);
    }

  private:
    std::mt19937_64 eng_;
    double range_;
};

void validate_args(int samples, double range) {
    if (samples < 1) throw InvalidParams("sample count must be at least 1");
    if (!(range > 0.0) || !std::isfinite(range))
        throw InvalidParams("sample range must be positive");
}

CheckResult make_check(const char* name, double worst, double tol) {
    CheckResult c;
    c.name = name;
    c.worst = worst;
    c.tolerance = tol;
    c.passed = worst <= tol;
    return c;
}

}  // namespace

bool VerifyResult::passed() const {
    for (const CheckResult& c : checks)
        if (!c.passed) return false;
    return true;
}

VerifyResult verify_lemma1(int samples, std::uint64_t seed, double range) {
    validate_args(samples, range);
    VerifyResult res;
    res.suite = "lemma1";
    res.samples = samples;
    res.seed = seed;
    res.range = range;

    UniformBox draw(seed, range);

    double w_null = 0.0;
    double w_det = 0.0;
    double w_fd = 0.0;
    for (int s = 0; s < samples; ++s) {
        Eigen::Vector3d v;
        v << draw(), draw(), draw();
        const double y2 = draw();

        const NonInjectivityCertificate cert = noninjectivity_certificate(v, y2);
        w_null = std::max(w_null, cert.residual);

        const double jnorm = cert.jacobian.cwiseAbs().rowwise().sum().maxCoeff();
        const double det = det3(cert.jacobian);
        w_det = std::max(w_det, std::abs(det) / (1.0 + jnorm * jnorm * jnorm));

        if (s < kFdProbes) {
            const double scale = 1.0 + cert.jacobian.cwiseAbs().maxCoeff();
            for (int j = 0; j < 3; ++j) {
                Eigen::Vector3d vp = v, vm = v;
                vp(j) += kFdStep;
                vm(j) -= kFdStep;
                const Eigen::Vector3d col =
                    (n_map(vp, y2) - n_map(vm, y2)) / (2.0 * kFdStep);
                for (int i = 0; i < 3; ++i)
                    w_fd = std::max(w_fd,
                                    std::abs(cert.jacobian(i, j) - col(i)) / scale);
            }
        }
    }

    res.checks.push_back(make_check("null_direction_residual", w_null, kTolNullResidual));
    res.checks.push_back(make_check("determinant_bound", w_det, kTolDetBound));
    res.checks.push_back(make_check("jacobian_finite_difference", w_fd, kTolJacobianFd));
    return res;
}

VerifyResult verify_drem(int samples, std::uint64_t seed, double range) {
    validate_args(samples, range);
    VerifyResult res;
    res.suite = "drem";
    res.samples = samples;
    res.seed = seed;
    res.range = range;

    UniformBox draw(seed, range);

    double w_adj = 0.0;
    double w_route = 0.0;
    for (int s = 0; s < samples; ++s) {
        Matrix5d m;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) m(i, j) = draw();
        Vector5d b;
        for (int i = 0; i < 5; ++i) b(i) = draw();

        // Deviations are rounding relative to the magnitude of the products
        // the cofactor expansions sum over: entries^5 for the adjugate
        // identity, entries^4 * data for the two mixing routes.
        const Matrix5d adj = adjugate5(m);
        const double det = det5(m);
        const Matrix5d dev = adj * m - det * Matrix5d::Identity();
        const double mm = m.cwiseAbs().maxCoeff();
        const double m4 = mm * mm * mm * mm;
        w_adj = std::max(w_adj, dev.cwiseAbs().maxCoeff() / (1.0 + m4 * mm));

        const Vector5d via_adj = adj * b;
        const Vector5d via_repl = cramer5(m, b);
        w_route = std::max(w_route, (via_adj - via_repl).cwiseAbs().maxCoeff()
                                        / (1.0 + m4 * b.cwiseAbs().maxCoeff()));
    }

    const Matrix5d id = Matrix5d::Identity();
    const double w_exact = std::max((adjugate5(id) - id).cwiseAbs().maxCoeff(),
                                    std::abs(det5(id) - 1.0));

    res.checks.push_back(make_check("adjugate_identity", w_adj, kTolAdjIdentity));
    res.checks.push_back(make_check("replacement_route_agreement", w_route, kTolRouteAgreement));
    res.checks.push_back(make_check("identity_exactness", w_exact, 0.0));
    return res;
}

std::string verify_summary(const VerifyResult& r) {
    std::ostringstream os;
    os << "suite " << r.suite << ": samples=" << r.samples << " seed=" << r.seed
       << " range=" << r.range << " -> " << (r.passed() ? "pass" : "FAIL") << "\n";
    for (const CheckResult& c : r.checks) {
        os << "  " << (c.passed ? "pass" : "FAIL") << "  " << std::left << std::setw(28)
           << c.name << std::scientific << std::setprecision(3) << " worst " << c.worst
           << "  tol " << c.tolerance << "\n";
        os << std::defaultfloat;
    }
    return os.str();
}

}  // namespace pmuobs
