#include "pmuobs/scenario.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pmuobs/errors.hpp"
#include "pmuobs/integrate.hpp"

namespace pmuobs {

namespace {

constexpr double kCondWarnThreshold = 1e8;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Offsets of the observer blocks inside the composite state vector. The
// overparameterized estimate is advanced by a discrete exact step and is
// deliberately not part of the integrated vector.
struct Layout {
    bool ext = false;
    bool drem = false;
    bool grad = false;
    int off_ext = -1;
    int off_filt = -1;
    int off_th = -1;
    int off_thf = -1;
    int off_grad = -1;
    int n = 4;

    static Layout of(const Scenario& s) {
        Layout l;
        l.ext = s.extension_enabled();
        l.drem = s.drem_enabled;
        l.grad = s.gradient_enabled;
        int off = 4;
        if (l.ext) { l.off_ext = off; off += 6; }
        if (l.drem) {
            l.off_filt = off; off += 24;
            l.off_th = off; off += 2;
            l.off_thf = off; off += 5;
        }
        if (l.grad) { l.off_grad = off; off += 2; }
        l.n = off;
        return l;
    }
};

PlantState plant_of(const Eigen::VectorXd& X) {
    return {X(0), X(1), X(2), X(3)};
}

ExtensionState extension_of(const Eigen::VectorXd& X, const Layout& l) {
    ExtensionState e;
    e.xi << X(l.off_ext), X(l.off_ext + 1);
    e.phi << X(l.off_ext + 2), X(l.off_ext + 3),
             X(l.off_ext + 4), X(l.off_ext + 5);
    return e;
}

FilterBank filters_of(const Eigen::VectorXd& X, const Layout& l, const Scenario& s) {
    FilterBank f;
    f.d = s.d;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) f.state(i, j) = X(l.off_filt + 6 * i + j);
    return f;
}

struct StageEval {
    Inputs u;
    PmuSample s;
    DerivedSignals d;
    MeasMatrix A;
};

StageEval eval_measurements(const Scenario& sc, double t, const Eigen::VectorXd& X) {
    StageEval ev;
    const PlantState x = plant_of(X);
    ev.u.u1 = sc.u1(t);
    ev.u.u2 = sc.u2(t);
    ev.u.y1_bus = sc.y1_bus(t);
    ev.u.y2_bus = sc.y2_bus(t);
    try {
        ev.s = measure(x, ev.u.y1_bus, ev.u.y2_bus, sc.x_qp);
        ev.d = derived_signals(ev.s, sc.x_qp);
        ev.A = meas_matrix(ev.d, ev.s, sc.coeffs, sc.x_qp);
    } catch (const ObservabilityLoss& ex) {
        std::ostringstream os;
        os << ex.what() << " at t = " << t;
        throw ObservabilityLoss(t, os.str());
    } catch (const InconsistentState& ex) {
        std::ostringstream os;
        os << ex.what() << " at t = " << t;
        throw InconsistentState(os.str());
    }
    return ev;
}

double cond2(const Eigen::Matrix2d& phi) {
    const Eigen::Matrix2d g = phi.transpose() * phi;
    const double half_tr = 0.5 * (g(0, 0) + g(1, 1));
    const double disc = std::sqrt(0.25 * (g(0, 0) - g(1, 1)) * (g(0, 0) - g(1, 1))
                                  + g(0, 1) * g(0, 1));
    const double lmax = half_tr + disc;
    const double lmin = half_tr - disc;
    if (!(lmin > 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(lmax / lmin);
}

}  // namespace

void Scenario::validate() const {
    validate_coefficients(coeffs);
    if (!(x_qp > 0.0)) throw InvalidParams("x_qp must be positive");
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidParams("step size h must be positive");
    if (!std::isfinite(T) || steps() < 1)
        throw InvalidParams("horizon T must be at least one step h");
    validate_poles(d);
    for (double v : {x0.x1, x0.x2, x0.x3, x0.x4})
        if (!std::isfinite(v)) throw InvalidParams("initial state must be finite");
    if (u1.empty() || u2.empty() || y1_bus.empty() || y2_bus.empty())
        throw InvalidParams("input signals must be non-empty");
    for (double v : y2_bus.values())
        if (!(v > 0.0)) throw InvalidParams("bus voltage magnitude must stay positive");
    if (drem_enabled && (!(gamma1 > 0.0) || !(gamma2 > 0.0)))
        throw InvalidParams("estimator gains gamma1, gamma2 must be positive");
    if (overparam_enabled && !(overparam_gain > 0.0))
        throw InvalidParams("overparam_gain must be positive");
    if (gradient_enabled && !(gradient_gain > 0.0))
        throw InvalidParams("gradient_gain must be positive");
    if (!std::isfinite(gradient_init_offset))
        throw InvalidParams("gradient_init_offset must be finite");
}

int Scenario::steps() const {
    return static_cast<int>(std::floor(T / h + 1e-9));
}

Trajectory run_scenario(const Scenario& sc) {
    sc.validate();
    const Layout l = Layout::of(sc);
    const int n = sc.steps();

    Trajectory traj;
    traj.scenario = sc;
    traj.records.reserve(static_cast<std::size_t>(n) + 1);

    Eigen::VectorXd X = Eigen::VectorXd::Zero(l.n);
    X(0) = sc.x0.x1;
    X(1) = sc.x0.x2;
    X(2) = sc.x0.x3;
    X(3) = sc.x0.x4;
    if (l.ext) {
        // xi(0) = 0, Phi(0) = I.
        X(l.off_ext + 2) = 1.0;
        X(l.off_ext + 5) = 1.0;
    }
    if (l.grad) {
        X(l.off_grad + 0) = sc.gradient_init_offset;
        X(l.off_grad + 1) = sc.gradient_init_offset;
    }

    Vector5d op_theta = Vector5d::Zero();
    const Matrix5d op_gamma = sc.overparam_gain * Matrix5d::Identity();
    const Eigen::Matrix2d grad_gamma = sc.gradient_gain * Eigen::Matrix2d::Identity();

    const auto rhs = [&](double t, const Eigen::VectorXd& Xs) -> Eigen::VectorXd {
        const StageEval ev = eval_measurements(sc, t, Xs);
        Eigen::VectorXd dX = Eigen::VectorXd::Zero(l.n);
        const PlantState dx = plant_rhs(plant_of(Xs), ev.u, sc.coeffs, ev.s.y5, sc.x_qp);
        dX(0) = dx.x1;
        dX(1) = dx.x2;
        dX(2) = dx.x3;
        dX(3) = dx.x4;
        if (l.ext) {
            const ExtensionState e = extension_of(Xs, l);
            const ExtensionState de = extension_rhs(e, ev.A, ev.u.u2, sc.coeffs.c1);
            dX(l.off_ext) = de.xi(0);
            dX(l.off_ext + 1) = de.xi(1);
            dX(l.off_ext + 2) = de.phi(0, 0);
            dX(l.off_ext + 3) = de.phi(0, 1);
            dX(l.off_ext + 4) = de.phi(1, 0);
            dX(l.off_ext + 5) = de.phi(1, 1);
        }
        if (l.drem) {
            const ExtensionState e = extension_of(Xs, l);
            const RegressorSample r = build_regressor(e, ev.d.Y1);
            const FilterBank f = filters_of(Xs, l, sc);
            const Eigen::Matrix<double, 4, 6> df = filter_rhs(f, r);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 6; ++j) dX(l.off_filt + 6 * i + j) = df(i, j);
            const ExtendedRegression er = assemble_regression(f, r);
            const MixedRegression m = mix(er);
            ScalarEstimators est;
            est.theta_hat << Xs(l.off_th), Xs(l.off_th + 1);
            est.gamma1 = sc.gamma1;
            est.gamma2 = sc.gamma2;
            est.full_diagnostics = sc.drem_full_diagnostics;
            for (int i = 0; i < 5; ++i) est.Theta_full(i) = Xs(l.off_thf + i);
            const ScalarEstimators dest = scalar_update(est, m);
            dX(l.off_th) = dest.theta_hat(0);
            dX(l.off_th + 1) = dest.theta_hat(1);
            if (sc.drem_full_diagnostics)
                for (int i = 0; i < 5; ++i) dX(l.off_thf + i) = dest.Theta_full(i);
        }
        if (l.grad) {
            GradObserverState g;
            g.x34_hat << Xs(l.off_grad), Xs(l.off_grad + 1);
            g.Gamma2 = grad_gamma;
            const Eigen::Vector2d dg =
                grad_observer_rhs(g, ev.d.Y1, ev.A, ev.u.u2, sc.coeffs.c1);
            dX(l.off_grad) = dg(0);
            dX(l.off_grad + 1) = dg(1);
        }
        return dX;
    };

    double int_delta_sq = 0.0;
    double prev_delta = 0.0;
    bool cond_warned = false;

    for (int k = 0; k <= n; ++k) {
        const double t = k * sc.h;
        const StageEval ev = eval_measurements(sc, t, X);

        Record rec;
        rec.t = t;
        rec.x1 = X(0);
        rec.x2 = X(1);
        rec.x3 = X(2);
        rec.x4 = X(3);
        rec.u1 = ev.u.u1;
        rec.u2 = ev.u.u2;
        rec.y1 = ev.s.y1;
        rec.y2 = ev.s.y2;
        rec.y3 = ev.s.y3;
        rec.y4 = ev.s.y4;
        rec.y5 = ev.s.y5;
        rec.y6 = ev.s.y6;
        rec.z0 = ev.d.z0;
        rec.Y1 = ev.d.Y1;
        rec.Y2 = ev.d.Y2;
        rec.Y3 = ev.d.Y3;
        rec.A11 = ev.A(0, 0);
        rec.A12 = ev.A(0, 1);
        rec.A21 = ev.A(1, 0);
        rec.A22 = ev.A(1, 1);

        rec.xi1 = rec.xi2 = kNaN;
        rec.phi11 = rec.phi12 = rec.phi21 = rec.phi22 = kNaN;
        rec.det_phi = rec.cond_phi = kNaN;
        rec.psi1 = rec.psi2 = rec.psi3 = rec.psi4 = rec.psi5 = rec.yE = kNaN;
        rec.f21 = rec.f22 = rec.f23 = rec.f24 = rec.f25 = rec.f26 = kNaN;
        rec.f31 = rec.f32 = rec.f33 = rec.f34 = rec.f35 = rec.f36 = kNaN;
        rec.f41 = rec.f42 = rec.f43 = rec.f44 = rec.f45 = rec.f46 = kNaN;
        rec.f51 = rec.f52 = rec.f53 = rec.f54 = rec.f55 = rec.f56 = kNaN;
        rec.Delta = rec.int_Delta_sq = kNaN;
        rec.calY1 = rec.calY2 = rec.calY3 = rec.calY4 = rec.calY5 = kNaN;
        rec.mix_dev = rec.mix_scale = kNaN;
        rec.th1_hat = rec.th2_hat = kNaN;
        rec.thf1 = rec.thf2 = rec.thf3 = rec.thf4 = rec.thf5 = kNaN;
        rec.x1_hat = rec.x3_hat = rec.x4_hat = kNaN;
        rec.x1_err = rec.x3_err = rec.x4_err = kNaN;
        rec.op1 = rec.op2 = rec.op3 = rec.op4 = rec.op5 = kNaN;
        rec.e1 = rec.e2 = rec.e3 = kNaN;
        rec.ealt1 = rec.ealt2 = rec.ealt3 = kNaN;
        rec.gx3_hat = rec.gx4_hat = rec.gx3_err = rec.gx4_err = kNaN;

        RegressorSample reg;
        bool have_reg = false;

        if (l.ext) {
            const ExtensionState e = extension_of(X, l);
            rec.xi1 = e.xi(0);
            rec.xi2 = e.xi(1);
            rec.phi11 = e.phi(0, 0);
            rec.phi12 = e.phi(0, 1);
            rec.phi21 = e.phi(1, 0);
            rec.phi22 = e.phi(1, 1);
            rec.det_phi = det2(e.phi(0, 0), e.phi(0, 1), e.phi(1, 0), e.phi(1, 1));
            rec.cond_phi = cond2(e.phi);
            if (!cond_warned && rec.cond_phi > kCondWarnThreshold) {
                cond_warned = true;
                std::ostringstream os;
                os << "transition-matrix condition number exceeded " << kCondWarnThreshold
                   << " at t = " << t;
                traj.warnings.push_back(os.str());
            }
            reg = build_regressor(e, ev.d.Y1);
            have_reg = true;
            rec.psi1 = reg.psi(0);
            rec.psi2 = reg.psi(1);
            rec.psi3 = reg.psi(2);
            rec.psi4 = reg.psi(3);
            rec.psi5 = reg.psi(4);
            rec.yE = reg.yE;
        }

        if (l.drem) {
            const ExtensionState e = extension_of(X, l);
            const FilterBank f = filters_of(X, l, sc);
            rec.f21 = f.state(0, 0); rec.f22 = f.state(0, 1); rec.f23 = f.state(0, 2);
            rec.f24 = f.state(0, 3); rec.f25 = f.state(0, 4); rec.f26 = f.state(0, 5);
            rec.f31 = f.state(1, 0); rec.f32 = f.state(1, 1); rec.f33 = f.state(1, 2);
            rec.f34 = f.state(1, 3); rec.f35 = f.state(1, 4); rec.f36 = f.state(1, 5);
            rec.f41 = f.state(2, 0); rec.f42 = f.state(2, 1); rec.f43 = f.state(2, 2);
            rec.f44 = f.state(2, 3); rec.f45 = f.state(2, 4); rec.f46 = f.state(2, 5);
            rec.f51 = f.state(3, 0); rec.f52 = f.state(3, 1); rec.f53 = f.state(3, 2);
            rec.f54 = f.state(3, 3); rec.f55 = f.state(3, 4); rec.f56 = f.state(3, 5);
            const ExtendedRegression er = assemble_regression(f, reg);
            const MixedRegression m = mix(er);
            const Vector5d yc = mix_cramer(er);
            rec.Delta = m.Delta;
            rec.calY1 = m.calY(0);
            rec.calY2 = m.calY(1);
            rec.calY3 = m.calY(2);
            rec.calY4 = m.calY(3);
            rec.calY5 = m.calY(4);
            rec.mix_dev = (m.calY - yc).cwiseAbs().maxCoeff();
            // Term magnitude of the cofactor products behind both mixing
            // routes; route disagreement is rounding relative to this scale.
            const double pm = er.Psi.cwiseAbs().maxCoeff();
            rec.mix_scale = pm * pm * pm * pm * er.YE.cwiseAbs().maxCoeff();
            if (k > 0) {
                const double a = prev_delta * prev_delta;
                const double b = m.Delta * m.Delta;
                int_delta_sq += 0.5 * sc.h * (a + b);
            }
            prev_delta = m.Delta;
            rec.int_Delta_sq = int_delta_sq;

            ThetaEstimate th;
            th.theta_hat << X(l.off_th), X(l.off_th + 1);
            rec.th1_hat = th.theta_hat(0);
            rec.th2_hat = th.theta_hat(1);
            rec.thf1 = X(l.off_thf + 0);
            rec.thf2 = X(l.off_thf + 1);
            rec.thf3 = X(l.off_thf + 2);
            rec.thf4 = X(l.off_thf + 3);
            rec.thf5 = X(l.off_thf + 4);

            // Reconstruction is recorded best-effort: mid-transient estimates
            // may push the arcsin argument out of range, which is not an
            // integration error; such samples record NaN for the angle.
            const Eigen::Vector2d x34h = e.xi + e.phi * th.theta_hat;
            rec.x3_hat = x34h(0);
            rec.x4_hat = x34h(1);
            rec.x3_err = rec.x3_hat - rec.x3;
            rec.x4_err = rec.x4_hat - rec.x4;
            const double sin_num = x34h(0) * ev.d.Y3 - x34h(1) * ev.d.Y2;
            if (sc.angle_mode == AngleMode::Atan2) {
                rec.x1_hat = std::atan2(sin_num, x34h(0) * ev.d.Y2 + x34h(1) * ev.d.Y3);
                rec.x1_err = rec.x1_hat - rec.x1;
            } else {
                const double arg = sin_num / ev.d.Y1;
                if (std::abs(arg) <= 1.0 + 1e-9) {
                    rec.x1_hat = std::asin(std::clamp(arg, -1.0, 1.0));
                    rec.x1_err = rec.x1_hat - rec.x1;
                }
            }
        }

        if (sc.overparam_enabled) {
            rec.op1 = op_theta(0);
            rec.op2 = op_theta(1);
            rec.op3 = op_theta(2);
            rec.op4 = op_theta(3);
            rec.op5 = op_theta(4);
            const Eigen::Vector3d e = consistency_error(op_theta);
            const Eigen::Vector3d ea = consistency_error_alt(op_theta);
            rec.e1 = e(0);
            rec.e2 = e(1);
            rec.e3 = e(2);
            rec.ealt1 = ea(0);
            rec.ealt2 = ea(1);
            rec.ealt3 = ea(2);
        }

        if (l.grad) {
            rec.gx3_hat = X(l.off_grad);
            rec.gx4_hat = X(l.off_grad + 1);
            rec.gx3_err = rec.gx3_hat - rec.x3;
            rec.gx4_err = rec.gx4_hat - rec.x4;
        }

        traj.records.push_back(rec);

        if (k < n) {
            X = rk4_step(rhs, X, t, sc.h);
            if (sc.overparam_enabled && have_reg) {
                OverparamEstimator op;
                op.Theta_hat = op_theta;
                op.Gamma = op_gamma;
                op_theta = overparam_exact_step(op, reg, sc.h);
            }
        }
    }

    return traj;
}

}  // namespace pmuobs
