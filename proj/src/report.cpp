#include "pmuobs/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "pmuobs/drem.hpp"
#include "pmuobs/errors.hpp"

namespace pmuobs {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Pointwise identity tolerances.
constexpr double kTolIdentity = 1e-9;       // measurement-algebra identities
constexpr double kTolTransition = 1e-6;     // state vs. propagated initial error
constexpr double kTolRegression = 1e-8;     // yE vs. psi'Theta(true)
constexpr double kTolMixIdentity = 1e-9;    // adj(Psi)Psi vs. det(Psi)I, scaled
constexpr double kTolMixRoutes = 1e-10;     // adjugate vs. determinant-replacement
constexpr double kTolDecayRel = 1e-3;       // scalar-estimator decay match
// Deep-decay floor: beyond it the estimator error is dominated by rounding
// noise in the near-singular mixing determinant, amplified by the gain; the
// floor bounds that accumulated noise (worst observed ~5.4e-4 of the initial
// error at gain * total excitation ~ 1e3).
constexpr double kDecayFloorRel = 3e-3;
constexpr double kDecayFloorAbs = 1e-12;
constexpr double kTolLiouvilleRel = 1e-6;   // det Phi vs. exp(int tr A)
constexpr double kLiouvilleDetFloor = 1e-12;  // rounding floor of the 2x2 det
constexpr double kTolExcitation = 1e-12;    // recomputed vs. accumulated integral
constexpr double kCondClamp = 1e300;        // finite stand-in for unbounded cond

CheckResult abs_check(const char* name, double worst, double tol) {
    CheckResult c;
    c.name = name;
    c.worst = worst;
    c.tolerance = tol;
    c.passed = worst <= tol;
    return c;
}

// Scale-aware checks accumulate deviation/allowance ratios; tolerance is 1.
CheckResult ratio_check(const char* name, double worst_ratio) {
    CheckResult c;
    c.name = name;
    c.worst = worst_ratio;
    c.tolerance = 1.0;
    c.passed = worst_ratio <= 1.0;
    return c;
}

template <typename ErrFn>
ObserverReport scan_observer(const std::vector<Record>& recs, const char* name,
                             double gain, double threshold, double hold, ErrFn err) {
    ObserverReport r;
    r.observer = name;
    r.gain = gain;
    int start = -1;
    for (std::size_t k = 0; k < recs.size(); ++k) {
        const double e = err(recs[k]);
        if (std::isfinite(e) && e < threshold) {
            if (start < 0) start = static_cast<int>(k);
            if (!r.converged && recs[k].t - recs[start].t >= hold - 1e-12) {
                r.converged = true;
                r.convergence_time = recs[start].t;
            }
        } else {
            start = -1;
        }
    }
    r.terminal_error = err(recs.back());
    return r;
}

ordered_json num_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

double num_from(const ordered_json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError(std::string("report field missing: ") + key);
    if (it->is_null()) return kNaN;
    if (!it->is_number()) throw ConfigError(std::string("report field not numeric: ") + key);
    return it->get<double>();
}

std::string str_from(const ordered_json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string())
        throw ConfigError(std::string("report field missing or not a string: ") + key);
    return it->get<std::string>();
}

bool bool_from(const ordered_json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_boolean())
        throw ConfigError(std::string("report field missing or not a boolean: ") + key);
    return it->get<bool>();
}

}  // namespace

bool RunReport::all_checks_passed() const {
    for (const CheckResult& c : checks)
        if (!c.passed) return false;
    return true;
}

const ObserverReport* RunReport::find_observer(const std::string& obs) const {
    for (const ObserverReport& o : observers)
        if (o.observer == obs) return &o;
    return nullptr;
}

std::vector<double> cumulative_integral(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for (std::size_t k = 2; k < n; ++k)
        out[k] = out[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
    return out;
}

RunReport build_report(const Trajectory& traj, const std::string& name) {
    if (traj.records.empty()) throw InvalidParams("cannot build a report from an empty trajectory");
    const Scenario& sc = traj.scenario;
    const std::vector<Record>& recs = traj.records;

    RunReport rep;
    rep.name = name;
    rep.horizon = recs.back().t;

    if (sc.drem_enabled) {
        rep.observers.push_back(scan_observer(
            recs, "drem", sc.gamma1, rep.threshold, rep.hold, [](const Record& r) {
                return std::max(std::abs(r.x3_err), std::abs(r.x4_err));
            }));
    }
    if (sc.overparam_enabled) {
        rep.observers.push_back(scan_observer(
            recs, "overparam", sc.overparam_gain, rep.threshold, rep.hold,
            [](const Record& r) {
                return std::max({std::abs(r.e1), std::abs(r.e2), std::abs(r.e3)});
            }));
    }
    if (sc.gradient_enabled) {
        rep.observers.push_back(scan_observer(
            recs, "gradient", sc.gradient_gain, rep.threshold, rep.hold,
            [](const Record& r) {
                return std::max(std::abs(r.gx3_err), std::abs(r.gx4_err));
            }));
    }

    if (sc.drem_enabled) {
        rep.int_delta_sq = recs.back().int_Delta_sq;
        double mn = kInf;
        for (const Record& r : recs) mn = std::min(mn, std::abs(r.Delta));
        rep.min_abs_delta = mn;
    }
    if (sc.extension_enabled()) {
        double mx = 0.0;
        for (const Record& r : recs) mx = std::max(mx, std::min(r.cond_phi, kCondClamp));
        rep.max_cond_phi = mx;
    }

    // Measurement-algebra identities and the rewritten voltage dynamics hold
    // pointwise at every grid point; deviations reflect rounding only.
    double w_energy = 0.0, w_rotnorm = 0.0, w_rotsin = 0.0, w_rotcos = 0.0, w_dyn = 0.0;
    for (const Record& r : recs) {
        w_energy = std::max(w_energy, std::abs(r.Y1 - (r.x3 * r.x3 + r.x4 * r.x4)));
        w_rotnorm = std::max(w_rotnorm, std::abs(r.Y2 * r.Y2 + r.Y3 * r.Y3 - r.Y1));
        w_rotsin = std::max(w_rotsin,
                            std::abs(r.x3 * r.Y3 - r.x4 * r.Y2 - r.Y1 * std::sin(r.x1)));
        w_rotcos = std::max(w_rotcos,
                            std::abs(r.x3 * r.Y2 + r.x4 * r.Y3 - r.Y1 * std::cos(r.x1)));
        const double beta = r.x1 - r.y1;
        const double f3 = -sc.coeffs.a2 * r.x3 + sc.coeffs.b2 * r.y2 * std::sin(beta);
        const double f4 = -sc.coeffs.a1 * r.x4 + sc.coeffs.b1 * r.y2 * std::cos(beta)
                          + sc.coeffs.c1 * r.u2;
        const double g3 = r.A11 * r.x3 + r.A12 * r.x4;
        const double g4 = r.A21 * r.x3 + r.A22 * r.x4 + sc.coeffs.c1 * r.u2;
        w_dyn = std::max({w_dyn, std::abs(f3 - g3), std::abs(f4 - g4)});
    }
    rep.checks.push_back(abs_check("energy_identity", w_energy, kTolIdentity));
    rep.checks.push_back(abs_check("rotation_norm", w_rotnorm, kTolIdentity));
    rep.checks.push_back(abs_check("rotation_angle_sin", w_rotsin, kTolIdentity));
    rep.checks.push_back(abs_check("rotation_angle_cos", w_rotcos, kTolIdentity));
    const double h4 = sc.h * sc.h * sc.h * sc.h;
    rep.checks.push_back(abs_check("voltage_dynamics_residual", w_dyn, 10.0 * h4));

    if (sc.extension_enabled()) {
        // The initial voltage error the extension propagates: estimates start
        // at zero, so it equals the initial voltages themselves.
        const double th1 = recs.front().x3;
        const double th2 = recs.front().x4;

        double w_trans = 0.0;
        double w_reg = 0.0;
        const double Th[5] = {th1, th2, th1 * th2, th1 * th1, th2 * th2};
        for (const Record& r : recs) {
            const double p3 = r.xi1 + r.phi11 * th1 + r.phi12 * th2;
            const double p4 = r.xi2 + r.phi21 * th1 + r.phi22 * th2;
            w_trans = std::max({w_trans, std::abs(r.x3 - p3), std::abs(r.x4 - p4)});
            const double pred = r.psi1 * Th[0] + r.psi2 * Th[1] + r.psi3 * Th[2]
                                + r.psi4 * Th[3] + r.psi5 * Th[4];
            w_reg = std::max(w_reg, std::abs(r.yE - pred));
        }
        rep.checks.push_back(abs_check("transition_identity", w_trans, kTolTransition));
        rep.checks.push_back(abs_check("regression_consistency", w_reg, kTolRegression));

        // det Phi must track exp of the integrated trace. The allowance adds
        // a rounding floor proportional to the products entering the 2x2
        // determinant, which dominates when Phi is ill-conditioned.
        std::vector<double> tr(recs.size());
        for (std::size_t k = 0; k < recs.size(); ++k) tr[k] = recs[k].A11 + recs[k].A22;
        const std::vector<double> itr = cumulative_integral(tr, sc.h);
        double w_li = 0.0;
        for (std::size_t k = 0; k < recs.size(); ++k) {
            const Record& r = recs[k];
            const double e = std::exp(itr[k]);
            const double allow = kTolLiouvilleRel * std::abs(e)
                                 + kLiouvilleDetFloor * (std::abs(r.phi11 * r.phi22)
                                                         + std::abs(r.phi12 * r.phi21));
            w_li = std::max(w_li, std::abs(r.det_phi - e) / allow);
        }
        rep.checks.push_back(ratio_check("transition_determinant", w_li));
    }

    if (sc.drem_enabled) {
        // Both mixing checks are scaled by the magnitude of the products the
        // cofactor expansion sums over (entries^5, resp. entries^4 * data):
        // near-dependent rows cancel heavily, so that term scale — not the
        // much smaller result — is what rounding is relative to.
        double w_mixid = 0.0;
        double w_routes = 0.0;
        for (const Record& r : recs) {
            Matrix5d psi;
            psi << r.psi1, r.psi2, r.psi3, r.psi4, r.psi5,
                   r.f22, r.f23, r.f24, r.f25, r.f26,
                   r.f32, r.f33, r.f34, r.f35, r.f36,
                   r.f42, r.f43, r.f44, r.f45, r.f46,
                   r.f52, r.f53, r.f54, r.f55, r.f56;
            const Matrix5d adj = adjugate5(psi);
            const double det = det5(psi);
            const Matrix5d dev = adj * psi - det * Matrix5d::Identity();
            const double pm = psi.cwiseAbs().maxCoeff();
            const double p5 = pm * pm * pm * pm * pm;
            w_mixid = std::max(w_mixid,
                               dev.cwiseAbs().maxCoeff() / ((1.0 + p5) * kTolMixIdentity));
            w_routes = std::max(w_routes, r.mix_dev / ((1.0 + r.mix_scale) * kTolMixRoutes));
        }
        rep.checks.push_back(ratio_check("mixing_identity", w_mixid));
        rep.checks.push_back(ratio_check("mixing_route_agreement", w_routes));

        std::vector<double> deltas(recs.size());
        for (std::size_t k = 0; k < recs.size(); ++k) deltas[k] = recs[k].Delta;
        const double acc = excitation_integral(deltas, sc.h);
        rep.checks.push_back(abs_check("excitation_accumulation",
                                       std::abs(acc - recs.back().int_Delta_sq),
                                       kTolExcitation * (1.0 + std::abs(acc))));

        // After the slowest filter has settled, each scalar estimator error
        // must follow its excitation-weighted exponential decay. Deep decay
        // beyond the recoverable range only requires both sides at the floor.
        const double t_settle = 5.0 / *std::min_element(sc.d.begin(), sc.d.end());
        const double th1 = recs.front().x3;
        const double th2 = recs.front().x4;
        const double err0[2] = {std::abs(recs.front().th1_hat - th1),
                                std::abs(recs.front().th2_hat - th2)};
        const double gains[2] = {sc.gamma1, sc.gamma2};
        double w_decay = 0.0;
        for (const Record& r : recs) {
            if (r.t < t_settle - 1e-12) continue;
            const double est[2] = {r.th1_hat, r.th2_hat};
            const double tru[2] = {th1, th2};
            for (int k = 0; k < 2; ++k) {
                const double err = std::abs(est[k] - tru[k]);
                const double pred = std::exp(-gains[k] * r.int_Delta_sq) * err0[k];
                const double floor = kDecayFloorRel * err0[k] + kDecayFloorAbs;
                double ratio;
                if (pred >= floor)
                    ratio = std::abs(err - pred) / (kTolDecayRel * pred);
                else
                    ratio = err / floor;
                w_decay = std::max(w_decay, ratio);
            }
        }
        rep.checks.push_back(ratio_check("estimator_decay_law", w_decay));
    }

    return rep;
}

std::string report_to_json(const RunReport& r) {
    ordered_json j;
    j["name"] = r.name;
    j["horizon"] = r.horizon;
    j["threshold"] = r.threshold;
    j["hold"] = r.hold;
    j["observers"] = ordered_json::array();
    for (const ObserverReport& o : r.observers) {
        ordered_json oj;
        oj["observer"] = o.observer;
        oj["gain"] = o.gain;
        oj["converged"] = o.converged;
        oj["convergence_time"] = o.converged ? ordered_json(o.convergence_time)
                                             : ordered_json(nullptr);
        oj["terminal_error"] = num_or_null(o.terminal_error);
        j["observers"].push_back(oj);
    }
    j["int_delta_sq"] = num_or_null(r.int_delta_sq);
    j["min_abs_delta"] = num_or_null(r.min_abs_delta);
    j["max_cond_phi"] = num_or_null(r.max_cond_phi);
    j["checks"] = ordered_json::array();
    for (const CheckResult& c : r.checks) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["worst"] = num_or_null(c.worst);
        cj["tolerance"] = c.tolerance;
        j["checks"].push_back(cj);
    }
    return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("report is not valid JSON: ") + e.what());
    }
    RunReport r;
    r.name = str_from(j, "name");
    r.horizon = num_from(j, "horizon");
    r.threshold = num_from(j, "threshold");
    r.hold = num_from(j, "hold");
    const auto obs = j.find("observers");
    if (obs == j.end() || !obs->is_array())
        throw ConfigError("report field missing or not an array: observers");
    for (const ordered_json& oj : *obs) {
        ObserverReport o;
        o.observer = str_from(oj, "observer");
        o.gain = num_from(oj, "gain");
        o.converged = bool_from(oj, "converged");
        const double ct = num_from(oj, "convergence_time");
        o.convergence_time = o.converged ? ct : kInf;
        o.terminal_error = num_from(oj, "terminal_error");
        r.observers.push_back(o);
    }
    r.int_delta_sq = num_from(j, "int_delta_sq");
    r.min_abs_delta = num_from(j, "min_abs_delta");
    r.max_cond_phi = num_from(j, "max_cond_phi");
    const auto chk = j.find("checks");
    if (chk == j.end() || !chk->is_array())
        throw ConfigError("report field missing or not an array: checks");
    for (const ordered_json& cj : *chk) {
        CheckResult c;
        c.name = str_from(cj, "name");
        c.passed = bool_from(cj, "passed");
        c.worst = num_from(cj, "worst");
        c.tolerance = num_from(cj, "tolerance");
        r.checks.push_back(c);
    }
    return r;
}

std::string compare_report(const std::vector<RunReport>& reports) {
    if (reports.empty()) throw InvalidParams("compare_report requires at least one report");

    std::size_t name_w = 4;
    for (const RunReport& r : reports) name_w = std::max(name_w, r.name.size());

    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(name_w + 2)) << "run"
       << std::setw(11) << "observer" << std::setw(12) << "gain"
       << std::setw(6) << "conv" << std::setw(12) << "time_s"
       << "terminal\n";

    const auto fmt_sci = [](double v) {
        std::ostringstream s;
        s << std::scientific << std::setprecision(3) << v;
        return s.str();
    };

    double best_drem = kInf;
    double best_grad = kInf;
    std::vector<std::string> notes;

    for (const RunReport& r : reports) {
        for (const ObserverReport& o : r.observers) {
            os << std::left << std::setw(static_cast<int>(name_w + 2)) << r.name
               << std::setw(11) << o.observer << std::setw(12) << fmt_sci(o.gain)
               << std::setw(6) << (o.converged ? "yes" : "no");
            if (o.converged) {
                std::ostringstream ts;
                ts << std::fixed << std::setprecision(4) << o.convergence_time;
                os << std::setw(12) << ts.str();
            } else {
                os << std::setw(12) << "-";
            }
            os << fmt_sci(o.terminal_error) << "\n";

            if (o.observer == "drem" && o.converged)
                best_drem = std::min(best_drem, o.convergence_time);
            if (o.observer == "gradient" && o.converged)
                best_grad = std::min(best_grad, o.convergence_time);
            if (o.observer == "overparam" && !o.converged) {
                std::ostringstream n;
                n << "note: overparameterized estimator in '" << r.name
                  << "' did not converge; terminal consistency error "
                  << fmt_sci(o.terminal_error);
                notes.push_back(n.str());
            }
        }
    }

    if (std::isfinite(best_drem) && std::isfinite(best_grad)) {
        std::ostringstream n;
        n << std::fixed << std::setprecision(4);
        if (best_drem < best_grad)
            n << "note: mixing estimator outpaces the direct state observer ("
              << best_drem << " s vs " << best_grad << " s)";
        else
            n << "note: direct state observer matched or outpaced the mixing estimator ("
              << best_grad << " s vs " << best_drem << " s)";
        notes.push_back(n.str());
    }

    for (const std::string& n : notes) os << n << "\n";
    return os.str();
}

}  // namespace pmuobs
