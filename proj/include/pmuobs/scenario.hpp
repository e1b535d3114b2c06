#pragma once

#include <array>
#include <string>
#include <vector>

#include "pmuobs/baselines.hpp"
#include "pmuobs/drem.hpp"
#include "pmuobs/gpebo.hpp"
#include "pmuobs/machine.hpp"
#include "pmuobs/signals.hpp"

namespace pmuobs {

// Complete description of one deterministic run: plant constants, initial
// state, exogenous signals, which observers run and their gains, integration
// grid. Bit-identical scenarios produce bit-identical trajectories.
struct Scenario {
    DerivedCoefficients coeffs;
    double x_qp = 0.0;

    PlantState x0;

    PiecewiseConstant u1{0.0};
    PiecewiseConstant u2{0.0};
    PiecewiseConstant y1_bus{0.0};
    PiecewiseConstant y2_bus{1.0};

    bool drem_enabled = true;       // GPEBO extension + DREM estimator
    bool overparam_enabled = false; // overparameterized gradient baseline
    bool gradient_enabled = false;  // gradient-descent state observer

    double gamma1 = 1.0;
    double gamma2 = 1.0;
    bool drem_full_diagnostics = true;
    double overparam_gain = 1e6;     // Gamma = overparam_gain * I5
    double gradient_gain = 10.0;     // Gamma2 = gradient_gain * I2
    double gradient_init_offset = 0.0;
    AngleMode angle_mode = AngleMode::Arcsin;

    std::array<double, 4> d{2.0, 4.0, 6.0, 8.0};

    double h = 1e-3;
    double T = 0.0;

    // Throws InvalidParams on any violated invariant.
    void validate() const;
    // Number of integration steps: floor(T/h) with a relative slack so that
    // horizons that are integer multiples of h up to rounding stay exact.
    int steps() const;
    bool extension_enabled() const { return drem_enabled || overparam_enabled; }
};

// One grid point of a run. Fields for disabled observers hold quiet NaN.
struct Record {
    double t;
    double x1, x2, x3, x4;
    double u1, u2;
    double y1, y2, y3, y4, y5, y6;
    double z0, Y1, Y2, Y3;
    double A11, A12, A21, A22;
    double xi1, xi2;
    double phi11, phi12, phi21, phi22;
    double det_phi, cond_phi;
    double psi1, psi2, psi3, psi4, psi5;
    double yE;
    // Filter states: pole-major, channel-minor (channel 0 filters yE).
    double f21, f22, f23, f24, f25, f26;
    double f31, f32, f33, f34, f35, f36;
    double f41, f42, f43, f44, f45, f46;
    double f51, f52, f53, f54, f55, f56;
    double Delta, int_Delta_sq;
    double calY1, calY2, calY3, calY4, calY5;
    double mix_dev, mix_scale;
    double th1_hat, th2_hat;
    double thf1, thf2, thf3, thf4, thf5;
    double x1_hat, x3_hat, x4_hat;
    double x1_err, x3_err, x4_err;
    double op1, op2, op3, op4, op5;
    double e1, e2, e3;
    double ealt1, ealt2, ealt3;
    double gx3_hat, gx4_hat;
    double gx3_err, gx4_err;
};

struct Trajectory {
    Scenario scenario;
    std::vector<Record> records;
    std::vector<std::string> warnings;
};

// Integrates plant and enabled observers as one composite vector field with
// fixed-step RK4 and records every grid point. The overparameterized
// baseline advances by an exact frozen-regressor step between grid points
// (see overparam_exact_step). Errors carry the offending time.
Trajectory run_scenario(const Scenario& s);

}  // namespace pmuobs
