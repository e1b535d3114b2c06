#pragma once

#include <Eigen/Dense>

namespace pmuobs {

// Physical constants of the synchronous machine, per-unit except time
// constants (s) and omega0 (rad/s).
struct MachineParams {
    double D = 0.0;      // damping factor
    double H = 0.0;      // inertia constant, s
    double Td0p = 0.0;   // d-axis transient open-circuit time constant, s
    double Tq0p = 0.0;   // q-axis transient open-circuit time constant, s
    double xd = 0.0;     // d-axis reactance
    double xdp = 0.0;    // d-axis transient reactance
    double xq = 0.0;     // q-axis reactance
    double xqp = 0.0;    // q-axis transient reactance
    double omega0 = 0.0; // nominal synchronous speed, rad/s
};

// Rate coefficients of the flux-decay model, all strictly positive.
struct DerivedCoefficients {
    double a0 = 0.0;
    double b0 = 0.0;
    double a1 = 0.0;
    double b1 = 0.0;
    double c1 = 0.0;
    double a2 = 0.0;
    double b2 = 0.0;
};

// x = (rotor angle delta [rad], speed deviation omega [rad/s],
//      d-axis internal voltage E_d' [pu], q-axis internal voltage E_q' [pu]).
struct PlantState {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
    double x4 = 0.0;
};

// u = (mechanical power, field voltage); the bus phasor (y1_bus, y2_bus) is
// exogenous -- in a single-machine-infinite-bus run it is supplied, not solved.
struct Inputs {
    double u1 = 0.0;      // mechanical power P_m, pu
    double u2 = 0.0;      // field voltage E_f, pu
    double y1_bus = 0.0;  // bus voltage phase, rad
    double y2_bus = 0.0;  // bus voltage magnitude, pu (> 0)
};

// Validates MachineParams (positivity, xd > xdp, xq > xqp, xdp == xqp) and
// forms the rate coefficients. Throws InvalidParams on violation.
DerivedCoefficients derive_coefficients(const MachineParams& p);

// Validates positivity of a directly supplied coefficient set.
void validate_coefficients(const DerivedCoefficients& c);

// Right-hand side of the fourth-order flux-decay model. y5 is the electrical
// power computed from the current state by the PMU map; x_qp is accepted for
// signature symmetry with the measurement-side operations.
PlantState plant_rhs(const PlantState& x, const Inputs& u,
                     const DerivedCoefficients& c, double y5, double x_qp);

}  // namespace pmuobs
