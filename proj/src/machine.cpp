#include "pmuobs/machine.hpp"

#include <cmath>
#include <sstream>

#include "pmuobs/errors.hpp"

namespace pmuobs {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "machine parameter " << name << " must be strictly positive, got " << v;
        throw InvalidParams(os.str());
    }
}

}  // namespace

DerivedCoefficients derive_coefficients(const MachineParams& p) {
    require_positive(p.D, "D");
    require_positive(p.H, "H");
    require_positive(p.Td0p, "Td0p");
    require_positive(p.Tq0p, "Tq0p");
    require_positive(p.xd, "xd");
    require_positive(p.xdp, "xdp");
    require_positive(p.xq, "xq");
    require_positive(p.xqp, "xqp");
    require_positive(p.omega0, "omega0");
    if (!(p.xd > p.xdp))
        throw InvalidParams("xd must exceed xdp (b1 would not be positive)");
    if (!(p.xq > p.xqp))
        throw InvalidParams("xq must exceed xqp (b2 would not be positive)");
    if (p.xdp != p.xqp)
        throw InvalidParams("xdp and xqp must be equal (transient saliency neglected)");

    DerivedCoefficients c;
    c.a0 = p.omega0 * p.D / (2.0 * p.H);
    c.b0 = p.omega0 / (2.0 * p.H);
    c.a1 = (1.0 / p.Td0p) * (p.xd / p.xdp);
    c.b1 = (1.0 / p.Td0p) * (p.xd - p.xdp) / p.xdp;
    c.c1 = 1.0 / p.Td0p;
    c.a2 = (1.0 / p.Tq0p) * (p.xq / p.xqp);
    c.b2 = (1.0 / p.Tq0p) * (p.xq - p.xqp) / p.xqp;
    validate_coefficients(c);
    return c;
}

void validate_coefficients(const DerivedCoefficients& c) {
    require_positive(c.a0, "a0");
    require_positive(c.b0, "b0");
    require_positive(c.a1, "a1");
    require_positive(c.b1, "b1");
    require_positive(c.c1, "c1");
    require_positive(c.a2, "a2");
    require_positive(c.b2, "b2");
}

PlantState plant_rhs(const PlantState& x, const Inputs& u,
                     const DerivedCoefficients& c, double y5, double /*x_qp*/) {
    const double beta = x.x1 - u.y1_bus;
    PlantState dx;
    dx.x1 = x.x2;
    dx.x2 = -c.a0 * x.x2 + c.b0 * (u.u1 - y5);
    dx.x3 = -c.a2 * x.x3 + c.b2 * u.y2_bus * std::sin(beta);
    dx.x4 = -c.a1 * x.x4 + c.b1 * u.y2_bus * std::cos(beta) + c.c1 * u.u2;
    return dx;
}

}  // namespace pmuobs
