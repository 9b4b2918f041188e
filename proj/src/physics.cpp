#include "oedg/physics.hpp"

#include "oedg/errors.hpp"

#include <cmath>

namespace oedg {

State Model::normal_flux(const State& u, Point n) const {
    State f1{}, f2{};
    flux(u, f1, f2);
    State out{};
    for (int c = 0; c < components(); ++c) out[c] = f1[c] * n.x + f2[c] * n.y;
    return out;
}

void LinearAdvection::flux(const State& u, State& f1, State& f2) const {
    f1[0] = a1_ * u[0];
    f2[0] = a2_ * u[0];
}

double LinearAdvection::wavespeed(const State&, Point n) const { return std::abs(a1_ * n.x + a2_ * n.y); }

void Burgers::flux(const State& u, State& f1, State& f2) const {
    f1[0] = f2[0] = 0.5 * u[0] * u[0];
}

double Burgers::wavespeed(const State& u, Point n) const { return std::abs(u[0] * (n.x + n.y)); }

double Euler::internal_energy(const State& u) const {
    return u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0];
}

double Euler::pressure(const State& u) const { return (gamma_ - 1.0) * internal_energy(u); }

bool Euler::admissible(const State& u) const {
    return u[0] > 0.0 && std::isfinite(u[0]) && internal_energy(u) > 0.0;
}

State Euler::from_primitive(double rho, double v1, double v2, double p) const {
    return {rho, rho * v1, rho * v2, p / (gamma_ - 1.0) + 0.5 * rho * (v1 * v1 + v2 * v2)};
}

void Euler::flux(const State& u, State& f1, State& f2) const {
    if (!(u[0] > 0.0)) throw AdmissibilityError("non-positive density in flux evaluation");
    const double v1 = u[1] / u[0], v2 = u[2] / u[0];
    const double p = pressure(u);
    f1 = {u[1], u[1] * v1 + p, u[2] * v1, (u[3] + p) * v1};
    f2 = {u[2], u[1] * v2, u[2] * v2 + p, (u[3] + p) * v2};
}

double Euler::wavespeed(const State& u, Point n) const {
    if (!(u[0] > 0.0)) throw AdmissibilityError("non-positive density in wave speed");
    const double p = pressure(u);
    if (!(p >= 0.0)) throw AdmissibilityError("negative pressure in wave speed");
    return std::abs((u[1] * n.x + u[2] * n.y) / u[0]) + std::sqrt(gamma_ * p / u[0]);
}

void ScaledModel::flux(const State& u, State& f1, State& f2) const {
    base_.flux(u, f1, f2);
    for (int c = 0; c < components(); ++c) {
        f1[c] *= scale_;
        f2[c] *= scale_;
    }
}

State lf_flux(const Model& model, const State& u_int, const State& u_ext, Point n, double alpha) {
    State fi = model.normal_flux(u_int, n), fe = model.normal_flux(u_ext, n);
    State out{};
    for (int c = 0; c < model.components(); ++c)
        out[c] = 0.5 * (fi[c] + fe[c] - alpha * (u_ext[c] - u_int[c]));
    return out;
}

State rotate_state(const State& u, double angle) {
    const double cs = std::cos(angle), sn = std::sin(angle);
    return {u[0], cs * u[1] + sn * u[2], -sn * u[1] + cs * u[2], u[3]};
}

State reflect_state(const State& u, Point n) {
    const double mn = u[1] * n.x + u[2] * n.y;
    return {u[0], u[1] - 2.0 * mn * n.x, u[2] - 2.0 * mn * n.y, u[3]};
}

std::unique_ptr<Model> make_model(const std::string& name) {
    if (name == "advection") return std::make_unique<LinearAdvection>();
    if (name == "burgers") return std::make_unique<Burgers>();
    if (name == "euler") return std::make_unique<Euler>();
    throw ConfigError("unknown model '" + name + "'");
}

}  // namespace oedg
