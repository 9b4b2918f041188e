#pragma once

#include "oedg/mesh.hpp"

#include <array>
#include <memory>
#include <string>

namespace oedg {

constexpr int kMaxComponents = 4;
using State = std::array<double, kMaxComponents>;

class Model {
public:
    virtual ~Model() = default;
    virtual int components() const = 0;
    virtual std::string name() const = 0;
    virtual void flux(const State& u, State& f1, State& f2) const = 0;
    /// Spectral radius of the normal flux Jacobian.
    virtual double wavespeed(const State& u, Point n) const = 0;
    virtual bool admissible(const State&) const { return true; }
    virtual bool is_euler() const { return false; }

    State normal_flux(const State& u, Point n) const;
};

/// u_t + a1 u_x + a2 u_y = 0.
class LinearAdvection final : public Model {
public:
    LinearAdvection(double a1 = 1.0, double a2 = 1.0) : a1_(a1), a2_(a2) {}
    int components() const override { return 1; }
    std::string name() const override { return "advection"; }
    void flux(const State& u, State& f1, State& f2) const override;
    double wavespeed(const State& u, Point n) const override;

private:
    double a1_, a2_;
};

/// u_t + (u^2/2)_x + (u^2/2)_y = 0.
class Burgers final : public Model {
public:
    int components() const override { return 1; }
    std::string name() const override { return "burgers"; }
    void flux(const State& u, State& f1, State& f2) const override;
    double wavespeed(const State& u, Point n) const override;
};

/// Compressible Euler, conserved variables (rho, m1, m2, E).
class Euler final : public Model {
public:
    explicit Euler(double gamma = 1.4) : gamma_(gamma) {}
    int components() const override { return 4; }
    std::string name() const override { return "euler"; }
    void flux(const State& u, State& f1, State& f2) const override;
    double wavespeed(const State& u, Point n) const override;
    bool admissible(const State& u) const override;
    bool is_euler() const override { return true; }

    double gamma() const { return gamma_; }
    double internal_energy(const State& u) const;  // E - |m|^2 / (2 rho)
    double pressure(const State& u) const;
    State from_primitive(double rho, double v1, double v2, double p) const;

private:
    double gamma_;
};

/// Multiplies the flux (and hence all wave speeds) of another model by a constant.
class ScaledModel final : public Model {
public:
    ScaledModel(const Model& base, double scale) : base_(base), scale_(scale) {}
    int components() const override { return base_.components(); }
    std::string name() const override { return base_.name(); }
    void flux(const State& u, State& f1, State& f2) const override;
    double wavespeed(const State& u, Point n) const override { return scale_ * base_.wavespeed(u, n); }
    bool admissible(const State& u) const override { return base_.admissible(u); }
    bool is_euler() const override { return base_.is_euler(); }

private:
    const Model& base_;
    double scale_;
};

/// Lax-Friedrichs numerical flux along n, oriented from the interior state.
State lf_flux(const Model& model, const State& u_int, const State& u_ext, Point n, double alpha);

/// Momentum rotation u -> T u with M = [[cos, sin], [-sin, cos]].
State rotate_state(const State& u, double angle);
/// Mirror the momentum about the wall with unit normal n.
State reflect_state(const State& u, Point n);

std::unique_ptr<Model> make_model(const std::string& name);

}  // namespace oedg
