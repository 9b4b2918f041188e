#pragma once

#include "oedg/dg.hpp"

#include <vector>

namespace oedg {

enum class OeMode { Off, ComponentWise, RotationInvariant };

struct OeOptions {
    OeMode mode = OeMode::ComponentWise;
    /// When false, an inadmissible endpoint trace falls back to its cell average for the wave speed.
    bool strict_traces = true;
};

/// A^{k,j} = (2j+1) / ((2k-1) j!).
double jump_constant(int k, int j);

/// Per-component global deviation max |u_h - mean| over all volume nodes.
struct Deviation {
    State mean{};
    State max_dev{};
    double momentum_dev = 0.0;   // max Euclidean |m - mean m|
    double momentum_mean = 0.0;  // Euclidean |mean m|
};
Deviation global_deviation(const DgSpace& space, const ModalState& u, bool with_momentum);

/// Damping rates sigma_K^j, stored [cell][j][component], j = 0..k.
struct Damping {
    int degree = 0, components = 0;
    std::vector<double> sigma;
    double at(std::size_t c, int j, int comp) const {
        return sigma[(c * (degree + 1) + j) * components + comp];
    }
    double& at(std::size_t c, int j, int comp) { return sigma[(c * (degree + 1) + j) * components + comp]; }
};

Damping compute_damping(const DgSpace& space, const Model& model, const BoundarySpec& bc, const ModalState& u,
                        double time, const OeOptions& opts);

/// Multiplies the degree-m block by exp(-dt * sum_{j<=m} sigma^j). Mode 0 is left untouched.
void apply_damping(ModalState& u, const Damping& damping, double dt);

void apply_oe(const DgSpace& space, const Model& model, const BoundarySpec& bc, ModalState& u, double dt,
              double time, const OeOptions& opts);

}  // namespace oedg
