#pragma once

#include "oedg/dg.hpp"

#include <functional>
#include <string>
#include <vector>

namespace oedg {

enum class RkKind { Ssp22, Ssp33, Ssp54 };

/// Shu-Osher form: u_i = sum_{j<i} (alpha_ij u_j + beta_ij dt L(u_j)), i = 1..stages.
struct RkScheme {
    RkKind kind;
    std::string name;
    double c_ssp;
    std::vector<std::vector<double>> alpha, beta;
    std::vector<double> stage_time;  // c_j of u_j, j = 0..stages-1

    int stages() const { return static_cast<int>(alpha.size()); }
    static RkScheme make(RkKind kind);
};

RkKind parse_rk(const std::string& s);
/// The RK scheme used for degree k in the accuracy tests: (2,2), (3,3), (5,4), (5,4).
RkKind default_rk_for_degree(int k);

using ResidualFn = std::function<void(const ModalState& u, double t, ModalState& out)>;
using StageHook = std::function<void(ModalState& u, double t)>;

/// One step; hook (if set) is applied to every stage value including the final one.
void advance(const RkScheme& scheme, ModalState& u, double t, double dt, const ResidualFn& residual,
             const StageHook& hook = {});

/// (C_SSP / alpha) * min_K |K| / ((2k+1) * perimeter).
double generic_timestep(const Mesh& mesh, double alpha, double c_ssp, int k);
/// (C_SSP / 9) * (min_K |K| / (3 mean edge length))^(5/4), used for the degree-4 accuracy runs.
double p4_reproduction_timestep(const Mesh& mesh, double c_ssp);

}  // namespace oedg
