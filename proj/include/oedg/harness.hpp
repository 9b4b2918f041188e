#pragma once

#include "oedg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace oedg {

struct Problem {
    std::string id;
    std::shared_ptr<const Model> model;
    /// Desk-scale mesh for an nx-by-ny resolution; empty when the problem needs a mesh file.
    std::function<Mesh(int nx, int ny)> make_mesh;
    int nx = 0, ny = 0;
    std::function<State(Point)> initial;
    std::function<State(Point, double)> exact;  // may be empty
    BoundarySpec boundary;
    double t_end = 0.0;
    std::optional<std::pair<double, double>> bounds;  // scalar maximum principle
    RkKind rk = RkKind::Ssp33;
};

std::vector<std::string> problem_ids();
Problem make_problem(const std::string& id);

struct ErrorNorms {
    double l1 = 0, l2 = 0, linf = 0;
};

/// Errors of component comp against exact(x), by cellwise quadrature with the degree-8 rule.
ErrorNorms error_norms(const DgSpace& space, const ModalState& u, const std::function<State(Point)>& exact,
                       int comp = 0);

struct ConvergenceRow {
    std::size_t cells;
    ErrorNorms err;
    ErrorNorms order;  // NaN on the first row
};

struct ConvergenceOptions {
    int k = 1;
    int levels = 4;
    OeMode oe = OeMode::ComponentWise;
    std::optional<RkKind> rk;     // default: by degree
    int base_n = 4;               // base mesh is base_n x base_n before refinement
    double jitter = 0.2;          // relative interior-vertex perturbation of the base mesh
    std::uint64_t seed = 1;
    StepRule step_rule = StepRule::Cfl;
};

std::vector<ConvergenceRow> convergence_study(const Problem& problem, const ConvergenceOptions& opts);

/// Seeded random triangles (counter-clockwise), including elongated ones.
std::vector<std::array<Point, 3>> random_triangles(std::size_t count, std::uint64_t seed);

struct RatioRange {
    double min = HUGE_VAL, max = -HUGE_VAL;
    void add(double v) {
        min = std::min(min, v);
        max = std::max(max, v);
    }
};

struct CflScan {
    RatioRange vs_classical, vs_chen_shu;
};
CflScan cfl_ratio_scan(const std::vector<std::array<Point, 3>>& triangles, int k);
CflScan cfl_ratio_scan(const Mesh& mesh, int k);

struct RotationOptions {
    int k = 1;
    double angle = std::numbers::pi / 4;
    OeMode oe = OeMode::RotationInvariant;
    BpScheme bp = BpScheme::Optimal;  // the jump data undershoots density without it
    int steps = 50;
    int n = 20;  // structured resolution
};

/// Max over steps of the cell-average difference (rho, v1, v2, p) between a run and its rotated copy.
double rotation_experiment(const Problem& problem, const RotationOptions& opts, std::vector<double>* history = nullptr);

/// Cell averages in primitive variables with velocity rotated by -angle.
std::vector<std::array<double, 4>> primitive_averages(const Euler& model, const ModalState& u, double unrotate);

}  // namespace oedg
