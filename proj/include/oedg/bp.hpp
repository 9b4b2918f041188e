#pragma once

#include "oedg/dg.hpp"

#include <array>
#include <string>
#include <vector>

namespace oedg {

enum class BpScheme { Off, Classical, Optimal };

struct InternalNode {
    std::array<double, 3> bary;  // with respect to the cell's local vertices
    Point point;
    double weight;
};

/// Positive rewriting of the cell average as edge-Gauss averages plus internal point values.
struct ConvexDecomposition {
    BpScheme scheme = BpScheme::Optimal;
    int degree = 1;
    SortedEdges edges;                         // sorted order l1 >= l2 >= l3
    std::array<double, 3> edge_weight{};       // w_i in sorted order
    std::vector<InternalNode> nodes;           // merged
    std::vector<InternalNode> raw_nodes;       // before merging coincident nodes
    double internal_mass = 0.0;                // 1 - sum w_i
    double cfl = 0.0;                          // C_BP

    /// Edge weight attached to local edge e.
    double weight_of_local_edge(int e) const;
};

ConvexDecomposition optimal_decomposition(const std::array<Point, 3>& tri, int k);
/// Edge weights and CFL constant of the classical decomposition; internal nodes are not constructed.
ConvexDecomposition classical_decomposition(const std::array<Point, 3>& tri, int k);

double optimal_cfl(const std::array<Point, 3>& tri, int k);
double classical_cfl(const std::array<Point, 3>& tri, int k);
double chen_shu_cfl(const std::array<Point, 3>& tri, int k);

std::array<Point, 3> cell_triangle(const Mesh& mesh, std::size_t c);

/// (C_SSP / alpha) * min_K C_K |K|.
double bp_timestep(const Mesh& mesh, double alpha, double c_ssp, BpScheme scheme, int k);

std::string to_string(BpScheme s);

class BpLimiter {
public:
    BpLimiter(const DgSpace& space, BpScheme scheme);

    BpScheme scheme() const { return scheme_; }

    /// Values at the check nodes; for k = 2 the last entry is the weighted internal state u*.
    std::vector<State> check_values(const ModalState& u, std::size_t c) const;

    void limit_euler(ModalState& u, const Euler& model) const;
    void limit_scalar(ModalState& u, double lower, double upper) const;

private:
    struct CellData {
        std::array<double, 3> weight;  // by local edge
        std::array<int, 2> vertices;   // k = 1 optimal: vertices opposite the two longest edges
        double internal_mass;
    };

    const DgSpace* space_;
    BpScheme scheme_;
    std::vector<CellData> cells_;
};

}  // namespace oedg
