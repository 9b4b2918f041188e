#pragma once

#include "oedg/basis.hpp"
#include "oedg/mesh.hpp"
#include "oedg/physics.hpp"

#include <functional>
#include <map>
#include <vector>

namespace oedg {

/// Modal coefficients stored as [cell][mode][component].
class ModalState {
public:
    ModalState() = default;
    ModalState(std::size_t cells, int degree, int components)
        : cells_(cells), degree_(degree), modes_(num_modes(degree)), comps_(components),
          data_(cells * modes_ * components, 0.0) {}

    std::size_t cells() const { return cells_; }
    int degree() const { return degree_; }
    int modes() const { return modes_; }
    int components() const { return comps_; }

    double& at(std::size_t c, int mode, int comp) { return data_[(c * modes_ + mode) * comps_ + comp]; }
    double at(std::size_t c, int mode, int comp) const { return data_[(c * modes_ + mode) * comps_ + comp]; }
    State average(std::size_t c) const;

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t cells_ = 0;
    int degree_ = 0, modes_ = 0, comps_ = 0;
    std::vector<double> data_;
};

/// Basis tables at the volume nodes, edge Gauss points and vertices for a fixed degree.
class DgSpace {
public:
    DgSpace(const Mesh& mesh, int degree);

    const Mesh& mesh() const { return *mesh_; }
    int degree() const { return degree_; }
    int modes() const { return modes_; }
    const QuadRule& volume_rule() const { return *vol_; }
    const LineRule& edge_rule() const { return *edge_; }

    /// Mode values at volume node q.
    const double* psi_volume(std::size_t q) const { return &psi_vol_[q * modes_]; }
    /// Reference gradient (d/dxi, d/deta) of mode values at volume node q, interleaved.
    const double* grad_volume(std::size_t q) const { return &grad_vol_[2 * q * modes_]; }
    /// Mode values at Gauss point g of local edge e; reversed uses parameter 1 - s.
    const double* psi_edge(int e, std::size_t g, bool reversed) const {
        return &psi_edge_[((reversed * 3 + e) * edge_->size() + g) * modes_];
    }
    const double* psi_vertex(int v) const { return &psi_vertex_[v * modes_]; }

    State evaluate(const ModalState& u, std::size_t c, const double* psi) const;
    State evaluate(const ModalState& u, std::size_t c, double xi, double eta) const;
    Point volume_point(std::size_t c, std::size_t q) const;
    Point edge_point(std::size_t c, int e, std::size_t g) const;

private:
    const Mesh* mesh_;
    int degree_, modes_;
    const QuadRule* vol_;
    const LineRule* edge_;
    std::vector<double> psi_vol_, grad_vol_, psi_edge_, psi_vertex_;
};

enum class GhostKind { Outflow, Wall, Prescribed, Custom };

/// Exterior state on a physical boundary. Prescribed ignores the interior state.
struct BoundaryRule {
    GhostKind kind = GhostKind::Outflow;
    std::function<State(Point x, double t, const State& u_int)> state;

    State ghost(const State& u_int, Point x, Point n, double t) const;
};

struct BoundarySpec {
    std::map<BoundaryKind, BoundaryRule> rules;
    const BoundaryRule& rule(BoundaryKind kind) const;
};

ModalState project(const DgSpace& space, int components, const std::function<State(Point)>& f);

struct ResidualInput {
    const DgSpace& space;
    const Model& model;
    const BoundarySpec& boundary;
    double alpha;
    double time;
};

/// Writes dU/dt of the semi-discrete scheme into rhs.
void compute_residual(const ResidualInput& in, const ModalState& u, ModalState& rhs);

/// Global LF viscosity from cell averages against every edge normal.
double alpha_from_averages(const DgSpace& space, const Model& model, const ModalState& u);
/// Global LF viscosity from traces at edge Gauss points and vertices, ghosts included.
double alpha_from_traces(const DgSpace& space, const Model& model, const BoundarySpec& bc, const ModalState& u,
                         double time);

}  // namespace oedg
