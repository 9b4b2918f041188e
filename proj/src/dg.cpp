#include "oedg/dg.hpp"

#include "oedg/errors.hpp"
#include "oedg/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace oedg {

State ModalState::average(std::size_t c) const {
    State s{};
    for (int k = 0; k < comps_; ++k) s[k] = at(c, 0, k);
    return s;
}

DgSpace::DgSpace(const Mesh& mesh, int degree)
    : mesh_(&mesh), degree_(degree), modes_(num_modes(degree)), vol_(&interior_rule(degree)),
      edge_(&gauss_rule(degree + 1)) {
    for (std::size_t q = 0; q < vol_->size(); ++q)
        for (int m = 0; m < modes_; ++m) {
            psi_vol_.push_back(eval_basis(m, vol_->xi[q], vol_->eta[q]));
            auto g = grad_basis(m, vol_->xi[q], vol_->eta[q]);
            grad_vol_.push_back(g[0]);
            grad_vol_.push_back(g[1]);
        }
    for (int rev = 0; rev < 2; ++rev)
        for (int e = 0; e < 3; ++e)
            for (std::size_t g = 0; g < edge_->size(); ++g) {
                double s = rev ? 1.0 - edge_->s[g] : edge_->s[g];
                auto p = oedg::edge_point(e, s);
                for (int m = 0; m < modes_; ++m) psi_edge_.push_back(eval_basis(m, p[0], p[1]));
            }
    static constexpr double verts[3][2] = {{0, 0}, {1, 0}, {0, 1}};
    for (const auto& v : verts)
        for (int m = 0; m < modes_; ++m) psi_vertex_.push_back(eval_basis(m, v[0], v[1]));
}

State DgSpace::evaluate(const ModalState& u, std::size_t c, const double* psi) const {
    State s{};
    const int d = u.components();
    const double* coef = &u.data()[c * modes_ * d];
    for (int m = 0; m < modes_; ++m)
        for (int k = 0; k < d; ++k) s[k] += coef[m * d + k] * psi[m];
    return s;
}

State DgSpace::evaluate(const ModalState& u, std::size_t c, double xi, double eta) const {
    double psi[kMaxModes];
    for (int m = 0; m < modes_; ++m) psi[m] = eval_basis(m, xi, eta);
    return evaluate(u, c, psi);
}

Point DgSpace::volume_point(std::size_t c, std::size_t q) const {
    return mesh_->to_physical(c, vol_->xi[q], vol_->eta[q]);
}

Point DgSpace::edge_point(std::size_t c, int e, std::size_t g) const {
    auto p = oedg::edge_point(e, edge_->s[g]);
    return mesh_->to_physical(c, p[0], p[1]);
}

State BoundaryRule::ghost(const State& u_int, Point x, Point n, double t) const {
    switch (kind) {
    case GhostKind::Outflow: return u_int;
    case GhostKind::Wall: return reflect_state(u_int, n);
    case GhostKind::Prescribed:
    case GhostKind::Custom: return state(x, t, u_int);
    }
    return u_int;
}

const BoundaryRule& BoundarySpec::rule(BoundaryKind kind) const {
    auto it = rules.find(kind);
    if (it != rules.end()) return it->second;
    static const BoundaryRule outflow{GhostKind::Outflow, {}};
    static const BoundaryRule wall{GhostKind::Wall, {}};
    if (kind == BoundaryKind::Outflow) return outflow;
    if (kind == BoundaryKind::Wall) return wall;
    BoundaryTag tag{kind, -1};
    throw ConfigError("no boundary rule for tag " + tag.str());
}

ModalState project(const DgSpace& space, int components, const std::function<State(Point)>& f) {
    const Mesh& mesh = space.mesh();
    const QuadRule& rule = interior_rule(kMaxDegree);
    const int modes = space.modes();
    ModalState u(mesh.num_cells(), space.degree(), components);
    std::vector<double> psi(rule.size() * modes);
    for (std::size_t q = 0; q < rule.size(); ++q)
        for (int m = 0; m < modes; ++m) psi[q * modes + m] = eval_basis(m, rule.xi[q], rule.eta[q]);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        for (std::size_t q = 0; q < rule.size(); ++q) {
            State v = f(mesh.to_physical(c, rule.xi[q], rule.eta[q]));
            for (int m = 0; m < modes; ++m)
                for (int k = 0; k < components; ++k) u.at(c, m, k) += rule.w[q] * v[k] * psi[q * modes + m];
        }
        for (int m = 0; m < modes; ++m)
            for (int k = 0; k < components; ++k) u.at(c, m, k) *= 0.5 / basis_norm(m);
    }
    return u;
}

void compute_residual(const ResidualInput& in, const ModalState& u, ModalState& rhs) {
    const DgSpace& space = in.space;
    const Mesh& mesh = space.mesh();
    const Model& model = in.model;
    const int d = model.components();
    const int modes = space.modes();
    const std::size_t ng = space.edge_rule().size();
    const auto& faces = mesh.faces();
    if (rhs.cells() != u.cells() || rhs.degree() != u.degree() || rhs.components() != d)
        rhs = ModalState(u.cells(), u.degree(), d);

    // Numerical fluxes along the left cell's outward normal.
    std::vector<State> face_flux(faces.size() * ng);
    parallel_for(faces.size(), [&](std::size_t f) {
        const Face& face = faces[f];
        const Point n = mesh.normal(face.left, face.left_edge);
        for (std::size_t g = 0; g < ng; ++g) {
            State ul = space.evaluate(u, face.left, space.psi_edge(face.left_edge, g, false));
            State ur = face.boundary()
                           ? in.boundary.rule(face.tag.kind)
                                 .ghost(ul, space.edge_point(face.left, face.left_edge, g), n, in.time)
                           : space.evaluate(u, face.right, space.psi_edge(face.right_edge, g, true));
            if (!model.admissible(ul)) throw AdmissibilityError("inadmissible edge trace", face.left);
            if (!model.admissible(ur))
                throw AdmissibilityError("inadmissible edge trace", face.boundary() ? face.left : face.right);
            face_flux[f * ng + g] = lf_flux(model, ul, ur, n, in.alpha);
        }
    });

    const QuadRule& vol = space.volume_rule();
    const LineRule& edge = space.edge_rule();
    parallel_for(mesh.num_cells(), [&](std::size_t c) {
        double* r = &rhs.data()[c * modes * d];
        std::fill(r, r + modes * d, 0.0);
        const auto& ji = mesh.inverse_jacobian(c);
        const double area = mesh.area(c);
        State f1{}, f2{};
        for (std::size_t q = 0; q < vol.size(); ++q) {
            State uq = space.evaluate(u, c, space.psi_volume(q));
            model.flux(uq, f1, f2);
            const double* grad = space.grad_volume(q);
            const double w = area * vol.w[q];
            for (int m = 0; m < modes; ++m) {
                const double gx = ji[0] * grad[2 * m] + ji[2] * grad[2 * m + 1];
                const double gy = ji[1] * grad[2 * m] + ji[3] * grad[2 * m + 1];
                for (int k = 0; k < d; ++k) r[m * d + k] += w * (f1[k] * gx + f2[k] * gy);
            }
        }
        for (int e = 0; e < 3; ++e) {
            const int f = mesh.face_of(c, e);
            const Face& face = faces[f];
            const bool left = face.left == static_cast<int>(c) && face.left_edge == e;
            const double scale = (left ? 1.0 : -1.0) * mesh.edge_length(c, e);
            for (std::size_t g = 0; g < ng; ++g) {
                const State& flux = face_flux[f * ng + g];
                const double* psi = space.psi_edge(e, g, !left);
                const double w = scale * edge.w[g];
                for (int m = 0; m < modes; ++m)
                    for (int k = 0; k < d; ++k) r[m * d + k] -= w * flux[k] * psi[m];
            }
        }
        for (int m = 0; m < modes; ++m) {
            const double inv_mass = 1.0 / (2.0 * area * basis_norm(m));
            for (int k = 0; k < d; ++k) r[m * d + k] *= inv_mass;
        }
    });
}

double alpha_from_averages(const DgSpace& space, const Model& model, const ModalState& u) {
    const Mesh& mesh = space.mesh();
    double alpha = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        State avg = u.average(c);
        for (int e = 0; e < 3; ++e) alpha = std::max(alpha, model.wavespeed(avg, mesh.normal(c, e)));
    }
    return alpha;
}

double alpha_from_traces(const DgSpace& space, const Model& model, const BoundarySpec& bc, const ModalState& u,
                         double time) {
    const Mesh& mesh = space.mesh();
    double alpha = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        for (int e = 0; e < 3; ++e) {
            const Point n = mesh.normal(c, e);
            const Face& face = mesh.faces()[mesh.face_of(c, e)];
            const BoundaryRule* rule = face.boundary() ? &bc.rule(face.tag.kind) : nullptr;
            auto visit = [&](const State& s, Point x) {
                alpha = std::max(alpha, model.wavespeed(s, n));
                if (rule) alpha = std::max(alpha, model.wavespeed(rule->ghost(s, x, n, time), n));
            };
            for (std::size_t g = 0; g < space.edge_rule().size(); ++g)
                visit(space.evaluate(u, c, space.psi_edge(e, g, false)), space.edge_point(c, e, g));
            // Endpoints are not limiter check nodes in every scheme; an inadmissible one carries no flux.
            for (int v : {(e + 1) % 3, (e + 2) % 3}) {
                const State s = space.evaluate(u, c, space.psi_vertex(v));
                if (model.admissible(s)) visit(s, mesh.vertex(c, v));
            }
        }
    }
    return alpha;
}

}  // namespace oedg
