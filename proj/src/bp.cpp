#include "oedg/bp.hpp"

#include "oedg/errors.hpp"
#include "oedg/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace oedg {

namespace {

void check_degree(int k) {
    if (k != 1 && k != 2) throw ConfigError("bound-preserving decompositions exist for k = 1, 2 only");
}

InternalNode make_node(const std::array<Point, 3>& tri, std::array<double, 3> bary, double weight) {
    Point p = bary[0] * tri[0] + bary[1] * tri[1] + bary[2] * tri[2];
    return {bary, p, weight};
}

}  // namespace

double ConvexDecomposition::weight_of_local_edge(int e) const {
    for (int i = 0; i < 3; ++i)
        if (edges.local[i] == e) return edge_weight[i];
    return 0.0;
}

std::array<Point, 3> cell_triangle(const Mesh& mesh, std::size_t c) {
    return {mesh.vertex(c, 0), mesh.vertex(c, 1), mesh.vertex(c, 2)};
}

ConvexDecomposition optimal_decomposition(const std::array<Point, 3>& tri, int k) {
    check_degree(k);
    ConvexDecomposition dec;
    dec.scheme = BpScheme::Optimal;
    dec.degree = k;
    dec.edges = sort_edges(tri);
    const auto& l = dec.edges.length;
    // Local vertex opposite sorted edge i.
    const std::array<int, 3> v = dec.edges.local;

    if (k == 1) {
        const double s = l[0] + l[1];
        for (int i = 0; i < 3; ++i) dec.edge_weight[i] = 2.0 * l[i] / (3.0 * s);
        const double spread = l[0] + l[1] - 2.0 * l[2];
        const double omega = spread / (3.0 * s);
        if (spread > 0.0) {
            std::array<double, 3> bary{};
            bary[v[0]] = (l[0] - l[2]) / spread;
            bary[v[1]] = (l[1] - l[2]) / spread;
            dec.raw_nodes.push_back(make_node(tri, bary, omega));
        }
        dec.cfl = 2.0 / (3.0 * s);
    } else {
        const double lbar = (l[0] + l[1] + l[2]) / 3.0;
        const double lhat = std::sqrt(std::max(
            0.0, l[0] * l[0] + l[1] * l[1] + l[2] * l[2] - 2.0 / 3.0 * (l[0] * l[1] + l[1] * l[2] + l[2] * l[0])));
        for (int i = 0; i < 3; ++i) dec.edge_weight[i] = 2.0 * l[i] / (9.0 * lbar + 3.0 * lhat);
        const double omega = (lbar + lhat) / (6.0 * lbar + 2.0 * lhat);
        const double r = std::sqrt(3.0);
        const double c[2][3] = {
            {3 * l[0] + 3 * l[1] + r * l[1] - r * l[2], 6 * l[1] + r * l[2] - r * l[0],
             3 * l[1] + 3 * l[2] + r * l[0] - r * l[1]},
            {3 * l[0] + 3 * l[1] + r * l[2] - r * l[1], 6 * l[1] + r * l[0] - r * l[2],
             3 * l[1] + 3 * l[2] + r * l[1] - r * l[0]},
        };
        const double M[2][3][3][3] = {
            {{{6, 1, -2}, {1, 2 * r + 6, -r - 2}, {-2, -r - 2, 6}},
             {{6, -r - 2, -2}, {-r - 2, 12, r - 2}, {-2, r - 2, 6}},
             {{6, r - 2, -2}, {r - 2, 6 - 2 * r, 1}, {-2, 1, 6}}},
            {{{6, 1, -2}, {1, 6 - 2 * r, r - 2}, {-2, r - 2, 6}},
             {{6, r - 2, -2}, {r - 2, 12, -r - 2}, {-2, -r - 2, 6}},
             {{6, -r - 2, -2}, {-r - 2, 2 * r + 6, 1}, {-2, 1, 6}}},
        };
        const double denom = 18.0 * (lbar + lhat) * (l[1] + lhat);
        for (int s = 0; s < 2; ++s) {
            std::array<double, 3> bary{};
            for (int i = 0; i < 3; ++i) {
                double quad = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) quad += l[a] * M[s][i][a][b] * l[b];
                bary[v[i]] = (quad + 2.0 * c[s][i] * lhat) / denom;
            }
            dec.raw_nodes.push_back(make_node(tri, bary, omega));
        }
        dec.cfl = 2.0 / (9.0 * lbar + 3.0 * lhat);
    }

    dec.internal_mass = 1.0 - (dec.edge_weight[0] + dec.edge_weight[1] + dec.edge_weight[2]);
    for (const auto& node : dec.raw_nodes) {
        auto same = std::find_if(dec.nodes.begin(), dec.nodes.end(), [&](const InternalNode& n) {
            return std::hypot(n.point.x - node.point.x, n.point.y - node.point.y) <= 1e-12 * l[0];
        });
        if (same != dec.nodes.end()) same->weight += node.weight;
        else dec.nodes.push_back(node);
    }
    return dec;
}

ConvexDecomposition classical_decomposition(const std::array<Point, 3>& tri, int k) {
    check_degree(k);
    ConvexDecomposition dec;
    dec.scheme = BpScheme::Classical;
    dec.degree = k;
    dec.edges = sort_edges(tri);
    const int points = (k + 4) / 2;  // ceil((k+3)/2) Gauss-Lobatto points
    const double lobatto_end_weight = 1.0 / (points * (points - 1.0));
    for (auto& w : dec.edge_weight) w = 2.0 * lobatto_end_weight / 3.0;
    dec.internal_mass = 1.0 - 3.0 * dec.edge_weight[0];
    dec.cfl = classical_cfl(tri, k);
    return dec;
}

double optimal_cfl(const std::array<Point, 3>& tri, int k) { return optimal_decomposition(tri, k).cfl; }

double classical_cfl(const std::array<Point, 3>& tri, int k) {
    check_degree(k);
    const auto s = sort_edges(tri);
    const double lbar = (s.length[0] + s.length[1] + s.length[2]) / 3.0;
    return k == 1 ? 1.0 / (9.0 * lbar) : 1.0 / (27.0 * lbar);
}

double chen_shu_cfl(const std::array<Point, 3>& tri, int k) {
    check_degree(k);
    return 1.0 / (6.0 * sort_edges(tri).length[0]);
}

double bp_timestep(const Mesh& mesh, double alpha, double c_ssp, BpScheme scheme, int k) {
    if (mesh.num_cells() == 0) throw ConfigError("empty mesh");
    double m = HUGE_VAL;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto tri = cell_triangle(mesh, c);
        const double cfl = scheme == BpScheme::Classical ? classical_cfl(tri, k) : optimal_cfl(tri, k);
        m = std::min(m, cfl * mesh.area(c));
    }
    return c_ssp / alpha * m;
}

std::string to_string(BpScheme s) {
    switch (s) {
    case BpScheme::Off: return "off";
    case BpScheme::Classical: return "zxs";
    case BpScheme::Optimal: return "dcw";
    }
    return "?";
}

BpLimiter::BpLimiter(const DgSpace& space, BpScheme scheme) : space_(&space), scheme_(scheme) {
    if (scheme == BpScheme::Off) return;
    check_degree(space.degree());
    const Mesh& mesh = space.mesh();
    cells_.resize(mesh.num_cells());
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto tri = cell_triangle(mesh, c);
        const ConvexDecomposition dec = scheme == BpScheme::Optimal ? optimal_decomposition(tri, space.degree())
                                                                    : classical_decomposition(tri, space.degree());
        CellData& cd = cells_[c];
        for (int e = 0; e < 3; ++e) cd.weight[e] = dec.weight_of_local_edge(e);
        cd.vertices = {dec.edges.local[0], dec.edges.local[1]};
        cd.internal_mass = dec.internal_mass;
    }
}

std::vector<State> BpLimiter::check_values(const ModalState& u, std::size_t c) const {
    const DgSpace& space = *space_;
    const int d = u.components();
    const std::size_t ng = space.edge_rule().size();
    std::vector<State> out;
    const CellData& cd = cells_[c];
    State edge_sum{};
    for (int e = 0; e < 3; ++e)
        for (std::size_t g = 0; g < ng; ++g) {
            out.push_back(space.evaluate(u, c, space.psi_edge(e, g, false)));
            for (int comp = 0; comp < d; ++comp) edge_sum[comp] += cd.weight[e] * space.edge_rule().w[g] * out.back()[comp];
        }
    if (space.degree() == 1) {
        if (scheme_ == BpScheme::Optimal)
            for (int v : cd.vertices) out.push_back(space.evaluate(u, c, space.psi_vertex(v)));
    } else {
        State star{};
        for (int comp = 0; comp < d; ++comp) star[comp] = (u.at(c, 0, comp) - edge_sum[comp]) / cd.internal_mass;
        out.push_back(star);
    }
    return out;
}

namespace {

void scale_high_modes(ModalState& u, std::size_t c, int comp, double theta) {
    for (int m = 1; m < u.modes(); ++m) u.at(c, m, comp) *= theta;
}

}  // namespace

void BpLimiter::limit_euler(ModalState& u, const Euler& model) const {
    if (scheme_ == BpScheme::Off) return;
    parallel_for(u.cells(), [&](std::size_t c) {
        const State avg = u.average(c);
        const double e_avg = model.internal_energy(avg);
        if (!(avg[0] > 0.0) || !(e_avg > 0.0)) throw AdmissibilityError("inadmissible cell average", static_cast<int>(c));

        const double eps1 = std::min(avg[0], 1e-13);
        double rho_min = HUGE_VAL;
        for (const State& s : check_values(u, c)) rho_min = std::min(rho_min, s[0]);
        if (rho_min < avg[0]) {
            const double theta1 = std::min((avg[0] - eps1) / (avg[0] - rho_min), 1.0);
            if (theta1 < 1.0) scale_high_modes(u, c, 0, theta1);
        }

        const double eps2 = std::min(e_avg, 1e-13);
        double e_min = HUGE_VAL;
        for (const State& s : check_values(u, c)) e_min = std::min(e_min, model.internal_energy(s));
        if (e_min < e_avg) {
            const double theta2 = std::min((e_avg - eps2) / (e_avg - e_min), 1.0);
            if (theta2 < 1.0)
                for (int comp = 0; comp < 4; ++comp) scale_high_modes(u, c, comp, theta2);
        }
    });
}

void BpLimiter::limit_scalar(ModalState& u, double lower, double upper) const {
    if (scheme_ == BpScheme::Off) return;
    const double tol = 1e-12 * std::max(1.0, upper - lower);
    parallel_for(u.cells(), [&](std::size_t c) {
        const double avg = u.at(c, 0, 0);
        if (!(avg >= lower - tol && avg <= upper + tol))
            throw AdmissibilityError("cell average outside [" + std::to_string(lower) + ", " + std::to_string(upper) + "]",
                                     static_cast<int>(c));
        double lo = HUGE_VAL, hi = -HUGE_VAL;
        for (const State& s : check_values(u, c)) {
            lo = std::min(lo, s[0]);
            hi = std::max(hi, s[0]);
        }
        double theta = 1.0;
        if (hi > upper) theta = std::min(theta, std::max(0.0, (upper - avg) / (hi - avg)));
        if (lo < lower) theta = std::min(theta, std::max(0.0, (avg - lower) / (avg - lo)));
        if (theta < 1.0) scale_high_modes(u, c, 0, theta);
    });
}

}  // namespace oedg
