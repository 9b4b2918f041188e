#include "oedg/bp.hpp"
#include "oedg/errors.hpp"
#include "oedg/harness.hpp"
#include "../support/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace oedg;

namespace {

const std::array<Point, 3> kEquilateral{Point{0, 0}, Point{1, 0}, Point{0.5, std::sqrt(3.0) / 2}};
const std::array<Point, 3> kRightIsosceles{Point{0, 0}, Point{1, 0}, Point{0.5, 0.5}};

// Largest relative violation of the decomposition identity over monomials of degree <= k.
double identity_error(const std::array<Point, 3>& tri, const ConvexDecomposition& d, int k) {
    const double area = 0.5 * std::abs((tri[1].x - tri[0].x) * (tri[2].y - tri[0].y) -
                                       (tri[2].x - tri[0].x) * (tri[1].y - tri[0].y));
    double worst = 0;
    for (int a = 0; a <= k; ++a)
        for (int b = 0; a + b <= k; ++b) {
            double rebuilt = 0, scale = 0;
            for (int e = 0; e < 3; ++e)
                rebuilt += d.weight_of_local_edge(e) *
                           oracle::segment_monomial_mean(tri[(e + 1) % 3], tri[(e + 2) % 3], a, b);
            for (const auto& n : d.nodes) rebuilt += n.weight * oracle::monomial(n.point, a, b);
            const double exact = oracle::triangle_monomial(tri, a, b) / area;
            for (const auto& v : tri) scale = std::max(scale, std::abs(oracle::monomial(v, a, b)));
            worst = std::max(worst, std::abs(rebuilt - exact) / std::max(scale, std::abs(exact)));
        }
    return worst;
}

double total_weight(const ConvexDecomposition& d) {
    double s = 0;
    for (double w : d.edge_weight) s += w;
    for (const auto& n : d.nodes) s += n.weight;
    return s;
}

Mesh single_cell(const std::array<Point, 3>& t) {
    return Mesh({t[0], t[1], t[2]}, {{0, 1, 2}}, {{0, 1, {}}, {1, 2, {}}, {2, 0, {}}});
}

}  // namespace

TEST(Bp, OptimalP1Examples) {
    ConvexDecomposition d = optimal_decomposition(kEquilateral, 1);
    for (double w : d.edge_weight) EXPECT_NEAR(w, 1.0 / 3, 1e-15);
    EXPECT_TRUE(d.nodes.empty());
    EXPECT_NEAR(d.cfl, 1.0 / 3, 1e-15);

    d = optimal_decomposition(kRightIsosceles, 1);
    EXPECT_NEAR(d.cfl, 2 / (3 * (1 + std::sqrt(2.0) / 2)), 1e-14);
    ASSERT_EQ(d.nodes.size(), 1u);
    const double l1 = 1, l2 = std::sqrt(0.5), l3 = std::sqrt(0.5);
    EXPECT_NEAR(d.edge_weight[0], 2 * l1 / (3 * (l1 + l2)), 1e-15);
    EXPECT_NEAR(d.nodes[0].weight, (l1 + l2 - 2 * l3) / (3 * (l1 + l2)), 1e-15);
    EXPECT_NEAR(d.nodes[0].bary[d.edges.local[2]], 0.0, 1e-13);

    const std::array<Point, 3> t345{Point{0, 0}, Point{4, 0}, Point{0, 3}};
    d = optimal_decomposition(t345, 1);
    EXPECT_LE(identity_error(t345, d, 1), 1e-13);
    EXPECT_NEAR(total_weight(d), 1.0, 1e-13);
}

TEST(Bp, OptimalP2Examples) {
    ConvexDecomposition d = optimal_decomposition(kEquilateral, 2);
    EXPECT_NEAR(d.cfl, 1.0 / 6, 1e-14);
    EXPECT_EQ(d.raw_nodes.size(), 2u);
    ASSERT_EQ(d.nodes.size(), 1u);
    EXPECT_NEAR(d.nodes[0].point.x, 0.5, 1e-14);
    EXPECT_NEAR(d.nodes[0].point.y, std::sqrt(3.0) / 6, 1e-14);

    d = optimal_decomposition(kRightIsosceles, 2);
    const double s2 = std::sqrt(2.0);
    EXPECT_NEAR(d.cfl, 2 / (3 * s2 + std::sqrt(15 - 6 * s2) + 3), 1e-14);
    EXPECT_EQ(d.nodes.size(), 2u);
    EXPECT_LE(identity_error(kRightIsosceles, d, 2), 1e-13);
}

TEST(Bp, RandomTrianglesAreFeasible) {
    for (const auto& tri : random_triangles(1000, 99))
        for (int k : {1, 2}) {
            const ConvexDecomposition d = optimal_decomposition(tri, k);
            EXPECT_LE(identity_error(tri, d, k), 1e-12);
            EXPECT_NEAR(total_weight(d), 1.0, 1e-13);
            EXPECT_NEAR(d.internal_mass, 1 - d.edge_weight[0] - d.edge_weight[1] - d.edge_weight[2], 1e-15);
            for (double w : d.edge_weight) EXPECT_GT(w, 0);
            for (const auto& n : d.raw_nodes) {
                EXPECT_GE(n.weight, 0);
                for (double b : n.bary) {
                    EXPECT_GE(b, k == 1 ? -1e-13 : 0.0);
                    EXPECT_LE(b, 1.0);
                }
            }
            // The optimal CFL number dominates the classical one.
            EXPECT_GE(d.cfl, classical_cfl(tri, k));
        }
}

TEST(Bp, ClassicalAndChenShuConstants) {
    EXPECT_NEAR(classical_cfl(kEquilateral, 1), 1.0 / 9, 1e-15);
    EXPECT_NEAR(classical_cfl(kEquilateral, 2), 1.0 / 27, 1e-15);
    EXPECT_NEAR(chen_shu_cfl(kEquilateral, 1), 1.0 / 6, 1e-15);
    EXPECT_NEAR(classical_cfl(kRightIsosceles, 1), 1 / (3 * (1 + std::sqrt(2.0))), 1e-15);
    EXPECT_NEAR(optimal_cfl(kEquilateral, 2) / classical_cfl(kEquilateral, 2), 4.5, 1e-13);
    const ConvexDecomposition z = classical_decomposition(kEquilateral, 1);
    EXPECT_NEAR(z.cfl, 1.0 / 9, 1e-15);
}

TEST(Bp, Timestep) {
    const Mesh m = single_cell(kEquilateral);
    EXPECT_NEAR(bp_timestep(m, 1.0, 1.0, BpScheme::Optimal, 1), std::sqrt(3.0) / 12, 1e-15);
    StructuredOptions o;
    o.nx = o.ny = 6;
    const Mesh g = perturb_vertices(generate_structured(o), 0.3, 4);
    const double ratio = bp_timestep(g, 2.0, 1.0, BpScheme::Optimal, 1) / bp_timestep(g, 2.0, 1.0, BpScheme::Classical, 1);
    EXPECT_GE(ratio, 2.0);
    EXPECT_LE(ratio, 3.0);
}

TEST(Bp, LimiterLeavesSafeStatesAlone) {
    const std::array<Point, 3> tri{Point{0, 0}, Point{2, 0}, Point{0.5, 1}};
    const Mesh m = single_cell(tri);
    const Euler e;
    for (int k : {1, 2}) {
        const DgSpace space(m, k);
        ModalState u = project(space, 4, [&](Point x) { return e.from_primitive(1 + 0.1 * x.x, 0.2, 0, 1 + 0.1 * x.y); });
        const ModalState before = u;
        for (BpScheme s : {BpScheme::Optimal, BpScheme::Classical}) {
            BpLimiter(space, s).limit_euler(u, e);
            EXPECT_EQ(u.data(), before.data());
        }
    }
}

TEST(Bp, DensityDipIsLiftedToFloor) {
    // Linear density -0.1 at the vertex opposite the longest edge, cell average 1.
    const std::array<Point, 3> tri{Point{0, 0}, Point{2, 0}, Point{0.5, 1}};
    const Mesh m = single_cell(tri);
    const Euler e;
    const DgSpace space(m, 1);
    const SortedEdges s = sort_edges(tri);
    const int low = s.local[0];
    std::array<double, 3> rho{1.55, 1.55, 1.55};
    rho[low] = -0.1;
    const auto& ji = m.inverse_jacobian(0);
    ModalState u = project(space, 4, [&](Point x) {
        const Point r = x - tri[0];
        const double xi = ji[0] * r.x + ji[1] * r.y, eta = ji[2] * r.x + ji[3] * r.y;
        return State{rho[0] * (1 - xi - eta) + rho[1] * xi + rho[2] * eta, 0, 0, 2.5};
    });
    const BpLimiter limiter(space, BpScheme::Optimal);
    const ModalState before = u;
    limiter.limit_euler(u, e);
    EXPECT_EQ(u.average(0), before.average(0));
    double lowest = HUGE_VAL;
    for (const State& v : limiter.check_values(u, 0)) lowest = std::min(lowest, v[0]);
    EXPECT_NEAR(lowest, 1e-13, 1e-15);
    EXPECT_NEAR(space.evaluate(u, 0, space.psi_vertex(low))[0], 1e-13, 1e-15);
    ModalState again = u;
    limiter.limit_euler(again, e);
    for (std::size_t i = 0; i < u.data().size(); ++i) EXPECT_NEAR(again.data()[i], u.data()[i], 1e-14);
}

TEST(Bp, EnergyStepAndIdempotence) {
    StructuredOptions o;
    o.nx = o.ny = 4;
    const Mesh m = perturb_vertices(generate_structured(o), 0.25, 3);
    const Euler e;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> d(-0.6, 0.6);
    for (int k : {1, 2})
        for (BpScheme scheme : {BpScheme::Optimal, BpScheme::Classical}) {
            const DgSpace space(m, k);
            ModalState u = project(space, 4, [&](Point) { return e.from_primitive(1, 0.5, 0, 0.3); });
            for (std::size_t c = 0; c < u.cells(); ++c)
                for (int mode = 1; mode < u.modes(); ++mode)
                    for (int i = 0; i < 4; ++i) u.at(c, mode, i) = d(rng);
            const ModalState raw = u;
            const BpLimiter limiter(space, scheme);
            limiter.limit_euler(u, e);
            for (std::size_t c = 0; c < u.cells(); ++c) {
                EXPECT_EQ(u.average(c), raw.average(c));
                for (const State& v : limiter.check_values(u, c)) {
                    EXPECT_GE(v[0], 1e-13 - 1e-15);
                    EXPECT_GE(e.internal_energy(v), 1e-13 - 1e-14);
                }
            }
            ModalState again = u;
            limiter.limit_euler(again, e);
            for (std::size_t i = 0; i < u.data().size(); ++i) EXPECT_NEAR(again.data()[i], u.data()[i], 1e-14);
        }
}

TEST(Bp, ScalarBoundsAndBadAverages) {
    const Mesh m = single_cell(kEquilateral);
    const DgSpace space(m, 2);
    ModalState u(1, 2, 1);
    u.at(0, 0, 0) = 0.9;
    u.at(0, 1, 0) = 0.3;
    u.at(0, 4, 0) = -0.2;
    const BpLimiter limiter(space, BpScheme::Optimal);
    limiter.limit_scalar(u, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(u.at(0, 0, 0), 0.9);
    double hi = -HUGE_VAL;
    for (const State& v : limiter.check_values(u, 0)) hi = std::max(hi, v[0]);
    EXPECT_NEAR(hi, 1.0, 1e-14);
    u.at(0, 0, 0) = 1.5;
    EXPECT_THROW(limiter.limit_scalar(u, 0.0, 1.0), AdmissibilityError);

    const Euler e;
    ModalState bad(1, 2, 4);
    bad.at(0, 0, 0) = -1;
    bad.at(0, 0, 3) = 1;
    EXPECT_THROW(limiter.limit_euler(bad, e), AdmissibilityError);
}
