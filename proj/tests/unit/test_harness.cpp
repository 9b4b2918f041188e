#include "oedg/errors.hpp"
#include "oedg/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace oedg;

TEST(Norms, ExactFieldAndConstantOffset) {
    const Problem p = make_problem("advection_smooth");
    const Mesh m = perturb_vertices(p.make_mesh(6, 6), 0.2, 4);
    const DgSpace space(m, 3);
    const auto poly = [](Point x) { return State{1 + x.x * x.x * x.y - 2 * x.y * x.y * x.y}; };
    const ModalState u = project(space, 1, poly);
    const ErrorNorms same = error_norms(space, u, poly);
    EXPECT_LT(same.linf, 1e-13);
    EXPECT_LT(same.l1, 1e-13);
    const ErrorNorms off = error_norms(space, u, [&](Point x) { return State{poly(x)[0] + 0.25}; });
    // Unit-area domain: every norm of a constant 0.25 is 0.25.
    EXPECT_NEAR(off.l1, 0.25, 1e-13);
    EXPECT_NEAR(off.l2, 0.25, 1e-13);
    EXPECT_NEAR(off.linf, 0.25, 1e-13);
}

TEST(Problems, AllConstructibleAndBpMakesInitialDataAdmissible) {
    for (const std::string& id : problem_ids()) {
        SCOPED_TRACE(id);
        const Problem p = make_problem(id);
        ASSERT_TRUE(p.model);
        EXPECT_GT(p.t_end, 0);
        if (!p.make_mesh) continue;
        const Mesh m = p.make_mesh(std::max(2, p.nx / 4), std::max(1, p.ny / 4));
        const auto* euler = dynamic_cast<const Euler*>(p.model.get());
        if (!euler && !p.bounds) continue;
        for (int k : {1, 2}) {
            const DgSpace space(m, k);
            ModalState u = project(space, p.model->components(), p.initial);
            SolverOptions so;
            so.bp = BpScheme::Optimal;
            so.scalar_bounds = p.bounds;
            const BpLimiter lim(space, so.bp);
            apply_bp(lim, *p.model, so, u);
            for (std::size_t c = 0; c < m.num_cells(); ++c)
                for (const State& s : lim.check_values(u, c)) {
                    if (euler) {
                        EXPECT_TRUE(euler->admissible(s)) << "cell " << c;
                    } else {
                        EXPECT_GE(s[0], p.bounds->first - 1e-12);
                        EXPECT_LE(s[0], p.bounds->second + 1e-12);
                    }
                }
        }
    }
    EXPECT_THROW(make_problem("nope"), ConfigError);
}

TEST(Convergence, ShortStudyIsMonotone) {
    ConvergenceOptions o;
    o.k = 2;
    o.levels = 3;
    const auto rows = convergence_study(make_problem("advection_smooth"), o);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_TRUE(std::isnan(rows[0].order.l1));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].cells, 4 * rows[i - 1].cells);
        EXPECT_LT(rows[i].err.l1, rows[i - 1].err.l1);
        EXPECT_NEAR(rows[i].order.l1, std::log2(rows[i - 1].err.l1 / rows[i].err.l1), 1e-12);
        EXPECT_GT(rows[i].order.l1, 1.5);  // coarse levels are pre-asymptotic
    }
}

TEST(CflScan, RatiosStayInsideBoundsForRandomAndNeedleTriangles) {
    auto tris = random_triangles(500, 7);
    tris.push_back({Point{0, 0}, Point{1, 0}, Point{0.5, 1e-4}});
    tris.push_back({Point{0, 0}, Point{1, 0}, Point{1e-4, 1e-4}});
    for (const auto& t : tris) {
        const double a = (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (t[1].y - t[0].y);
        ASSERT_GT(a, 0);
    }
    const CflScan p1 = cfl_ratio_scan(tris, 1);
    EXPECT_GE(p1.vs_classical.min, 2 - 1e-12);
    EXPECT_LE(p1.vs_classical.max, 3 + 1e-12);
    EXPECT_GE(p1.vs_chen_shu.min, 1 - 1e-12);
    const CflScan p2 = cfl_ratio_scan(tris, 2);
    EXPECT_GE(p2.vs_classical.min, 1 - 1e-12);
    EXPECT_GE(p2.vs_chen_shu.min, 1 - 1e-12);
}

TEST(Rotation, ZeroAngleIsExact) {
    RotationOptions o;
    o.angle = 0;
    o.steps = 3;
    o.n = 6;
    std::vector<double> hist;
    EXPECT_EQ(rotation_experiment(make_problem("euler_implosion"), o, &hist), 0.0);
    EXPECT_EQ(hist.size(), 3u);
}
