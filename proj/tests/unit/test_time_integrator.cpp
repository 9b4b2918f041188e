#include "oedg/errors.hpp"
#include "oedg/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace oedg;

namespace {

// du/dt = lambda u on a single scalar coefficient.
double integrate(RkKind kind, double lambda, double t_end, int steps) {
    const RkScheme s = RkScheme::make(kind);
    ModalState u(1, 1, 1);
    u.at(0, 0, 0) = 1;
    const ResidualFn f = [lambda](const ModalState& v, double, ModalState& out) {
        out = v;
        for (double& x : out.data()) x *= lambda;
    };
    const double dt = t_end / steps;
    for (int n = 0; n < steps; ++n) advance(s, u, n * dt, dt, f);
    return u.at(0, 0, 0);
}

}  // namespace

TEST(Rk, ShuOsherRowsAreConvex) {
    for (RkKind k : {RkKind::Ssp22, RkKind::Ssp33, RkKind::Ssp54}) {
        const RkScheme s = RkScheme::make(k);
        for (int i = 0; i < s.stages(); ++i) {
            double sum = 0;
            for (std::size_t j = 0; j < s.alpha[i].size(); ++j) {
                EXPECT_GE(s.alpha[i][j], 0);
                EXPECT_GE(s.beta[i][j], 0);
                sum += s.alpha[i][j];
                // The SSP coefficient bounds every beta/alpha ratio.
                if (s.beta[i][j] > 0) EXPECT_LE(s.beta[i][j] * s.c_ssp, s.alpha[i][j] * (1 + 1e-3));
            }
            EXPECT_NEAR(sum, 1.0, 1e-14);
        }
    }
    const RkScheme rk3 = RkScheme::make(RkKind::Ssp33);
    EXPECT_EQ(rk3.alpha[1], (std::vector<double>{0.75, 0.25}));
    EXPECT_DOUBLE_EQ(rk3.alpha[2][0], 1.0 / 3);
    EXPECT_DOUBLE_EQ(rk3.alpha[2][2], 2.0 / 3);
    EXPECT_DOUBLE_EQ(rk3.stage_time[1], 1.0);
    EXPECT_DOUBLE_EQ(rk3.stage_time[2], 0.5);
    EXPECT_DOUBLE_EQ(RkScheme::make(RkKind::Ssp54).c_ssp, 1.508);
}

TEST(Rk, OrderOnLinearProblem) {
    const struct {
        RkKind kind;
        int order;
    } cases[] = {{RkKind::Ssp22, 2}, {RkKind::Ssp33, 3}, {RkKind::Ssp54, 4}};
    for (const auto& c : cases) {
        const double exact = std::exp(-1.0);
        const double e1 = std::abs(integrate(c.kind, -1.0, 1.0, 10) - exact);
        const double e2 = std::abs(integrate(c.kind, -1.0, 1.0, 20) - exact);
        EXPECT_NEAR(e1 / e2, std::pow(2.0, c.order), 0.1 * std::pow(2.0, c.order));
    }
    // One RK3 step: local error O(dt^4).
    const double dt = 0.01;
    EXPECT_LT(std::abs(integrate(RkKind::Ssp33, 2.0, dt, 1) - std::exp(2 * dt)), std::pow(2 * dt, 4) / 24 * 1.5);
}

TEST(Rk, HooksAndErrorsCarryStage) {
    const RkScheme s = RkScheme::make(RkKind::Ssp54);
    ModalState u(2, 1, 1);
    u.data() = {1, 0, 0, 2, 0, 0};
    int calls = 0;
    const ResidualFn zero = [](const ModalState& v, double, ModalState& out) {
        out = v;
        std::fill(out.data().begin(), out.data().end(), 0.0);
    };
    advance(s, u, 0, 0.1, zero, [&](ModalState&, double) { ++calls; });
    EXPECT_EQ(calls, 5);
    const std::vector<double> expect{1, 0, 0, 2, 0, 0};
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(u.data()[i], expect[i], 1e-14);  // coefficients carry 15 digits

    int n = 0;
    const ResidualFn failing = [&](const ModalState& v, double, ModalState& out) {
        if (++n == 2) throw AdmissibilityError("negative density", 1);
        out = v;
    };
    try {
        advance(RkScheme::make(RkKind::Ssp33), u, 0, 0.1, failing);
        FAIL();
    } catch (const AdmissibilityError& e) {
        EXPECT_NE(std::string(e.what()).find("stage 2"), std::string::npos) << e.what();
        EXPECT_EQ(e.cell, 1);
    }
    EXPECT_EQ(parse_rk("rk3"), RkKind::Ssp33);
    EXPECT_THROW(parse_rk("euler"), ConfigError);
}

TEST(Rk, TimestepFormulas) {
    const Mesh m({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}, {{0, 1, 2}}, {{0, 1, {}}, {1, 2, {}}, {2, 0, {}}});
    const double area = std::sqrt(3.0) / 4;
    EXPECT_NEAR(generic_timestep(m, 2.0, 1.0, 2), 0.5 * area / (5 * 3), 1e-16);
    EXPECT_NEAR(p4_reproduction_timestep(m, 1.508), 1.508 / 9 * std::pow(area / 3, 1.25), 1e-16);
}

TEST(Solver, ZeroDurationAndExactEndTime) {
    const Problem p = make_problem("advection_smooth");
    const Mesh m = p.make_mesh(4, 4);
    const DgSpace space(m, 1);
    const ModalState u0 = project(space, 1, p.initial);
    SolverOptions so;
    so.t_end = 0;
    so.output_times = {0};
    RunResult r = run(space, *p.model, p.boundary, u0, so);
    EXPECT_EQ(r.steps, 0);
    ASSERT_EQ(r.snapshots.size(), 1u);
    EXPECT_EQ(r.snapshots[0].state.data(), u0.data());

    so.t_end = 0.1;
    so.output_times = {0.03, 0.1};
    r = run(space, *p.model, p.boundary, u0, so);
    EXPECT_EQ(r.time, 0.1);
    ASSERT_EQ(r.snapshots.size(), 2u);
    EXPECT_EQ(r.snapshots[0].time, 0.03);
    EXPECT_EQ(r.snapshots[1].time, 0.1);
    EXPECT_EQ(r.dt_history.size(), static_cast<std::size_t>(r.steps));
}

TEST(Solver, ConstantStateIsStationary) {
    const Euler e;
    StructuredOptions o;
    o.nx = o.ny = 4;
    o.periodic_x = o.periodic_y = true;
    const Mesh m = perturb_vertices(generate_structured(o), 0.2, 9);
    const BoundarySpec bc;
    for (int k : {1, 2}) {
        const DgSpace space(m, k);
        ModalState u(m.num_cells(), k, 4);
        const State s = e.from_primitive(1, 0.5, 0.25, 1);
        for (std::size_t c = 0; c < u.cells(); ++c)
            for (int i = 0; i < 4; ++i) u.at(c, 0, i) = s[i];
        SolverOptions so;
        so.oe = OeMode::RotationInvariant;
        so.bp = BpScheme::Optimal;
        so.t_end = 0.05;
        const RunResult r = run(space, e, bc, u, so);
        for (std::size_t i = 0; i < u.data().size(); ++i) EXPECT_NEAR(r.state.data()[i], u.data()[i], 1e-13);
    }
}

TEST(Solver, OptimalOverClassicalStepRatio) {
    // Advection has a constant wave speed, so the ratio of average steps is purely geometric.
    const Problem p = make_problem("advection_step");
    const Mesh m = perturb_vertices(p.make_mesh(6, 6), 0.25, 2);
    const DgSpace space(m, 1);
    SolverOptions so;
    so.rk = RkKind::Ssp22;
    so.t_end = 1e9;
    so.max_steps = 5;
    so.scalar_bounds = p.bounds;
    so.bp = BpScheme::Optimal;
    const double opt = run(space, *p.model, p.boundary, project(space, 1, p.initial), so).average_dt();
    so.bp = BpScheme::Classical;
    const double cls = run(space, *p.model, p.boundary, project(space, 1, p.initial), so).average_dt();
    double min_opt = HUGE_VAL, min_cls = HUGE_VAL;
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
        min_opt = std::min(min_opt, optimal_cfl(cell_triangle(m, c), 1) * m.area(c));
        min_cls = std::min(min_cls, classical_cfl(cell_triangle(m, c), 1) * m.area(c));
    }
    EXPECT_NEAR(opt / cls, min_opt / min_cls, 1e-12);
}

TEST(Solver, NonFiniteStateAborts) {
    const Problem p = make_problem("advection_smooth");
    const Mesh m = p.make_mesh(2, 2);
    const DgSpace space(m, 1);
    ModalState u = project(space, 1, p.initial);
    u.at(0, 1, 0) = std::nan("");
    SolverOptions so;
    so.t_end = 0.1;
    so.alpha = AlphaMode::Traces;
    EXPECT_THROW(run(space, *p.model, p.boundary, u, so), NumericError);
}
