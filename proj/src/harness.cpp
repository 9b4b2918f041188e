#include "oedg/harness.hpp"

#include "oedg/errors.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace oedg {

namespace {

constexpr double kPi = std::numbers::pi;

/// Builds a mesh from cells, tagging every unshared edge by its endpoints.
Mesh mesh_from_cells(const std::vector<Point>& verts, const std::vector<std::array<int, 3>>& cells,
                     const std::function<BoundaryTag(Point, Point)>& tagger) {
    std::vector<int> used(verts.size(), -1);
    std::vector<Point> kept;
    std::vector<std::array<int, 3>> remapped;
    for (const auto& c : cells) {
        std::array<int, 3> r;
        for (int i = 0; i < 3; ++i) {
            if (used[c[i]] < 0) {
                used[c[i]] = static_cast<int>(kept.size());
                kept.push_back(verts[c[i]]);
            }
            r[i] = used[c[i]];
        }
        remapped.push_back(r);
    }
    std::map<std::pair<int, int>, int> count;
    for (const auto& c : remapped)
        for (int e = 0; e < 3; ++e) {
            int a = c[(e + 1) % 3], b = c[(e + 2) % 3];
            ++count[{std::min(a, b), std::max(a, b)}];
        }
    std::vector<BoundarySegment> bnd;
    for (const auto& c : remapped)
        for (int e = 0; e < 3; ++e) {
            int a = c[(e + 1) % 3], b = c[(e + 2) % 3];
            if (count[{std::min(a, b), std::max(a, b)}] == 1) bnd.push_back({a, b, tagger(kept[a], kept[b])});
        }
    return Mesh(std::move(kept), std::move(remapped), std::move(bnd));
}

std::function<Mesh(int, int)> periodic_box(double x0, double y0, double x1, double y1) {
    return [=](int nx, int ny) {
        StructuredOptions o;
        o.x0 = x0;
        o.y0 = y0;
        o.x1 = x1;
        o.y1 = y1;
        o.nx = nx;
        o.ny = ny;
        o.diagonal = Diagonal::Alternating;
        o.periodic_x = o.periodic_y = true;
        return generate_structured(o);
    };
}

std::function<Mesh(int, int)> tagged_box(double x0, double y0, double x1, double y1, BoundaryTag left,
                                         BoundaryTag right, BoundaryTag bottom, BoundaryTag top) {
    return [=](int nx, int ny) {
        StructuredOptions o;
        o.x0 = x0;
        o.y0 = y0;
        o.x1 = x1;
        o.y1 = y1;
        o.nx = nx;
        o.ny = ny;
        o.diagonal = Diagonal::Alternating;
        o.left = left;
        o.right = right;
        o.bottom = bottom;
        o.top = top;
        return generate_structured(o);
    };
}

State scalar(double v) { return {v, 0, 0, 0}; }

double burgers_exact(double x, double y, double t) {
    // u = 0.5 sin(2 pi (x + y - 2 u t)) by Newton, valid before the shock time 1/(2 pi).
    const double s = x + y;
    double u = 0.5 * std::sin(2 * kPi * s);
    for (int it = 0; it < 100; ++it) {
        const double phase = 2 * kPi * (s - 2 * u * t);
        const double g = u - 0.5 * std::sin(phase);
        const double dg = 1 + 2 * kPi * t * std::cos(phase);
        const double du = g / dg;
        u -= du;
        if (std::abs(du) < 1e-16) break;
    }
    return u;
}

BoundaryRule prescribed(std::function<State(Point, double)> f) {
    return {GhostKind::Prescribed, [f](Point x, double t, const State&) { return f(x, t); }};
}

const BoundaryTag kIn{BoundaryKind::Inflow, -1}, kOut{BoundaryKind::Outflow, -1}, kWall{BoundaryKind::Wall, -1},
    kExact{BoundaryKind::Exact, -1};

}  // namespace

std::vector<std::string> problem_ids() {
    return {"advection_smooth", "advection_flower", "advection_step", "burgers_smooth",
            "burgers_riemann1", "burgers_riemann2", "euler_implosion", "euler_vacuum",
            "euler_ffs",        "euler_dmr",        "euler_cylinder",  "euler_diffraction"};
}

Problem make_problem(const std::string& id) {
    Problem p;
    p.id = id;
    if (id == "advection_smooth") {
        p.model = std::make_shared<LinearAdvection>();
        p.make_mesh = periodic_box(0, 0, 1, 1);
        p.nx = p.ny = 16;
        p.initial = [](Point x) { return scalar(std::sin(2 * kPi * (x.x + x.y))); };
        p.exact = [](Point x, double t) { return scalar(std::sin(2 * kPi * (x.x + x.y - 2 * t))); };
        p.t_end = 0.1;
    } else if (id == "advection_flower") {
        p.model = std::make_shared<LinearAdvection>();
        p.make_mesh = periodic_box(-1, -1, 1, 1);
        p.nx = p.ny = 64;
        p.initial = [](Point x) {
            const double r = std::hypot(x.x, x.y);
            double theta = r > 0 ? std::acos(x.x / r) : 0.0;
            if (x.y < 0) theta = 2 * kPi - theta;
            return scalar(r <= (3 + std::pow(3.0, std::sin(5 * theta))) / 8 ? 1.0 : 0.0);
        };
        p.t_end = 1.8;
        p.bounds = {{0.0, 1.0}};
    } else if (id == "advection_step") {
        p.model = std::make_shared<LinearAdvection>();
        p.make_mesh = periodic_box(0, 0, 1, 1);
        p.nx = p.ny = 32;
        p.initial = [](Point x) {
            return scalar(std::abs(x.x - 0.5) <= 0.25 && std::abs(x.y - 0.5) <= 0.25 ? 1.0 : 0.0);
        };
        p.t_end = 0.5;
        p.bounds = {{0.0, 1.0}};
    } else if (id == "burgers_smooth") {
        p.model = std::make_shared<Burgers>();
        p.make_mesh = periodic_box(0, 0, 1, 1);
        p.nx = p.ny = 16;
        p.initial = [](Point x) { return scalar(0.5 * std::sin(2 * kPi * (x.x + x.y))); };
        p.exact = [](Point x, double t) { return scalar(burgers_exact(x.x, x.y, t)); };
        p.t_end = 0.05;
    } else if (id == "burgers_riemann1") {
        p.model = std::make_shared<Burgers>();
        p.make_mesh = tagged_box(0, 0, 1, 1, kIn, kIn, kIn, kIn);
        p.nx = p.ny = 64;
        p.initial = [](Point x) {
            if (x.y >= 0.5) return scalar(x.x < 0.5 ? -0.2 : -1.0);
            return scalar(x.x < 0.5 ? 0.5 : 0.8);
        };
        auto u0 = p.initial;
        p.boundary.rules[BoundaryKind::Inflow] = {
            GhostKind::Custom, [u0](Point x, double t, const State& u_int) {
                const bool left_out = std::abs(x.x) < 1e-12 && x.y >= 0.5 + 0.15 * t;
                const bool right_out = std::abs(x.x - 1) < 1e-12 && x.y <= 0.5 - 0.1 * t;
                return left_out || right_out ? u_int : u0(x);
            }};
        p.t_end = 0.5;
        p.bounds = {{-1.0, 0.8}};
    } else if (id == "burgers_riemann2") {
        p.model = std::make_shared<Burgers>();
        p.make_mesh = tagged_box(0, 0, 1, 1, kIn, kOut, kIn, kOut);
        p.nx = p.ny = 64;
        p.initial = [](Point x) {
            if (x.x < 0.25 && x.y < 0.25) return scalar(2.0);
            if (x.x >= 0.25 && x.y >= 0.25) return scalar(3.0);
            return scalar(1.0);
        };
        auto u0 = p.initial;
        p.boundary.rules[BoundaryKind::Inflow] = prescribed([u0](Point x, double) { return u0(x); });
        p.t_end = 1.0 / 12.0;
        p.bounds = {{1.0, 3.0}};
    } else if (id == "euler_implosion") {
        auto euler = std::make_shared<Euler>();
        p.model = euler;
        p.make_mesh = tagged_box(0, 0, 0.3, 0.3, kWall, kWall, kWall, kWall);
        p.nx = p.ny = 40;
        p.initial = [euler](Point x) {
            return x.x + x.y <= 0.15 ? euler->from_primitive(0.125, 0, 0, 0.14) : euler->from_primitive(1, 0, 0, 1);
        };
        p.t_end = 2.5;
    } else if (id == "euler_vacuum") {
        // Two strong rarefactions moving apart leave a near-vacuum state in the middle.
        auto euler = std::make_shared<Euler>();
        p.model = euler;
        p.make_mesh = tagged_box(0, 0, 1, 0.05, kOut, kOut, kWall, kWall);
        p.nx = 100;
        p.ny = 5;
        p.initial = [euler](Point x) { return euler->from_primitive(1, x.x < 0.5 ? -2.0 : 2.0, 0, 0.4); };
        p.t_end = 0.15;
    } else if (id == "euler_ffs") {
        auto euler = std::make_shared<Euler>();
        p.model = euler;
        const State inflow = euler->from_primitive(1.4, 3, 0, 1);
        p.make_mesh = [](int nx, int ny) {
            if (nx % 15 || ny % 5) throw ConfigError("forward-facing step needs nx % 15 == 0 and ny % 5 == 0");
            StructuredOptions o;
            o.x1 = 3;
            o.nx = nx;
            o.ny = ny;
            o.diagonal = Diagonal::Alternating;
            Mesh box = generate_structured(o);
            std::vector<std::array<int, 3>> cells;
            for (std::size_t c = 0; c < box.num_cells(); ++c) {
                Point m = box.centroid(c);
                if (!(m.x > 0.6 && m.y < 0.2)) cells.push_back(box.cell(c));
            }
            return mesh_from_cells(box.vertices(), cells, [](Point a, Point b) {
                if (a.x == 0 && b.x == 0) return kIn;
                if (a.x == 3 && b.x == 3) return kOut;
                return kWall;
            });
        };
        p.nx = 60;
        p.ny = 20;
        p.initial = [inflow](Point) { return inflow; };
        p.boundary.rules[BoundaryKind::Inflow] = prescribed([inflow](Point, double) { return inflow; });
        p.t_end = 4.0;
    } else if (id == "euler_dmr" || id == "euler_diffraction") {
        // Mesh from file; tags IN, OUT, WALL and EXACT. The Mach-10 shock travels right at speed 10.
        auto euler = std::make_shared<Euler>();
        p.model = euler;
        const State post = euler->from_primitive(8, 8.25, 0, 116.5), pre = euler->from_primitive(1.4, 0, 0, 1);
        const bool dmr = id == "euler_dmr";
        const double x_shock = dmr ? 0.1 : 3.4;
        p.initial = [=](Point x) { return x.x <= x_shock && (dmr || x.y >= 6) ? post : pre; };
        p.boundary.rules[BoundaryKind::Inflow] = prescribed([post](Point, double) { return post; });
        p.boundary.rules[BoundaryKind::Exact] =
            prescribed([=](Point x, double t) { return x.x <= x_shock + 10 * t ? post : pre; });
        p.t_end = dmr ? 0.2 : 0.9;
    } else if (id == "euler_cylinder") {
        auto euler = std::make_shared<Euler>();
        p.model = euler;
        const State inflow = euler->from_primitive(1.4, 3, 0, 1);
        p.initial = [inflow](Point) { return inflow; };
        p.boundary.rules[BoundaryKind::Inflow] = prescribed([inflow](Point, double) { return inflow; });
        p.t_end = 40.0;
    } else {
        throw ConfigError("unknown problem '" + id + "'");
    }
    if (p.exact && !p.boundary.rules.count(BoundaryKind::Exact)) {
        auto exact = p.exact;
        p.boundary.rules[BoundaryKind::Exact] = prescribed(exact);
    }
    return p;
}

ErrorNorms error_norms(const DgSpace& space, const ModalState& u, const std::function<State(Point)>& exact,
                       int comp) {
    const Mesh& mesh = space.mesh();
    const QuadRule& rule = interior_rule(kMaxDegree);
    ErrorNorms e;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double diff = std::abs(space.evaluate(u, c, rule.xi[q], rule.eta[q])[comp] -
                                         exact(mesh.to_physical(c, rule.xi[q], rule.eta[q]))[comp]);
            e.l1 += mesh.area(c) * rule.w[q] * diff;
            e.l2 += mesh.area(c) * rule.w[q] * diff * diff;
            e.linf = std::max(e.linf, diff);
        }
    e.l2 = std::sqrt(e.l2);
    return e;
}

std::vector<ConvergenceRow> convergence_study(const Problem& problem, const ConvergenceOptions& opts) {
    if (!problem.exact) throw ConfigError("problem '" + problem.id + "' has no exact solution");
    if (!problem.make_mesh) throw ConfigError("problem '" + problem.id + "' has no mesh recipe");
    if (opts.levels < 2) throw ConfigError("convergence study needs at least two levels");
    Mesh mesh = problem.make_mesh(opts.base_n, opts.base_n);
    if (opts.jitter > 0) mesh = perturb_vertices(mesh, opts.jitter, opts.seed);

    std::vector<ConvergenceRow> rows;
    for (int level = 0; level < opts.levels; ++level) {
        if (level > 0) mesh = refine_uniform(mesh);
        DgSpace space(mesh, opts.k);
        SolverOptions so;
        so.rk = opts.rk.value_or(default_rk_for_degree(opts.k));
        so.oe = opts.oe;
        so.t_end = problem.t_end;
        so.step_rule = opts.step_rule;
        ModalState u0 = project(space, problem.model->components(), problem.initial);
        RunResult r = run(space, *problem.model, problem.boundary, std::move(u0), so);
        const double t = problem.t_end;
        auto exact = [&](Point x) { return problem.exact(x, t); };
        ConvergenceRow row{mesh.num_cells(), error_norms(space, r.state, exact), {NAN, NAN, NAN}};
        if (!rows.empty()) {
            const ErrorNorms& prev = rows.back().err;
            row.order = {std::log2(prev.l1 / row.err.l1), std::log2(prev.l2 / row.err.l2),
                         std::log2(prev.linf / row.err.linf)};
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<std::array<Point, 3>> random_triangles(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<std::array<Point, 3>> out;
    out.reserve(count);
    while (out.size() < count) {
        std::array<Point, 3> t;
        if (out.size() % 10 == 9) {
            // Needle: unit base, apex at height 1e-3 anywhere along it.
            const double angle = 2 * kPi * uni(rng);
            const Point dir{std::cos(angle), std::sin(angle)}, nrm{-dir.y, dir.x};
            const Point a{uni(rng), uni(rng)};
            t = {a, a + dir, a + (uni(rng) * 1.2 - 0.1) * dir + 1e-3 * nrm};
        } else {
            for (auto& p : t) p = {uni(rng), uni(rng)};
        }
        const double det = (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[1].y - t[0].y) * (t[2].x - t[0].x);
        if (std::abs(det) < 1e-6) continue;
        if (det < 0) std::swap(t[1], t[2]);
        out.push_back(t);
    }
    return out;
}

CflScan cfl_ratio_scan(const std::vector<std::array<Point, 3>>& triangles, int k) {
    CflScan s;
    for (const auto& t : triangles) {
        const double opt = optimal_cfl(t, k);
        s.vs_classical.add(opt / classical_cfl(t, k));
        s.vs_chen_shu.add(opt / chen_shu_cfl(t, k));
    }
    return s;
}

CflScan cfl_ratio_scan(const Mesh& mesh, int k) {
    std::vector<std::array<Point, 3>> tris;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) tris.push_back(cell_triangle(mesh, c));
    return cfl_ratio_scan(tris, k);
}

std::vector<std::array<double, 4>> primitive_averages(const Euler& model, const ModalState& u, double unrotate) {
    std::vector<std::array<double, 4>> out(u.cells());
    for (std::size_t c = 0; c < u.cells(); ++c) {
        const State avg = u.average(c);
        const State back = rotate_state(avg, -unrotate);
        out[c] = {avg[0], back[1] / avg[0], back[2] / avg[0], model.pressure(avg)};
    }
    return out;
}

double rotation_experiment(const Problem& problem, const RotationOptions& opts, std::vector<double>* history) {
    const auto* euler = dynamic_cast<const Euler*>(problem.model.get());
    if (!euler) throw ConfigError("rotation experiment needs the Euler model");
    if (!problem.make_mesh) throw ConfigError("rotation experiment needs a mesh recipe");
    const Mesh mesh = problem.make_mesh(opts.n, opts.n);
    const Mesh rotated = rotate_mesh(mesh, opts.angle);
    const DgSpace space(mesh, opts.k), space_rot(rotated, opts.k);

    ModalState u0 = project(space, 4, problem.initial);
    // Exact rotated initial data: rotate every modal coefficient's momentum.
    ModalState v0 = u0;
    for (std::size_t c = 0; c < u0.cells(); ++c)
        for (int m = 0; m < u0.modes(); ++m) {
            State s{};
            for (int i = 0; i < 4; ++i) s[i] = u0.at(c, m, i);
            s = rotate_state(s, opts.angle);
            for (int i = 0; i < 4; ++i) v0.at(c, m, i) = s[i];
        }

    SolverOptions so;
    so.rk = RkKind::Ssp33;
    so.oe = opts.oe;
    so.bp = opts.bp;
    so.t_end = problem.t_end;
    so.max_steps = opts.steps;

    std::vector<std::vector<std::array<double, 4>>> reference;
    run(space, *euler, problem.boundary, u0, so,
        [&](const ModalState& u, double, int) { reference.push_back(primitive_averages(*euler, u, 0.0)); });
    double worst = 0.0;
    run(space_rot, *euler, problem.boundary, v0, so, [&](const ModalState& u, double, int step) {
        const auto prim = primitive_averages(*euler, u, opts.angle);
        const auto& ref = reference.at(step - 1);
        double err = 0.0;
        for (std::size_t c = 0; c < prim.size(); ++c)
            for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(prim[c][i] - ref[c][i]));
        if (history) history->push_back(err);
        worst = std::max(worst, err);
    });
    return worst;
}

}  // namespace oedg
