#include "oedg/cli_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace oedg {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_order(double v) {
    if (!std::isfinite(v)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

int to_int(const std::string& s, const std::string& field) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(field + ": expected an integer, got '" + s + "'");
}

double to_double(const std::string& s, const std::string& field) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(field + ": expected a number, got '" + s + "'");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::pair<int, int> parse_pair(const std::string& s, const std::string& field) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw ConfigError(field + ": expected 'a,b', got '" + s + "'");
    return {to_int(trim(s.substr(0, comma)), field), to_int(trim(s.substr(comma + 1)), field)};
}

std::vector<double> parse_list(const std::string& s, const std::string& field) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(to_double(trim(item), field));
    return out;
}

void apply_key_values(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "problem") cfg.problem = value;
        else if (key == "k") cfg.k = to_int(value, key);
        else if (key == "rk") cfg.rk = value;
        else if (key == "oe") cfg.oe = value;
        else if (key == "bp") cfg.bp = value;
        else if (key == "alpha") cfg.alpha = value;
        else if (key == "mesh") cfg.mesh = value;
        else if (key == "gen") cfg.gen = parse_pair(value, key);
        else if (key == "tend") cfg.t_end = to_double(value, key);
        else if (key == "times") cfg.times = parse_list(value, key);
        else if (key == "out") cfg.out = value;
        else if (key == "cfl") cfg.cfl = to_double(value, key);
        else if (key == "steps") cfg.steps = to_int(value, key);
        else if (key == "sample") cfg.sample = parse_pair(value, key);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(value, key));
        else throw ConfigError("unknown config key '" + key + "'");
    }
}

OeMode parse_oe(const std::string& s) {
    if (s == "off") return OeMode::Off;
    if (s == "cw") return OeMode::ComponentWise;
    if (s == "ri") return OeMode::RotationInvariant;
    throw ConfigError("oe: expected off, cw or ri, got '" + s + "'");
}

BpScheme parse_bp(const std::string& s) {
    if (s == "off") return BpScheme::Off;
    if (s == "zxs") return BpScheme::Classical;
    if (s == "dcw") return BpScheme::Optimal;
    throw ConfigError("bp: expected off, zxs or dcw, got '" + s + "'");
}

void validate(const RunConfig& cfg) {
    if (cfg.k < 1 || cfg.k > kMaxDegree) throw ConfigError("k: must be in 1..4");
    const OeMode oe = parse_oe(cfg.oe);
    const BpScheme bp = parse_bp(cfg.bp);
    if (bp != BpScheme::Off && cfg.k > 2) throw ConfigError("bp: bound preservation requires k = 1 or 2");
    if (cfg.rk) parse_rk(*cfg.rk);
    if (cfg.alpha != "auto" && cfg.alpha != "averages" && cfg.alpha != "traces")
        throw ConfigError("alpha: expected auto, averages or traces");
    if (!(cfg.cfl > 0)) throw ConfigError("cfl: must be positive");
    if (cfg.t_end && *cfg.t_end < 0) throw ConfigError("tend: must be non-negative");
    if (cfg.gen && (cfg.gen->first < 1 || cfg.gen->second < 1)) throw ConfigError("gen: counts must be >= 1");
    const Problem p = make_problem(cfg.problem);
    if (oe == OeMode::RotationInvariant && !p.model->is_euler()) throw ConfigError("oe: ri requires an Euler problem");
    if (bp != BpScheme::Off && !p.model->is_euler() && !p.bounds)
        throw ConfigError("bp: problem '" + cfg.problem + "' defines no scalar bounds");
    if (cfg.mesh.empty() && !p.make_mesh) throw ConfigError("mesh: problem '" + cfg.problem + "' needs a mesh file");
    const double t_end = cfg.t_end.value_or(p.t_end);
    for (double t : cfg.times)
        if (t < 0 || t > t_end) throw ConfigError("times: output time " + fmt(t) + " outside [0, tend]");
}

void write_snapshot(std::ostream& out, const Mesh& mesh, const ModalState& u) {
    out << "cell_id,centroid_x,centroid_y,mode,component,value\n";
    for (std::size_t c = 0; c < u.cells(); ++c) {
        const Point m = mesh.centroid(c);
        const std::string prefix = std::to_string(c) + ',' + fmt(m.x) + ',' + fmt(m.y) + ',';
        for (int mode = 0; mode < u.modes(); ++mode)
            for (int comp = 0; comp < u.components(); ++comp)
                out << prefix << mode << ',' << comp << ',' << fmt(u.at(c, mode, comp)) << '\n';
    }
}

void write_samples(std::ostream& out, const DgSpace& space, const ModalState& u, int nx, int ny) {
    const Mesh& mesh = space.mesh();
    const auto bb = mesh.bounding_box();
    const double dx = (bb[2] - bb[0]) / nx, dy = (bb[3] - bb[1]) / ny;
    // Bucket cells by bounding box on the sampling grid.
    std::vector<std::vector<int>> bucket(static_cast<std::size_t>(nx + 1) * (ny + 1));
    auto clampi = [](double v, int hi) { return std::max(0, std::min(hi, static_cast<int>(std::floor(v)))); };
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        double x0 = HUGE_VAL, y0 = HUGE_VAL, x1 = -HUGE_VAL, y1 = -HUGE_VAL;
        for (int v = 0; v < 3; ++v) {
            Point p = mesh.vertex(c, v);
            x0 = std::min(x0, p.x), x1 = std::max(x1, p.x), y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
        }
        for (int j = clampi((y0 - bb[1]) / dy - 1e-9, ny); j <= clampi((y1 - bb[1]) / dy + 1e-9, ny); ++j)
            for (int i = clampi((x0 - bb[0]) / dx - 1e-9, nx); i <= clampi((x1 - bb[0]) / dx + 1e-9, nx); ++i)
                bucket[j * (nx + 1) + i].push_back(static_cast<int>(c));
    }
    out << "x,y";
    for (int comp = 0; comp < u.components(); ++comp) out << ",u" << comp;
    out << '\n';
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const Point p{bb[0] + i * dx, bb[1] + j * dy};
            for (int c : bucket[j * (nx + 1) + i]) {
                const auto& ji = mesh.inverse_jacobian(c);
                const Point r = p - mesh.vertex(c, 0);
                const double xi = ji[0] * r.x + ji[1] * r.y, eta = ji[2] * r.x + ji[3] * r.y;
                if (xi < -1e-12 || eta < -1e-12 || xi + eta > 1 + 1e-12) continue;
                const State s = space.evaluate(u, c, xi, eta);
                out << fmt(p.x) << ',' << fmt(p.y);
                for (int comp = 0; comp < u.components(); ++comp) out << ',' << fmt(s[comp]);
                out << '\n';
                break;
            }
        }
}

void write_convergence(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
    out << "N,L1,order1,L2,order2,Linf,orderinf\n";
    char buf[64];
    for (const auto& r : rows) {
        out << r.cells;
        for (auto [e, o] : {std::pair{r.err.l1, r.order.l1}, {r.err.l2, r.order.l2}, {r.err.linf, r.order.linf}}) {
            std::snprintf(buf, sizeof buf, "%.6e", e);
            out << ',' << buf << ',' << fmt_order(o);
        }
        out << '\n';
    }
}

int cmd_run(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    return guarded(err, [&]() {
        validate(cfg);
        const Problem p = make_problem(cfg.problem);
        Mesh mesh;
        if (!cfg.mesh.empty()) mesh = read_mesh_file(cfg.mesh);
        else if (cfg.gen) mesh = p.make_mesh(cfg.gen->first, cfg.gen->second);
        else mesh = p.make_mesh(p.nx, p.ny);

        const DgSpace space(mesh, cfg.k);
        SolverOptions so;
        so.rk = cfg.rk ? parse_rk(*cfg.rk) : cfg.k >= 3 ? RkKind::Ssp54 : p.rk;
        so.oe = parse_oe(cfg.oe);
        so.bp = parse_bp(cfg.bp);
        so.alpha = cfg.alpha == "averages" ? AlphaMode::Averages
                   : cfg.alpha == "traces" ? AlphaMode::Traces
                                           : AlphaMode::Auto;
        so.cfl_scale = cfg.cfl;
        so.t_end = cfg.t_end.value_or(p.t_end);
        so.output_times = cfg.times;
        so.max_steps = cfg.steps;
        so.scalar_bounds = p.bounds;

        std::filesystem::create_directories(cfg.out);
        const std::filesystem::path dir(cfg.out);
        log << "problem " << p.id << ", " << mesh.num_cells() << " cells, k = " << cfg.k << ", t_end = " << so.t_end
            << '\n';

        nlohmann::json meta;
        meta["problem"] = p.id;
        meta["k"] = cfg.k;
        meta["cells"] = mesh.num_cells();
        meta["rk"] = RkScheme::make(so.rk).name;
        meta["oe"] = cfg.oe;
        meta["bp"] = cfg.bp;
        meta["t_end"] = so.t_end;
        auto write_meta = [&](const RunResult& r, const std::string& status) {
            meta["status"] = status;
            meta["steps"] = r.steps;
            meta["final_time"] = r.time;
            meta["average_dt"] = r.average_dt();
            meta["wall_seconds"] = r.wall_seconds;
            std::ofstream(dir / "metadata.json") << meta.dump(2) << '\n';
        };

        const ModalState u0 = project(space, p.model->components(), p.initial);
        RunResult last_good;
        last_good.state = u0;
        RunResult result;
        try {
            result = run(space, *p.model, p.boundary, u0, so, [&](const ModalState& u, double t, int step) {
                last_good.state = u;
                last_good.dt_history.push_back(t - last_good.time);
                last_good.time = t;
                last_good.steps = step;
                if (step % 100 == 0) log << "step " << step << " t = " << t << '\n';
            });
        } catch (const std::exception& e) {
            std::ofstream f(dir / "snapshot_last_good.csv");
            write_snapshot(f, mesh, last_good.state);
            meta["error"] = e.what();
            meta["snapshots"].push_back({{"file", "snapshot_last_good.csv"}, {"time", last_good.time}});
            write_meta(last_good, "aborted");
            throw;
        }
        for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
            const Snapshot& s = result.snapshots[i];
            std::ofstream f(dir / ("snapshot_" + std::to_string(i) + ".csv"));
            write_snapshot(f, mesh, s.state);
            if (cfg.sample) {
                std::ofstream g(dir / ("sample_" + std::to_string(i) + ".csv"));
                write_samples(g, space, s.state, cfg.sample->first, cfg.sample->second);
            }
            meta["snapshots"].push_back({{"file", "snapshot_" + std::to_string(i) + ".csv"}, {"time", s.time}});
        }
        write_meta(result, "ok");
        log << "done: " << result.steps << " steps, average dt " << result.average_dt() << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_convergence(const std::string& problem, int k, int levels, const std::string& oe, std::ostream& out,
                    std::ostream& err) {
    return guarded(err, [&]() {
        if (k < 1 || k > kMaxDegree) throw ConfigError("k: must be in 1..4");
        if (levels < 2) throw ConfigError("levels: must be at least 2");
        ConvergenceOptions opts;
        opts.k = k;
        opts.levels = levels;
        opts.oe = parse_oe(oe);
        write_convergence(out, convergence_study(make_problem(problem), opts));
        return static_cast<int>(kExitOk);
    });
}

int cmd_decomp(const std::array<Point, 3>& tri, int k, const std::string& scheme, std::ostream& out,
               std::ostream& err) {
    return guarded(err, [&]() {
        if (k != 1 && k != 2) throw ConfigError("k: decompositions exist for k = 1, 2");
        if (scheme != "all" && scheme != "dcw" && scheme != "zxs" && scheme != "cs")
            throw ConfigError("scheme: expected dcw, zxs, cs or all");
        const double det = (tri[1].x - tri[0].x) * (tri[2].y - tri[0].y) - (tri[1].y - tri[0].y) * (tri[2].x - tri[0].x);
        if (!(det > 0)) throw ConfigError("vertices: triangle must be non-degenerate and counter-clockwise");
        out << "scheme,k,C_BP,w1,w2,w3,internal_mass,nodes\n";
        auto row = [&](const std::string& name, const ConvexDecomposition* d, double cfl) {
            out << name << ',' << k << ',' << fmt(cfl);
            if (d) {
                for (double w : d->edge_weight) out << ',' << fmt(w);
                out << ',' << fmt(d->internal_mass) << ',';
                for (std::size_t i = 0; i < d->nodes.size(); ++i)
                    out << (i ? ";" : "") << fmt(d->nodes[i].point.x) << ' ' << fmt(d->nodes[i].point.y) << ' '
                        << fmt(d->nodes[i].weight);
            } else {
                out << ",,,,,";
            }
            out << '\n';
        };
        if (scheme == "all" || scheme == "dcw") {
            auto d = optimal_decomposition(tri, k);
            row("dcw", &d, d.cfl);
        }
        if (scheme == "all" || scheme == "zxs") {
            auto d = classical_decomposition(tri, k);
            row("zxs", &d, d.cfl);
        }
        if (scheme == "all" || scheme == "cs") row("cs", nullptr, chen_shu_cfl(tri, k));
        return static_cast<int>(kExitOk);
    });
}

int cmd_cflscan(std::size_t count, const std::string& mesh_path, int k, std::uint64_t seed, std::ostream& out,
                std::ostream& err) {
    return guarded(err, [&]() {
        if (k != 1 && k != 2) throw ConfigError("k: CFL constants exist for k = 1, 2");
        CflScan s;
        std::size_t n = count;
        if (!mesh_path.empty()) {
            const Mesh mesh = read_mesh_file(mesh_path);
            n = mesh.num_cells();
            s = cfl_ratio_scan(mesh, k);
        } else {
            if (count == 0) throw ConfigError("count: must be positive");
            s = cfl_ratio_scan(random_triangles(count, seed), k);
        }
        out << "k,cells,dcw_over_zxs_min,dcw_over_zxs_max,dcw_over_cs_min,dcw_over_cs_max\n";
        out << k << ',' << n << ',' << fmt(s.vs_classical.min) << ',' << fmt(s.vs_classical.max) << ','
            << fmt(s.vs_chen_shu.min) << ',' << fmt(s.vs_chen_shu.max) << '\n';
        return static_cast<int>(kExitOk);
    });
}

}  // namespace oedg
