// Command-line driver: run, convergence, decomp, cflscan.
#include "oedg/cli_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

std::array<oedg::Point, 3> parse_triangle(const std::vector<double>& v) {
    if (v.size() != 6) throw oedg::ConfigError("vertices: expected six numbers x1 y1 x2 y2 x3 y3");
    return {oedg::Point{v[0], v[1]}, oedg::Point{v[2], v[3]}, oedg::Point{v[4], v[5]}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oscillation-eliminating DG solver on triangular meshes"};
    app.require_subcommand(1);

    oedg::RunConfig cfg;
    std::string config_path, gen, times, sample, rk;
    std::optional<double> t_end;
    auto* run = app.add_subcommand("run", "Solve a built-in problem and write snapshots");
    run->add_option("--config", config_path, "key=value file; flags override it");
    run->add_option("--problem", cfg.problem)->check(CLI::IsMember(oedg::problem_ids()));
    run->add_option("--k", cfg.k, "polynomial degree 1..4");
    run->add_option("--rk", rk, "ssp22 | ssp33 | ssp54");
    run->add_option("--oe", cfg.oe, "off | cw | ri");
    run->add_option("--bp", cfg.bp, "off | zxs | dcw");
    run->add_option("--alpha", cfg.alpha, "auto | averages | traces");
    run->add_option("--mesh", cfg.mesh, "mesh file");
    run->add_option("--gen", gen, "structured resolution nx,ny");
    run->add_option("--tend", t_end);
    run->add_option("--times", times, "comma-separated output times");
    run->add_option("--out", cfg.out, "output directory");
    run->add_option("--cfl", cfg.cfl, "multiplier on the stable step");
    run->add_option("--steps", cfg.steps, "stop after this many steps");
    run->add_option("--sample", sample, "point-sampling grid nx,ny");
    run->add_option("--seed", cfg.seed);

    std::string conv_problem = "advection_smooth", conv_oe = "cw";
    int conv_k = 1, conv_levels = 4;
    auto* conv = app.add_subcommand("convergence", "Error table under uniform refinement");
    conv->add_option("--problem", conv_problem)->check(CLI::IsMember(oedg::problem_ids()));
    conv->add_option("--k", conv_k);
    conv->add_option("--levels", conv_levels);
    conv->add_option("--oe", conv_oe);

    std::vector<double> verts;
    int decomp_k = 1;
    std::string scheme = "all";
    auto* decomp = app.add_subcommand("decomp", "Convex decomposition of one triangle");
    decomp->add_option("--vertices", verts, "x1 y1 x2 y2 x3 y3")->required()->expected(6);
    decomp->add_option("--k", decomp_k);
    decomp->add_option("--scheme", scheme, "dcw | zxs | cs | all");

    std::size_t scan_count = 10000;
    std::string scan_mesh;
    int scan_k = 1;
    std::uint64_t scan_seed = 1;
    auto* scan = app.add_subcommand("cflscan", "Extrema of CFL-number ratios");
    scan->add_option("--count", scan_count, "random triangles");
    scan->add_option("--mesh", scan_mesh, "scan a mesh file instead");
    scan->add_option("--k", scan_k);
    scan->add_option("--seed", scan_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : oedg::kExitConfig;
    }

    if (*run) {
        return oedg::guarded(std::cerr, [&]() {
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw oedg::ConfigError("cannot open config '" + config_path + "'");
                oedg::RunConfig base;
                oedg::apply_key_values(base, oedg::parse_key_values(in));
                // Flags given on the command line take precedence over the file.
                for (const auto* opt : run->get_options()) {
                    if (opt->count() != 0 || opt->get_name() == "--help" || opt->get_name() == "--config") continue;
                    const std::string n = opt->get_name();
                    if (n == "--problem") cfg.problem = base.problem;
                    else if (n == "--k") cfg.k = base.k;
                    else if (n == "--rk") cfg.rk = base.rk;
                    else if (n == "--oe") cfg.oe = base.oe;
                    else if (n == "--bp") cfg.bp = base.bp;
                    else if (n == "--alpha") cfg.alpha = base.alpha;
                    else if (n == "--mesh") cfg.mesh = base.mesh;
                    else if (n == "--gen") cfg.gen = base.gen;
                    else if (n == "--tend") cfg.t_end = base.t_end;
                    else if (n == "--times") cfg.times = base.times;
                    else if (n == "--out") cfg.out = base.out;
                    else if (n == "--cfl") cfg.cfl = base.cfl;
                    else if (n == "--steps") cfg.steps = base.steps;
                    else if (n == "--sample") cfg.sample = base.sample;
                    else if (n == "--seed") cfg.seed = base.seed;
                }
            }
            if (!rk.empty()) cfg.rk = rk;
            if (!gen.empty()) cfg.gen = oedg::parse_pair(gen, "gen");
            if (t_end) cfg.t_end = t_end;
            if (!times.empty()) cfg.times = oedg::parse_list(times, "times");
            if (!sample.empty()) cfg.sample = oedg::parse_pair(sample, "sample");
            return oedg::cmd_run(cfg, std::cout, std::cerr);
        });
    }
    if (*conv) return oedg::cmd_convergence(conv_problem, conv_k, conv_levels, conv_oe, std::cout, std::cerr);
    if (*decomp)
        return oedg::guarded(std::cerr, [&]() {
            return oedg::cmd_decomp(parse_triangle(verts), decomp_k, scheme, std::cout, std::cerr);
        });
    return oedg::cmd_cflscan(scan_count, scan_mesh, scan_k, scan_seed, std::cout, std::cerr);
}
