#pragma once

#include "oedg/errors.hpp"
#include "oedg/harness.hpp"

#include <cstdint>
#include <ostream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oedg {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitAdmissibility = 3, kExitNumeric = 4 };

struct RunConfig {
    std::string problem = "advection_smooth";
    int k = 1;
    std::optional<std::string> rk;
    std::string oe = "cw";   // off | cw | ri
    std::string bp = "off";  // off | zxs | dcw
    std::string alpha = "auto";
    std::string mesh;        // mesh file; empty to use the generator
    std::optional<std::pair<int, int>> gen;
    std::optional<double> t_end;
    std::vector<double> times;
    std::string out = "out";
    double cfl = 1.0;
    int steps = -1;
    std::optional<std::pair<int, int>> sample;
    std::uint64_t seed = 1;
};

/// Flat key=value text; '#' starts a comment. Unknown keys are configuration errors.
std::map<std::string, std::string> parse_key_values(std::istream& in);
void apply_key_values(RunConfig& cfg, const std::map<std::string, std::string>& kv);
void validate(const RunConfig& cfg);

OeMode parse_oe(const std::string& s);
BpScheme parse_bp(const std::string& s);
std::pair<int, int> parse_pair(const std::string& s, const std::string& field);
std::vector<double> parse_list(const std::string& s, const std::string& field);

void write_snapshot(std::ostream& out, const Mesh& mesh, const ModalState& u);
void write_samples(std::ostream& out, const DgSpace& space, const ModalState& u, int nx, int ny);
void write_convergence(std::ostream& out, const std::vector<ConvergenceRow>& rows);

/// Subcommands; diagnostics go to err, exit codes follow ExitCode.
int cmd_run(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_convergence(const std::string& problem, int k, int levels, const std::string& oe, std::ostream& out,
                    std::ostream& err);
int cmd_decomp(const std::array<Point, 3>& tri, int k, const std::string& scheme, std::ostream& out,
               std::ostream& err);
int cmd_cflscan(std::size_t count, const std::string& mesh_path, int k, std::uint64_t seed, std::ostream& out,
                std::ostream& err);

/// Maps the library's exceptions to exit codes, printing the message.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "mesh parse error: " << e.what() << '\n';
    } catch (const TopologyError& e) {
        err << "mesh topology error: " << e.what() << '\n';
    } catch (const GeometryError& e) {
        err << "mesh geometry error: " << e.what() << '\n';
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
    } catch (const AdmissibilityError& e) {
        err << "admissibility error: " << e.what() << '\n';
        return kExitAdmissibility;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitConfig;
}

}  // namespace oedg
