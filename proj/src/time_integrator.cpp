#include "oedg/time_integrator.hpp"

#include "oedg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace oedg {

RkScheme RkScheme::make(RkKind kind) {
    RkScheme s;
    s.kind = kind;
    switch (kind) {
    case RkKind::Ssp22:
        s.name = "ssp22";
        s.c_ssp = 1.0;
        s.alpha = {{1.0}, {0.5, 0.5}};
        s.beta = {{1.0}, {0.0, 0.5}};
        break;
    case RkKind::Ssp33:
        s.name = "ssp33";
        s.c_ssp = 1.0;
        s.alpha = {{1.0}, {0.75, 0.25}, {1.0 / 3.0, 0.0, 2.0 / 3.0}};
        s.beta = {{1.0}, {0.0, 0.25}, {0.0, 0.0, 2.0 / 3.0}};
        break;
    case RkKind::Ssp54:
        // Spiteri-Ruuth five-stage fourth-order scheme.
        s.name = "ssp54";
        s.c_ssp = 1.508;
        s.alpha = {{1.0},
                   {0.444370493651235, 0.555629506348765},
                   {0.620101851488403, 0.0, 0.379898148511597},
                   {0.178079954393132, 0.0, 0.0, 0.821920045606868},
                   {0.0, 0.0, 0.517231671970585, 0.096059710526147, 0.386708617503269}};
        s.beta = {{0.391752226571890},
                  {0.0, 0.368410593050371},
                  {0.0, 0.0, 0.251891774271694},
                  {0.0, 0.0, 0.0, 0.544974750228521},
                  {0.0, 0.0, 0.0, 0.063692468666290, 0.226007483236906}};
        break;
    }
    s.stage_time = {0.0};
    for (std::size_t i = 0; i + 1 < s.alpha.size(); ++i) {
        double c = 0.0;
        for (std::size_t j = 0; j < s.alpha[i].size(); ++j) c += s.alpha[i][j] * s.stage_time[j] + s.beta[i][j];
        s.stage_time.push_back(c);
    }
    return s;
}

RkKind parse_rk(const std::string& s) {
    if (s == "ssp22" || s == "rk2") return RkKind::Ssp22;
    if (s == "ssp33" || s == "rk3") return RkKind::Ssp33;
    if (s == "ssp54" || s == "rk4") return RkKind::Ssp54;
    throw ConfigError("unknown rk scheme '" + s + "' (expected ssp22, ssp33 or ssp54)");
}

RkKind default_rk_for_degree(int k) {
    if (k <= 1) return RkKind::Ssp22;
    if (k == 2) return RkKind::Ssp33;
    return RkKind::Ssp54;
}

void advance(const RkScheme& scheme, ModalState& u, double t, double dt, const ResidualFn& residual,
             const StageHook& hook) {
    const int ns = scheme.stages();
    std::vector<ModalState> stage{u};
    std::vector<ModalState> rate(ns);
    std::vector<char> have_rate(ns, 0);
    for (int i = 0; i < ns; ++i) {
        try {
            for (int j = 0; j <= i; ++j)
                if (scheme.beta[i][j] != 0.0 && !have_rate[j]) {
                    residual(stage[j], t + scheme.stage_time[j] * dt, rate[j]);
                    have_rate[j] = 1;
                }
            ModalState next(u.cells(), u.degree(), u.components());
            auto& out = next.data();
            for (int j = 0; j <= i; ++j) {
                const double a = scheme.alpha[i][j], b = scheme.beta[i][j] * dt;
                if (a != 0.0) {
                    const auto& src = stage[j].data();
                    for (std::size_t n = 0; n < out.size(); ++n) out[n] += a * src[n];
                }
                if (b != 0.0) {
                    const auto& src = rate[j].data();
                    for (std::size_t n = 0; n < out.size(); ++n) out[n] += b * src[n];
                }
            }
            const double t_next = i + 1 < ns ? t + scheme.stage_time[i + 1] * dt : t + dt;
            if (hook) hook(next, t_next);
            stage.push_back(std::move(next));
        } catch (const AdmissibilityError& e) {
            throw AdmissibilityError(e, " [stage " + std::to_string(i + 1) + "]");
        } catch (const NumericError& e) {
            throw NumericError(std::string(e.what()) + " [stage " + std::to_string(i + 1) + "]");
        }
    }
    u = std::move(stage.back());
}

double generic_timestep(const Mesh& mesh, double alpha, double c_ssp, int k) {
    double m = HUGE_VAL;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        m = std::min(m, mesh.area(c) / ((2.0 * k + 1.0) * mesh.perimeter(c)));
    return c_ssp / alpha * m;
}

double p4_reproduction_timestep(const Mesh& mesh, double c_ssp) {
    double m = HUGE_VAL;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) m = std::min(m, mesh.area(c) / mesh.perimeter(c));
    return c_ssp / 9.0 * std::pow(m, 1.25);
}

}  // namespace oedg
