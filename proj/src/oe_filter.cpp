#include "oedg/oe_filter.hpp"

#include "oedg/errors.hpp"
#include "oedg/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace oedg {

namespace {

constexpr double kGuard = 1e-12;

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double binomial(int n, int r) { return factorial(n) / (factorial(r) * factorial(n - r)); }

int combo_index(int j, int a) { return j * (j + 1) / 2 + a; }

// Physical mixed derivatives d^a/dx^a d^(j-a)/dy^(j-a) of every component at the three vertices,
// laid out [vertex][combo][component].
void vertex_derivatives(const DgSpace& space, const ModalState& u, std::size_t c, std::vector<double>& out) {
    const int k = space.degree(), d = u.components(), nc = num_modes(k);
    out.assign(3 * nc * d, 0.0);
    const auto& ji = space.mesh().inverse_jacobian(c);
    auto dx = [&](const RefPoly& p) {
        RefPoly r = p.d_xi() * ji[0];
        r += p.d_eta() * ji[2];
        return r;
    };
    auto dy = [&](const RefPoly& p) {
        RefPoly r = p.d_xi() * ji[1];
        r += p.d_eta() * ji[3];
        return r;
    };
    auto at_vertices = [](const RefPoly& p, double v[3]) {
        v[0] = p.coeff[0][0];
        v[1] = v[2] = 0.0;
        for (int i = 0; i <= kMaxDegree; ++i) {
            v[1] += p.coeff[i][0];
            v[2] += p.coeff[0][i];
        }
    };
    for (int comp = 0; comp < d; ++comp) {
        RefPoly p;
        for (int m = 0; m < space.modes(); ++m) p += basis_poly(m) * u.at(c, m, comp);
        std::vector<RefPoly> ypow(k + 1);
        ypow[0] = p;
        for (int b = 1; b <= k; ++b) ypow[b] = dy(ypow[b - 1]);
        for (int j = 0; j <= k; ++j)
            for (int a = 0; a <= j; ++a) {
                RefPoly q = ypow[j - a];
                for (int i = 0; i < a; ++i) q = dx(q);
                double v[3];
                at_vertices(q, v);
                for (int vi = 0; vi < 3; ++vi) out[(vi * nc + combo_index(j, a)) * d + comp] = v[vi];
            }
    }
}

struct FaceData {
    double beta = 0.0;
    // Half the weighted sum of squared jumps over both endpoints: [j][component], then momentum n/t per j.
    std::vector<double> jump2;
    std::vector<double> jump2_normal, jump2_tangent;
};

}  // namespace

double jump_constant(int k, int j) { return (2.0 * j + 1.0) / ((2.0 * k - 1.0) * factorial(j)); }

Deviation global_deviation(const DgSpace& space, const ModalState& u, bool with_momentum) {
    const Mesh& mesh = space.mesh();
    const int d = u.components();
    Deviation dev;
    double total = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        total += mesh.area(c);
        for (int k = 0; k < d; ++k) dev.mean[k] += mesh.area(c) * u.at(c, 0, k);
    }
    for (int k = 0; k < d; ++k) dev.mean[k] /= total;
    dev.momentum_mean = with_momentum ? std::hypot(dev.mean[1], dev.mean[2]) : 0.0;
    const QuadRule& rule = space.volume_rule();
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        for (std::size_t q = 0; q < rule.size(); ++q) {
            State v = space.evaluate(u, c, space.psi_volume(q));
            for (int k = 0; k < d; ++k) dev.max_dev[k] = std::max(dev.max_dev[k], std::abs(v[k] - dev.mean[k]));
            if (with_momentum)
                dev.momentum_dev =
                    std::max(dev.momentum_dev, std::hypot(v[1] - dev.mean[1], v[2] - dev.mean[2]));
        }
    return dev;
}

Damping compute_damping(const DgSpace& space, const Model& model, const BoundarySpec& bc, const ModalState& u,
                        double time, const OeOptions& opts) {
    const Mesh& mesh = space.mesh();
    const int k = space.degree(), d = u.components(), nc = num_modes(k);
    const bool rioe = opts.mode == OeMode::RotationInvariant;
    if (rioe && !model.is_euler()) throw ConfigError("rotation-invariant OE requires the Euler model");

    Damping out;
    out.degree = k;
    out.components = d;
    out.sigma.assign(mesh.num_cells() * (k + 1) * d, 0.0);
    if (opts.mode == OeMode::Off) return out;

    const Deviation dev = global_deviation(space, u, rioe);

    std::vector<std::vector<double>> deriv(mesh.num_cells());
    parallel_for(mesh.num_cells(), [&](std::size_t c) { vertex_derivatives(space, u, c, deriv[c]); });

    auto speed = [&](const State& s, Point n, const State& fallback) {
        if (opts.strict_traces) return model.wavespeed(s, n);
        try {
            if (model.admissible(s)) return model.wavespeed(s, n);
        } catch (const AdmissibilityError&) {
        }
        return model.wavespeed(fallback, n);
    };

    const auto& faces = mesh.faces();
    std::vector<FaceData> face_data(faces.size());
    parallel_for(faces.size(), [&](std::size_t f) {
        const Face& face = faces[f];
        FaceData& fd = face_data[f];
        fd.jump2.assign((k + 1) * d, 0.0);
        if (rioe) {
            fd.jump2_normal.assign(k + 1, 0.0);
            fd.jump2_tangent.assign(k + 1, 0.0);
        }
        const Point n = mesh.normal(face.left, face.left_edge);
        const std::vector<double>& dl = deriv[face.left];
        const int left_v[2] = {(face.left_edge + 1) % 3, (face.left_edge + 2) % 3};
        const BoundaryRule* rule = face.boundary() ? &bc.rule(face.tag.kind) : nullptr;
        const State avg_left = u.average(face.left);
        const State avg_right = rule ? rule->ghost(avg_left, mesh.centroid(face.left), n, time)
                                     : u.average(face.right);

        for (int p = 0; p < 2; ++p) {
            const double* vl = &dl[left_v[p] * nc * d];
            std::vector<double> jump(nc * d);
            State trace_left{}, trace_right{};
            for (int comp = 0; comp < d; ++comp) trace_left[comp] = vl[comp];
            if (!rule) {
                const int right_v = p == 0 ? (face.right_edge + 2) % 3 : (face.right_edge + 1) % 3;
                const double* vr = &deriv[face.right][right_v * nc * d];
                for (int i = 0; i < nc * d; ++i) jump[i] = vl[i] - vr[i];
                for (int comp = 0; comp < d; ++comp) trace_right[comp] = vr[comp];
            } else {
                const Point x = mesh.vertex(face.left, left_v[p]);
                trace_right = rule->ghost(trace_left, x, n, time);
                for (int comp = 0; comp < d; ++comp) jump[comp] = trace_left[comp] - trace_right[comp];
                for (int ci = 1; ci < nc; ++ci) {
                    State deriv_int{};
                    for (int comp = 0; comp < d; ++comp) deriv_int[comp] = vl[ci * d + comp];
                    State deriv_ghost{};
                    if (rule->kind == GhostKind::Outflow) deriv_ghost = deriv_int;
                    else if (rule->kind == GhostKind::Wall && model.is_euler()) deriv_ghost = reflect_state(deriv_int, n);
                    else if (rule->kind == GhostKind::Wall) deriv_ghost = deriv_int;
                    for (int comp = 0; comp < d; ++comp) jump[ci * d + comp] = deriv_int[comp] - deriv_ghost[comp];
                }
            }
            fd.beta = std::max({fd.beta, speed(trace_left, n, avg_left), speed(trace_right, n, avg_right)});

            for (int j = 0; j <= k; ++j)
                for (int a = 0; a <= j; ++a) {
                    const double w = 0.5 * binomial(j, a);
                    const double* jp = &jump[combo_index(j, a) * d];
                    for (int comp = 0; comp < d; ++comp) fd.jump2[j * d + comp] += w * jp[comp] * jp[comp];
                    if (rioe) {
                        const double jn = n.x * jp[1] + n.y * jp[2];
                        const double jt = -n.y * jp[1] + n.x * jp[2];
                        fd.jump2_normal[j] += w * jn * jn;
                        fd.jump2_tangent[j] += w * jt * jt;
                    }
                }
        }
    });

    State active{};
    for (int comp = 0; comp < d; ++comp)
        active[comp] = dev.max_dev[comp] > kGuard * std::max(1.0, std::abs(dev.mean[comp])) ? 1.0 : 0.0;
    const bool momentum_active = rioe && dev.momentum_dev > kGuard * std::max(1.0, dev.momentum_mean);

    parallel_for(mesh.num_cells(), [&](std::size_t c) {
        for (int e = 0; e < 3; ++e) {
            const FaceData& fd = face_data[mesh.face_of(c, e)];
            const double h = 2.0 * mesh.area(c) / mesh.edge_length(c, e);
            const double rate = fd.beta / h;
            double hj = 1.0;
            for (int j = 0; j <= k; ++j, hj *= h) {
                const double scale = rate * jump_constant(k, j) * hj;
                for (int comp = 0; comp < d; ++comp) {
                    double delta;
                    if (rioe && (comp == 1 || comp == 2)) {
                        if (!momentum_active) continue;
                        delta = std::sqrt(std::max(fd.jump2_normal[j], fd.jump2_tangent[j])) / dev.momentum_dev;
                    } else {
                        if (active[comp] == 0.0) continue;
                        delta = std::sqrt(fd.jump2[j * d + comp]) / dev.max_dev[comp];
                    }
                    out.at(c, j, comp) += scale * delta;
                }
            }
        }
    });
    return out;
}

void apply_damping(ModalState& u, const Damping& damping, double dt) {
    const int k = u.degree(), d = u.components();
    parallel_for(u.cells(), [&](std::size_t c) {
        for (int comp = 0; comp < d; ++comp) {
            double exponent = damping.at(c, 0, comp);
            for (int m = 1; m <= k; ++m) {
                exponent += damping.at(c, m, comp);
                const double factor = std::exp(-dt * exponent);
                for (int mode = block_end(m - 1) + 1; mode <= block_end(m); ++mode) u.at(c, mode, comp) *= factor;
            }
        }
    });
}

void apply_oe(const DgSpace& space, const Model& model, const BoundarySpec& bc, ModalState& u, double dt,
              double time, const OeOptions& opts) {
    if (opts.mode == OeMode::Off || dt == 0.0) return;
    apply_damping(u, compute_damping(space, model, bc, u, time, opts), dt);
}

}  // namespace oedg
