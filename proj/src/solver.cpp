#include "oedg/solver.hpp"

#include "oedg/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace oedg {

double RunResult::average_dt() const {
    if (dt_history.empty()) return 0.0;
    double s = 0.0;
    for (double dt : dt_history) s += dt;
    return s / static_cast<double>(dt_history.size());
}

void apply_bp(const BpLimiter& limiter, const Model& model, const SolverOptions& opts, ModalState& u) {
    if (limiter.scheme() == BpScheme::Off) return;
    if (model.is_euler()) {
        limiter.limit_euler(u, dynamic_cast<const Euler&>(model));
    } else {
        if (!opts.scalar_bounds) throw ConfigError("scalar bound-preserving runs need bounds");
        limiter.limit_scalar(u, opts.scalar_bounds->first, opts.scalar_bounds->second);
    }
}

StageHook make_stage_hook(const DgSpace& space, const Model& model, const BoundarySpec& bc,
                          const SolverOptions& opts, const BpLimiter& limiter, const double& dt) {
    OeOptions oe{opts.oe, opts.bp == BpScheme::Off};
    return [&space, &model, &bc, &opts, &limiter, &dt, oe](ModalState& u, double t) {
        apply_oe(space, model, bc, u, dt, t, oe);
        apply_bp(limiter, model, opts, u);
    };
}

namespace {

void check_finite(const ModalState& u) {
    for (double v : u.data())
        if (!std::isfinite(v)) throw NumericError("non-finite coefficient");
}

}  // namespace

RunResult run(const DgSpace& space, const Model& model, const BoundarySpec& bc, ModalState u,
              const SolverOptions& opts, const StepObserver& observer) {
    const auto start = std::chrono::steady_clock::now();
    const Mesh& mesh = space.mesh();
    const RkScheme scheme = RkScheme::make(opts.rk);
    const BpLimiter limiter(space, opts.bp);
    const bool use_traces =
        opts.alpha == AlphaMode::Traces || (opts.alpha == AlphaMode::Auto && opts.bp != BpScheme::Off);

    std::vector<double> outputs = opts.output_times;
    std::sort(outputs.begin(), outputs.end());
    for (double t : outputs)
        if (t < 0.0 || t > opts.t_end) throw ConfigError("output time outside [0, t_end]");

    RunResult result;
    apply_bp(limiter, model, opts, u);
    double t = 0.0;
    std::size_t next_out = 0;
    auto emit = [&]() {
        for (; next_out < outputs.size() && outputs[next_out] <= t; ++next_out) result.snapshots.push_back({t, u});
    };
    emit();

    double dt = 0.0;
    const StageHook hook = make_stage_hook(space, model, bc, opts, limiter, dt);
    while (t < opts.t_end && (opts.max_steps < 0 || result.steps < opts.max_steps)) {
        const double alpha = use_traces ? alpha_from_traces(space, model, bc, u, t) : alpha_from_averages(space, model, u);
        if (opts.step_rule == StepRule::P4Reproduction) dt = p4_reproduction_timestep(mesh, scheme.c_ssp);
        else if (alpha <= 0.0) dt = HUGE_VAL;
        else if (opts.bp != BpScheme::Off) dt = bp_timestep(mesh, alpha, scheme.c_ssp, opts.bp, space.degree());
        else dt = generic_timestep(mesh, alpha, scheme.c_ssp, space.degree());
        dt *= opts.cfl_scale;
        double target = opts.t_end;
        if (next_out < outputs.size()) target = std::min(target, outputs[next_out]);
        bool clipped = false;
        if (t + dt >= target) {
            dt = target - t;
            clipped = true;
        }
        if (!(dt > 0.0) || !std::isfinite(dt)) throw NumericError("degenerate time step at t = " + std::to_string(t));

        ResidualFn residual = [&](const ModalState& s, double ts, ModalState& out) {
            compute_residual({space, model, bc, alpha, ts}, s, out);
        };
        advance(scheme, u, t, dt, residual, hook);
        check_finite(u);
        t = clipped ? target : t + dt;
        ++result.steps;
        result.dt_history.push_back(dt);
        if (observer) observer(u, t, result.steps);
        emit();
    }
    result.state = std::move(u);
    result.time = t;
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace oedg
