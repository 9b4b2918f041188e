#pragma once

#include "oedg/bp.hpp"
#include "oedg/oe_filter.hpp"
#include "oedg/time_integrator.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace oedg {

enum class AlphaMode { Auto, Averages, Traces };
enum class StepRule { Cfl, P4Reproduction };

struct SolverOptions {
    RkKind rk = RkKind::Ssp33;
    OeMode oe = OeMode::ComponentWise;
    BpScheme bp = BpScheme::Off;
    AlphaMode alpha = AlphaMode::Auto;  // Auto: traces with BP, averages otherwise
    StepRule step_rule = StepRule::Cfl;
    double cfl_scale = 1.0;
    double t_end = 0.0;
    std::vector<double> output_times;
    int max_steps = -1;  // stop after this many steps even before t_end
    std::optional<std::pair<double, double>> scalar_bounds;
};

struct Snapshot {
    double time;
    ModalState state;
};

struct RunResult {
    ModalState state;
    double time = 0.0;
    int steps = 0;
    std::vector<double> dt_history;
    std::vector<Snapshot> snapshots;
    double wall_seconds = 0.0;

    double average_dt() const;
};

using StepObserver = std::function<void(const ModalState& u, double t, int step)>;

/// Time loop: per step a global alpha and dt, then one RK step with OE and BP applied after each stage.
RunResult run(const DgSpace& space, const Model& model, const BoundarySpec& bc, ModalState u,
              const SolverOptions& opts, const StepObserver& observer = {});

/// The stage hook used by run(): OE with the step size, then the BP limiter.
StageHook make_stage_hook(const DgSpace& space, const Model& model, const BoundarySpec& bc,
                          const SolverOptions& opts, const BpLimiter& limiter, const double& dt);

void apply_bp(const BpLimiter& limiter, const Model& model, const SolverOptions& opts, ModalState& u);

}  // namespace oedg
