/// @file timestepper.hpp
/// @brief Time integration of the NPB system.
///
/// Two schemes share the same exact diffusion factors
/// exp(-coeff 4 pi^2 |k|^2 dt) with coeff = D, nu, kappa:
///
///  - imex_rk2: Heun predictor-corrector on the non-stiff right-hand side,
///    electric fields recomputed at each stage.
///  - picard:   per-step fixed-point iteration in the order T -> u -> c_i,
///    each sweep using the lagged velocity, potential and concentrations.
///    Its fixed point is the integrating-factor trapezoidal rule, so both
///    schemes are second order and agree to O(dt^2).

#pragma once

#include "npb/errors.hpp"
#include "npb/grid.hpp"
#include "npb/state.hpp"

#include <functional>
#include <optional>
#include <string>

namespace npb {

enum class Scheme { ImexRk2, Picard };

struct StepControl {
    double dt = 1e-3;
    double cfl_target = 0.4;
    double dt_min = 1e-6;
    double dt_max = 1e-2;
    Scheme mode = Scheme::ImexRk2;
    double picard_tol = 1e-10;
    int picard_max_iter = 50;

    /// Fixed step of size dt (dt_min = dt_max = dt).
    static StepControl fixed(double dt, Scheme mode = Scheme::ImexRk2);

    std::optional<std::string> check() const;
};

/// One Heun step of size ctrl.dt; reference values are taken from @p s.
/// @throws StateInvalid if the new state fails validate_state.
SimState imex_step(const SimState& s, const PhysParams& p, const Grid& g, const StepControl& ctrl);
SimState imex_step(const SimState& s, const ReferenceValues& ref, const PhysParams& p, const Grid& g, double dt);

struct PicardResult {
    SimState state;
    int iterations = 0;
};

/// One fixed-point-solved step of size ctrl.dt.
/// @throws PicardDiverged if ctrl.picard_max_iter sweeps do not reach ctrl.picard_tol.
/// @throws StateInvalid if the converged state fails validate_state.
PicardResult picard_step(const SimState& s, const PhysParams& p, const Grid& g, const StepControl& ctrl);
PicardResult picard_step(const SimState& s, const ReferenceValues& ref, const PhysParams& p, const Grid& g,
                         const StepControl& ctrl);

/// cfl_target * spacing / max|J_eta u|, clamped to [dt_min, dt_max].
double stable_dt(const SimState& s, const PhysParams& p, const Grid& g, const StepControl& ctrl);

struct RunHooks {
    /// Output cadence in steps; the initial and final states are always emitted.
    std::size_t every = 0;
    std::function<void(const SimState&, std::size_t step)> on_output;
};

struct RunResult {
    SimState state;
    std::size_t steps = 0;
};

/// Raised by run() when a step fails; carries the last valid state.
class RunAborted : public Error {
public:
    RunAborted(const std::string& what, SimState last, std::size_t steps, bool picard)
        : Error(what), last_state(std::move(last)), steps_completed(steps), picard_diverged(picard)
    {
    }

    SimState last_state;
    std::size_t steps_completed;
    bool picard_diverged;
};

/// Advances @p s0 to absolute time @p t_end.
/// @throws RunAborted on StateInvalid, PicardDiverged or a temperature floor breach;
///         the last valid state is reported to the hook first.
RunResult run(const SimState& s0, const PhysParams& p, const Grid& g, const StepControl& ctrl, double t_end,
              const RunHooks& hooks = {});

} // namespace npb
