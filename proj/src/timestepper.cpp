#include "npb/timestepper.hpp"

#include "npb/model.hpp"
#include "npb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace npb {

namespace {

void apply_heat(SpectralState& hat, const PhysParams& p, const Grid& g, double dt)
{
    for (auto& c : hat.concentrations) {
        fourier::scale_by_heat(c, p.D, dt, g);
    }
    for (auto& u : hat.velocity) {
        fourier::scale_by_heat(u, p.nu, dt, g);
    }
    fourier::scale_by_heat(hat.temperature, p.kappa, dt, g);
}

void axpy(SpectralState& y, double a, const SpectralState& x)
{
    for (std::size_t i = 0; i < y.concentrations.size(); ++i) {
        fourier::axpy(y.concentrations[i], a, x.concentrations[i]);
    }
    for (int axis = 0; axis < 3; ++axis) {
        fourier::axpy(y.velocity[axis], a, x.velocity[axis]);
    }
    fourier::axpy(y.temperature, a, x.temperature);
}

void require_valid(const SimState& s, const PhysParams& p)
{
    const auto report = validate_state(s, p, default_nonneg_tol);
    if (!report.ok()) {
        std::ostringstream msg;
        msg << "state at t=" << s.time << " is invalid: " << report.describe();
        throw StateInvalid(msg.str());
    }
}

double difference_norm(const SpectralField& a, const SpectralField& b, const Grid& g)
{
    const auto w = g.hermitian_weight();
    double sum = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) {
        sum += w[s] * std::norm(a[s] - b[s]);
    }
    return std::sqrt(sum);
}

double vector_norm(const SpectralVector& v, const Grid& g)
{
    return std::sqrt(fourier::norm2(v[0], g) + fourier::norm2(v[1], g) + fourier::norm2(v[2], g));
}

double vector_difference(const SpectralVector& a, const SpectralVector& b, const Grid& g)
{
    double sum = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        const double d = difference_norm(a[axis], b[axis], g);
        sum += d * d;
    }
    return std::sqrt(sum);
}

} // namespace

StepControl StepControl::fixed(double dt, Scheme mode)
{
    StepControl c;
    c.dt = dt;
    c.dt_min = dt;
    c.dt_max = dt;
    c.mode = mode;
    return c;
}

std::optional<std::string> StepControl::check() const
{
    if (!(dt > 0.0)) return "time.dt must be > 0";
    if (!(cfl_target > 0.0 && cfl_target <= 1.0)) return "time.cfl_target must lie in (0, 1]";
    if (!(dt_min > 0.0)) return "time.dt_min must be > 0";
    if (!(dt_max >= dt_min)) return "time.dt_max must be >= time.dt_min";
    if (!(dt >= dt_min && dt <= dt_max)) return "time.dt must lie in [time.dt_min, time.dt_max]";
    if (!(picard_tol > 0.0)) return "time.picard_tol must be > 0";
    if (picard_max_iter < 1) return "time.picard_max_iter must be >= 1";
    return std::nullopt;
}

SimState imex_step(const SimState& s, const ReferenceValues& ref, const PhysParams& p, const Grid& g, double dt)
{
    const auto hat0 = to_spectral(s, g);
    const auto n0 = full_rhs(s, hat0, ref, p, g);

    auto pred = hat0;
    axpy(pred, dt, n0);
    apply_heat(pred, p, g, dt);
    const auto s_pred = to_physical(pred, s.time + dt, g);
    const auto n1 = full_rhs(s_pred, pred, ref, p, g);

    auto next = hat0;
    axpy(next, 0.5 * dt, n0);
    apply_heat(next, p, g, dt);
    axpy(next, 0.5 * dt, n1);

    auto out = to_physical(next, s.time + dt, g);
    require_valid(out, p);
    return out;
}

SimState imex_step(const SimState& s, const PhysParams& p, const Grid& g, const StepControl& ctrl)
{
    return imex_step(s, ReferenceValues::from_state(s, p), p, g, ctrl.dt);
}

PicardResult picard_step(const SimState& s, const ReferenceValues& ref, const PhysParams& p, const Grid& g,
                         const StepControl& ctrl)
{
    const double dt = ctrl.dt;
    const std::size_t species = s.concentrations.size();

    const auto hat0 = to_spectral(s, g);
    // E(dt) (X0 + dt/2 N(X0)): the explicit half of the trapezoidal rule.
    auto base = hat0;
    axpy(base, 0.5 * dt, full_rhs(s, hat0, ref, p, g));
    apply_heat(base, p, g, dt);

    SpectralState iter = hat0;
    SimState phys = s;

    auto rho_hat_of = [&](const SpectralState& h) {
        auto rho_hat = g.zero_spectrum();
        for (std::size_t i = 0; i < species; ++i) {
            fourier::axpy(rho_hat, p.faraday() * p.valences[i], h.concentrations[i]);
        }
        return rho_hat;
    };

    ScalarField rho = charge_density(phys.concentrations, p);
    VectorField grad_phi = kernels::mollified_potential_gradient(rho_hat_of(iter), p, g);

    for (int k = 1; k <= ctrl.picard_max_iter; ++k) {
        SpectralState next;
        try {
            // T^{k+1}: transported by J u^{k}.
            const auto w_old = kernels::advecting_velocity(iter.velocity, p.eta, g);
            next.temperature = base.temperature;
            fourier::axpy(next.temperature, 0.5 * dt, kernels::heat_transport(phys.temperature, w_old, g));
            const auto T_new = g.inverse(next.temperature);

            // u^{k+1}: buoyancy from T^{k+1}, c^{k}; electric force from rho^{k}, psi^{k}.
            const auto b = kernels::buoyancy_forcing(T_new, phys.concentrations, ref, p);
            const auto mom = kernels::momentum(phys.velocity, w_old, b, rho, grad_phi, p, g);
            for (int axis = 0; axis < 3; ++axis) {
                next.velocity[axis] = base.velocity[axis];
                fourier::axpy(next.velocity[axis], 0.5 * dt, mom[axis]);
            }

            // c_i^{k+1}: transported by J u^{k+1}, migration with 1/T^{k+1} and psi^{k}.
            const auto w_new = kernels::advecting_velocity(next.velocity, p.eta, g);
            const auto inv_T = kernels::reciprocal_temperature(T_new, p.T_star);
            next.concentrations.resize(species);
            for (std::size_t i = 0; i < species; ++i) {
                next.concentrations[i] = base.concentrations[i];
                fourier::axpy(next.concentrations[i], 0.5 * dt,
                              kernels::nernst_planck(phys.concentrations[i], p.valences[i], w_new, inv_T, grad_phi,
                                                     p, g));
            }
            phys.temperature = T_new;
        } catch (const TemperatureFloorViolated& e) {
            throw PicardDiverged(std::string("fixed-point iterate left the admissible set: ") + e.what());
        }

        // Summed relative L2 change; fields negligible against the state scale use that scale instead.
        std::vector<std::pair<double, double>> parts;
        for (std::size_t i = 0; i < species; ++i) {
            parts.emplace_back(difference_norm(next.concentrations[i], iter.concentrations[i], g),
                               std::sqrt(fourier::norm2(next.concentrations[i], g)));
        }
        parts.emplace_back(vector_difference(next.velocity, iter.velocity, g), vector_norm(next.velocity, g));
        parts.emplace_back(difference_norm(next.temperature, iter.temperature, g),
                           std::sqrt(fourier::norm2(next.temperature, g)));
        double scale = 0.0;
        for (const auto& [d, n] : parts) {
            scale = std::max(scale, n);
        }
        const double floor = std::max(1e-12 * scale, std::numeric_limits<double>::min());
        double change = 0.0;
        for (const auto& [d, n] : parts) {
            change += d / std::max(n, floor);
        }
        if (!std::isfinite(change)) {
            throw PicardDiverged("fixed-point iteration produced non-finite fields at sweep " + std::to_string(k));
        }

        iter = std::move(next);
        for (std::size_t i = 0; i < species; ++i) {
            phys.concentrations[i] = g.inverse(iter.concentrations[i]);
        }
        for (int axis = 0; axis < 3; ++axis) {
            phys.velocity[axis] = g.inverse(iter.velocity[axis]);
        }

        if (change <= ctrl.picard_tol) {
            phys.time = s.time + dt;
            require_valid(phys, p);
            return {std::move(phys), k};
        }

        rho = charge_density(phys.concentrations, p);
        grad_phi = kernels::mollified_potential_gradient(rho_hat_of(iter), p, g);
    }

    std::ostringstream msg;
    msg << "fixed-point iteration did not converge in " << ctrl.picard_max_iter << " sweeps (dt=" << dt << ")";
    throw PicardDiverged(msg.str());
}

PicardResult picard_step(const SimState& s, const PhysParams& p, const Grid& g, const StepControl& ctrl)
{
    return picard_step(s, ReferenceValues::from_state(s, p), p, g, ctrl);
}

double stable_dt(const SimState& s, const PhysParams& p, const Grid& g, const StepControl& ctrl)
{
    if (ctrl.dt_min == ctrl.dt_max) {
        return ctrl.dt_min;
    }
    SpectralVector u_hat{g.forward(s.velocity[0]), g.forward(s.velocity[1]), g.forward(s.velocity[2])};
    const auto w = kernels::advecting_velocity(u_hat, p.eta, g);
    double speed = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        speed = std::max(speed, std::sqrt(w[0][x] * w[0][x] + w[1][x] * w[1][x] + w[2][x] * w[2][x]));
    }
    const double dt = speed > 0.0 ? ctrl.cfl_target * g.spacing() / speed : ctrl.dt_max;
    return std::clamp(dt, ctrl.dt_min, ctrl.dt_max);
}

RunResult run(const SimState& s0, const PhysParams& p, const Grid& g, const StepControl& ctrl, double t_end,
              const RunHooks& hooks)
{
    RunResult result{s0, 0};
    if (hooks.on_output) {
        hooks.on_output(result.state, 0);
    }
    if (!(t_end > s0.time)) {
        return result;
    }

    const auto ref = ReferenceValues::from_state(s0, p);
    bool emitted_last = true;
    while (result.state.time < t_end) {
        double dt = stable_dt(result.state, p, g, ctrl);
        const double remaining = t_end - result.state.time;
        const bool last = remaining <= dt * (1.0 + 1e-9);
        if (last) {
            dt = remaining;
        }
        try {
            SimState next;
            if (ctrl.mode == Scheme::Picard) {
                StepControl step_ctrl = ctrl;
                step_ctrl.dt = dt;
                next = picard_step(result.state, ref, p, g, step_ctrl).state;
            } else {
                next = imex_step(result.state, ref, p, g, dt);
            }
            if (last) {
                next.time = t_end;
            }
            result.state = std::move(next);
            ++result.steps;
        } catch (const StateInvalid& e) {
            if (hooks.on_output && !emitted_last) hooks.on_output(result.state, result.steps);
            throw RunAborted(e.what(), result.state, result.steps, false);
        } catch (const TemperatureFloorViolated& e) {
            if (hooks.on_output && !emitted_last) hooks.on_output(result.state, result.steps);
            throw RunAborted(e.what(), result.state, result.steps, false);
        } catch (const PicardDiverged& e) {
            if (hooks.on_output && !emitted_last) hooks.on_output(result.state, result.steps);
            throw RunAborted(e.what(), result.state, result.steps, true);
        }
        emitted_last = false;
        if (hooks.on_output && (last || (hooks.every > 0 && result.steps % hooks.every == 0))) {
            hooks.on_output(result.state, result.steps);
            emitted_last = true;
        }
    }
    return result;
}

} // namespace npb
