#include "support.hpp"

#include "npb/errors.hpp"
#include "npb/timestepper.hpp"

#include <doctest.h>

#include <numbers>

using namespace npb;
using namespace npb::test;

namespace {

constexpr double pi = std::numbers::pi;

InitialCondition heat_ic(double amplitude)
{
    InitialCondition ic = constant_ic(1.0, 1.0);
    ic.temperature = FieldSpec::single_mode(2.0, amplitude, {0, 0, 1});
    return ic;
}

SimState advance(SimState s, const PhysParams& p, const Grid& g, double dt, int steps, Scheme mode)
{
    const auto ref = ReferenceValues::from_state(s, p);
    auto ctrl = StepControl::fixed(dt, mode);
    for (int k = 0; k < steps; ++k) {
        s = mode == Scheme::Picard ? picard_step(s, ref, p, g, ctrl).state : imex_step(s, ref, p, g, dt);
    }
    return s;
}

} // namespace

TEST_CASE("step control validation")
{
    StepControl c;
    CHECK_FALSE(c.check().has_value());
    c.cfl_target = 1.5;
    CHECK(c.check().has_value());
    c = StepControl{};
    c.dt = 1.0;
    CHECK(c.check().has_value());
    c = StepControl::fixed(0.01);
    CHECK(c.dt_min == 0.01);
    CHECK(c.dt_max == 0.01);
    CHECK_FALSE(c.check().has_value());
}

TEST_CASE("heat limit follows the exact semigroup")
{
    const Grid g(16);
    PhysParams p;
    p.kappa = 0.1;
    const auto s0 = make_initial_state(heat_ic(0.1), p, g);
    const double dt = 1e-3;
    const auto s1 = imex_step(s0, p, g, StepControl::fixed(dt));
    const double factor = std::exp(-4 * pi * pi * p.kappa * dt);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(s1.temperature[i] - 2.0 == doctest::Approx(factor * (s0.temperature[i] - 2.0)).epsilon(1e-12));
    }
    CHECK(s1.time == dt);

    const auto p1 = picard_step(s0, p, g, StepControl::fixed(dt, Scheme::Picard));
    CHECK(max_diff(p1.state.temperature, s1.temperature) < 1e-15);
}

TEST_CASE("constant state is a fixed point of both schemes")
{
    const Grid g(16);
    const PhysParams p = coupled_params();
    const auto s0 = make_initial_state(constant_ic(0.6, 1.2), p, g);
    const auto a = imex_step(s0, p, g, StepControl::fixed(1e-3));
    CHECK(max_state_diff(a, s0) <= 1e-14);
    const auto b = picard_step(s0, p, g, StepControl::fixed(1e-3, Scheme::Picard));
    CHECK(b.iterations == 1);
    CHECK(max_state_diff(b.state, s0) <= 1e-14);
}

TEST_CASE("imex local error is third order")
{
    const Grid g(32);
    PhysParams p = coupled_params();
    // mild stiffness keeps every resolved mode in the asymptotic regime
    p.D = p.nu = p.kappa = 0.02;
    const auto s0 = make_initial_state(smooth_ic(21), p, g);
    std::vector<double> err;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
        const auto one = advance(s0, p, g, dt, 1, Scheme::ImexRk2);
        const auto two = advance(s0, p, g, dt / 2, 2, Scheme::ImexRk2);
        err.push_back(relative_state_distance(one, two));
    }
    const double slope1 = std::log2(err[0] / err[1]);
    const double slope2 = std::log2(err[1] / err[2]);
    MESSAGE("local slopes " << slope1 << ", " << slope2);
    CHECK(slope1 == doctest::Approx(3.0).epsilon(0.1));
    CHECK(slope2 == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("picard and imex agree to second order")
{
    const Grid g(32);
    const PhysParams p = coupled_params();
    const auto s0 = make_initial_state(smooth_ic(5, 0.1, 0.1, 0.1), p, g);
    const double horizon = 0.02;
    std::vector<double> gap;
    for (double dt : {2e-3, 1e-3}) {
        const int steps = static_cast<int>(std::lround(horizon / dt));
        const auto a = advance(s0, p, g, dt, steps, Scheme::ImexRk2);
        const auto b = advance(s0, p, g, dt, steps, Scheme::Picard);
        gap.push_back(relative_state_distance(a, b));
    }
    MESSAGE("gap ratio " << gap[0] / gap[1]);
    CHECK(gap[0] / gap[1] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("picard iteration fails to contract for huge steps")
{
    const Grid g(16);
    PhysParams p = coupled_params();
    p.g = 50.0;
    const auto s0 = make_initial_state(smooth_ic(9, 0.45, 2.0, 0.4), p, g);
    StepControl ctrl = StepControl::fixed(10.0, Scheme::Picard);
    CHECK_THROWS_AS(picard_step(s0, p, g, ctrl), PicardDiverged);
}

TEST_CASE("run with zero horizon returns the initial state")
{
    const Grid g(8);
    const PhysParams p = coupled_params();
    const auto s0 = make_initial_state(smooth_ic(2), p, g);
    int calls = 0;
    RunHooks hooks{1, [&](const SimState&, std::size_t) { ++calls; }};
    const auto r = run(s0, p, g, StepControl::fixed(1e-3), 0.0, hooks);
    CHECK(r.state == s0);
    CHECK(r.steps == 0);
    CHECK(calls == 1);
}

TEST_CASE("heat decay over a run")
{
    const Grid g(16);
    PhysParams p;
    p.kappa = 0.1;
    const double A = 0.1;
    const auto s0 = make_initial_state(heat_ic(A), p, g);
    const auto r = run(s0, p, g, StepControl::fixed(5e-3), 0.5);
    CHECK(r.state.time == 0.5);
    CHECK(r.steps == 100);
    double dev = 0.0;
    for (double v : r.state.temperature.values) dev += (v - 2.0) * (v - 2.0);
    dev = std::sqrt(dev / static_cast<double>(g.size()));
    const double expect = A * std::exp(-4 * pi * pi * p.kappa * 0.5) / std::sqrt(2.0);
    CHECK(dev == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("long runs conserve means")
{
    const Grid g(8);
    const PhysParams p = coupled_params();
    const auto s0 = make_initial_state(smooth_ic(17), p, g);
    double drift = 0.0;
    double u_mean = 0.0;
    RunHooks hooks{1, [&](const SimState& s, std::size_t) {
                       for (std::size_t i = 0; i < 2; ++i)
                           drift = std::max(drift, std::abs(mean(s.concentrations[i]) - mean(s0.concentrations[i])));
                       drift = std::max(drift, std::abs(mean(s.temperature) - mean(s0.temperature)));
                       for (int k = 0; k < 3; ++k) u_mean = std::max(u_mean, std::abs(mean(s.velocity[k])));
                   }};
    const auto r = run(s0, p, g, StepControl::fixed(1e-3), 1.0, hooks);
    CHECK(r.steps == 1000);
    CHECK(drift <= 1e-10);
    CHECK(u_mean <= 1e-12);
}

TEST_CASE("adaptive steps follow the mollified CFL bound")
{
    const Grid g(16);
    const PhysParams p = coupled_params();
    const auto s0 = make_initial_state(smooth_ic(4, 0.3, 1.0, 0.2), p, g);
    StepControl ctrl;
    ctrl.dt = 1e-3;
    ctrl.dt_min = 1e-5;
    ctrl.dt_max = 1.0;
    ctrl.cfl_target = 0.4;
    double speed = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        speed = std::max(speed, std::hypot(s0.velocity[0][i], s0.velocity[1][i], s0.velocity[2][i]));
    }
    const double dt = stable_dt(s0, p, g, ctrl);
    // smoothing by J_eta can only lower the peak speed
    CHECK(dt >= 0.4 * g.spacing() / speed * (1 - 1e-12));
    CHECK(dt < 0.4 * g.spacing() / speed * 1.2);
    ctrl.dt_max = 1e-4;
    CHECK(stable_dt(s0, p, g, ctrl) == 1e-4);

    std::vector<double> times;
    RunHooks hooks{1, [&](const SimState& s, std::size_t) { times.push_back(s.time); }};
    ctrl.dt_max = 0.03;
    const auto r = run(s0, p, g, ctrl, 0.1, hooks);
    CHECK(r.state.time == 0.1);
    CHECK(times.back() == 0.1);
    for (std::size_t k = 1; k < times.size(); ++k) CHECK(times[k] > times[k - 1]);
}

TEST_CASE("runs are deterministic")
{
    const Grid g(8);
    const PhysParams p = coupled_params();
    const auto s0 = make_initial_state(smooth_ic(6), p, g);
    const auto a = run(s0, p, g, StepControl::fixed(2e-3), 0.05);
    const auto b = run(s0, p, g, StepControl::fixed(2e-3), 0.05);
    CHECK(a.state == b.state);
}

TEST_CASE("aborted run reports the last valid state")
{
    const Grid g(16);
    PhysParams p;
    p.D = 0.01;
    p.epsilon = 1e-4;
    InitialCondition ic = constant_ic(1.0, 1.0);
    ic.concentrations[0] = FieldSpec::single_mode(1.0, 0.9, {2, 1, 0});
    ic.concentrations[1] = FieldSpec::single_mode(1.0, 0.9, {0, 2, 1});
    const auto s0 = make_initial_state(ic, p, g);
    std::size_t last_step = 0;
    RunHooks hooks{1000, [&](const SimState&, std::size_t step) { last_step = step; }};
    try {
        run(s0, p, g, StepControl::fixed(0.05), 10.0, hooks);
        FAIL("expected an abort");
    } catch (const RunAborted& e) {
        CHECK(validate_state(e.last_state, p).ok());
        CHECK(e.steps_completed < 200);
        CHECK(last_step == e.steps_completed);
        CHECK_FALSE(e.picard_diverged);
    }
}
