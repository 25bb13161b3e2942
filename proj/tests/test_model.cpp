#include "support.hpp"

#include "npb/errors.hpp"
#include "npb/model.hpp"

#include <doctest.h>

#include <numbers>

using namespace npb;
using namespace npb::test;

namespace {

constexpr double pi = std::numbers::pi;

SimState quiescent(const Grid& g, ScalarField c1, ScalarField c2, ScalarField T)
{
    SimState s;
    s.concentrations = {std::move(c1), std::move(c2)};
    s.velocity = g.zero_vector();
    s.temperature = std::move(T);
    return s;
}

} // namespace

TEST_CASE("steady state has a vanishing right-hand side")
{
    const Grid g(16);
    const PhysParams p = coupled_params();
    const auto s = make_initial_state(constant_ic(0.7, 1.4), p, g);
    const auto ef = compute_electro(s, p, g);
    const auto ref = ReferenceValues::from_state(s, p);
    for (const auto& r : np_rhs(s, ef, p, g)) CHECK(max_abs(r) <= 1e-13);
    CHECK(max_diff(momentum_rhs(s, ef, ref, p, g), g.zero_vector()) <= 1e-13);
    CHECK(max_abs(temperature_rhs(s, p, g)) <= 1e-13);
}

TEST_CASE("equal concentrations at rest have no transport")
{
    const Grid g(16);
    const PhysParams p;
    const auto c = field_of(g, [](double x, double y, double) { return 1 + 0.3 * std::sin(2 * pi * x) * std::cos(2 * pi * y); });
    const auto s = quiescent(g, c, c, g.constant(1.0));
    const auto ef = compute_electro(s, p, g);
    for (const auto& r : np_rhs(s, ef, p, g)) CHECK(max_abs(r) <= 1e-13);
}

TEST_CASE("electromigration against the product-rule expansion")
{
    // c1 = 1 + 0.3 sin(2 pi x), c2 = 1, psi = 0.3 sin(2 pi x)/(4 pi^2):
    //   d/dx (c1 dpsi/dx) = 0.3 (0.3 cos(4 pi x) - sin(2 pi x)),  -d/dx(dpsi/dx) = 0.3 sin(2 pi x).
    const Grid g(64);
    const PhysParams p;
    const auto s = quiescent(g, field_of(g, [](double x, double, double) { return 1 + 0.3 * std::sin(2 * pi * x); }),
                             g.constant(1.0), g.constant(1.0));
    const auto ef = compute_electro(s, p, g);
    const auto rhs = np_rhs(s, ef, p, g);
    const auto expect1 = field_of(g, [](double x, double, double) {
        return 0.3 * (0.3 * std::cos(4 * pi * x) - std::sin(2 * pi * x));
    });
    const auto expect2 = field_of(g, [](double x, double, double) { return 0.3 * std::sin(2 * pi * x); });
    CHECK(max_diff(rhs[0], expect1) < 1e-12);
    CHECK(max_diff(rhs[1], expect2) < 1e-12);
}

TEST_CASE("temperature floor guard")
{
    const Grid g(8);
    const PhysParams p;
    auto s = quiescent(g, g.constant(1.0), g.constant(1.0), g.constant(1.0));
    s.temperature[3] = 0.49;
    const auto ef = compute_electro(s, p, g);
    CHECK_THROWS_AS(np_rhs(s, ef, p, g), TemperatureFloorViolated);
    s.temperature[3] = 0.5;
    CHECK_NOTHROW(np_rhs(s, ef, p, g));
}

TEST_CASE("buoyancy forcing and its projection")
{
    const Grid g(16);
    PhysParams p;
    p.g = 1.0;
    p.alpha_T = 1.0;
    auto s = quiescent(g, g.constant(1.0), g.constant(1.0),
                       field_of(g, [](double x, double, double) { return 1.5 + 0.1 * std::sin(2 * pi * x); }));
    auto ef = compute_electro(s, p, g);
    auto ref = ReferenceValues::from_state(s, p);
    auto f = momentum_rhs(s, ef, ref, p, g);
    CHECK(max_abs(f[0]) < 1e-15);
    CHECK(max_abs(f[1]) < 1e-15);
    CHECK(max_diff(f[2], field_of(g, [](double x, double, double) { return 0.1 * std::sin(2 * pi * x); })) < 1e-14);

    s.temperature = field_of(g, [](double, double, double z) { return 1.5 + 0.1 * std::sin(2 * pi * z); });
    ref = ReferenceValues::from_state(s, p);
    f = momentum_rhs(s, ef, ref, p, g);
    CHECK(max_diff(f, g.zero_vector()) < 1e-14);
}

TEST_CASE("temperature transport")
{
    const Grid g(16);
    const PhysParams p;
    auto s = quiescent(g, g.constant(1.0), g.constant(1.0),
                       field_of(g, [](double x, double, double) { return std::sin(2 * pi * x); }));
    CHECK(max_abs(temperature_rhs(s, p, g)) == 0.0);

    s.velocity[0] = field_of(g, [](double, double y, double) { return std::sin(2 * pi * y); });
    const auto expect = field_of(g, [](double x, double y, double) {
        return -2 * pi * std::sin(2 * pi * y) * std::cos(2 * pi * x);
    });
    CHECK(max_diff(temperature_rhs(s, p, g), expect) < 1e-12);

    auto u = make_initial_state(smooth_ic(3), coupled_params(), g).velocity;
    s.velocity = u;
    s.temperature = g.constant(2.0);
    CHECK(max_abs(temperature_rhs(s, p, g)) < 1e-13);
}

TEST_CASE("conservative right-hand sides have zero mean")
{
    const Grid g(16);
    const PhysParams p = coupled_params();
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto s = make_initial_state(smooth_ic(seed), p, g);
        const auto ef = compute_electro(s, p, g);
        const auto ref = ReferenceValues::from_state(s, p);
        for (const auto& r : np_rhs(s, ef, p, g)) CHECK(std::abs(mean(r)) <= 1e-13);
        for (const auto& r : momentum_rhs(s, ef, ref, p, g)) CHECK(std::abs(mean(r)) <= 1e-13);
        CHECK(std::abs(mean(temperature_rhs(s, p, g))) <= 1e-13);
        CHECK(max_abs(divergence(momentum_rhs(s, ef, ref, p, g), g)) < 1e-11);
    }
}

TEST_CASE("advection does not produce entropy")
{
    const Grid g(32);
    const PhysParams p = coupled_params();
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto s = make_initial_state(smooth_ic(seed), p, g);
        const auto w = kernels::advecting_velocity({g.forward(s.velocity[0]), g.forward(s.velocity[1]),
                                                    g.forward(s.velocity[2])},
                                                   p.eta, g);
        for (const auto& c : s.concentrations) {
            const auto grad = gradient(c, g);
            ScalarField transport(g.size());
            ScalarField logc(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                transport[i] = w[0][i] * grad[0][i] + w[1][i] * grad[1][i] + w[2][i] * grad[2][i];
                logc[i] = std::log(c[i]);
            }
            CHECK(std::abs(inner(transport, logc)) <= 1e-9 * norm_l2(s.velocity) * norm_l2(grad));
        }
    }
}

TEST_CASE("spectral state round trip")
{
    const Grid g(16);
    const auto s = make_initial_state(smooth_ic(8), coupled_params(), g);
    const auto back = to_physical(to_spectral(s, g), s.time, g);
    CHECK(max_state_diff(back, s) < 1e-14);
}
