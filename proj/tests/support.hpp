// Shared fixtures for the unit tests.
#pragma once

#include "npb/grid.hpp"
#include "npb/spectral.hpp"
#include "npb/state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace npb::test {

inline ScalarField field_of(const Grid& g, const std::function<double(double, double, double)>& f)
{
    ScalarField out(g.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto x = g.coordinate(i);
        out[i] = f(x[0], x[1], x[2]);
    }
    return out;
}

inline double max_diff(const ScalarField& a, const ScalarField& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_diff(const VectorField& a, const VectorField& b)
{
    return std::max({max_diff(a[0], b[0]), max_diff(a[1], b[1]), max_diff(a[2], b[2])});
}

inline double max_state_diff(const SimState& a, const SimState& b)
{
    double m = std::max(max_diff(a.velocity, b.velocity), max_diff(a.temperature, b.temperature));
    for (std::size_t i = 0; i < a.concentrations.size(); ++i) {
        m = std::max(m, max_diff(a.concentrations[i], b.concentrations[i]));
    }
    return m;
}

/// Relative L2 distance over all prognostic fields.
inline double relative_state_distance(const SimState& a, const SimState& b)
{
    double num = 0.0;
    double den = 0.0;
    auto acc = [&](const ScalarField& x, const ScalarField& y) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            num += (x[i] - y[i]) * (x[i] - y[i]);
            den += y[i] * y[i];
        }
    };
    for (std::size_t i = 0; i < a.concentrations.size(); ++i) acc(a.concentrations[i], b.concentrations[i]);
    for (int k = 0; k < 3; ++k) acc(a.velocity[k], b.velocity[k]);
    acc(a.temperature, b.temperature);
    return std::sqrt(num / den);
}

/// Smooth coupled parameters: every term of the model is active.
inline PhysParams coupled_params()
{
    PhysParams p;
    p.D = 0.5;
    p.nu = 0.5;
    p.kappa = 0.5;
    p.g = 1.0;
    p.alpha_T = 0.5;
    p.alpha_S = 0.2;
    p.eta = 0.01;
    return p;
}

inline InitialCondition smooth_ic(std::uint64_t seed, double c_amp = 0.3, double u_amp = 0.3, double T_amp = 0.2)
{
    InitialCondition ic;
    ic.seed = seed;
    ic.concentrations = {FieldSpec::random_smooth(1.0, c_amp, 2.0), FieldSpec::random_smooth(1.0, c_amp, 2.0)};
    for (auto& u : ic.velocity) u = FieldSpec::random_smooth(0.0, u_amp, 2.0);
    ic.temperature = FieldSpec::random_smooth(1.5, T_amp, 2.0);
    return ic;
}

inline InitialCondition constant_ic(double c = 1.0, double T = 1.0)
{
    InitialCondition ic;
    ic.concentrations = {FieldSpec::constant(c), FieldSpec::constant(c)};
    ic.temperature = FieldSpec::constant(T);
    return ic;
}

} // namespace npb::test
