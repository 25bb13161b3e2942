#include "npb/selftest.hpp"

#include "npb/diagnostics.hpp"
#include "npb/errors.hpp"
#include "npb/io.hpp"
#include "npb/spectral.hpp"
#include "npb/state.hpp"
#include "npb/timestepper.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace npb {

namespace {

constexpr int selftest_n = 16;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string fmt(const char* label, double v)
{
    std::ostringstream s;
    s << label << '=' << v;
    return s.str();
}

InitialCondition smooth_ic(std::uint64_t seed)
{
    InitialCondition ic;
    ic.seed = seed;
    ic.concentrations = {FieldSpec::random_smooth(1.0, 0.3, 2.0), FieldSpec::random_smooth(1.0, 0.3, 2.0)};
    for (auto& u : ic.velocity) {
        u = FieldSpec::random_smooth(0.0, 0.2, 2.0);
    }
    ic.temperature = FieldSpec::random_smooth(1.5, 0.2, 2.0);
    return ic;
}

PhysParams coupled_params()
{
    PhysParams p;
    p.kappa = 0.5;
    p.nu = 0.5;
    p.D = 0.5;
    p.g = 1.0;
    p.alpha_T = 0.5;
    p.alpha_S = 0.2;
    p.eta = 0.01;
    return p;
}

SelftestResult check(const std::string& name, double value, double bound, const char* label)
{
    return {name, std::isfinite(value) && value <= bound, fmt(label, value)};
}

} // namespace

ScalarField random_nonnegative_field(const Grid& g, std::uint64_t seed)
{
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 17);
    ScalarField f(g.size());
    switch (seed % 4) {
    case 0:
        for (auto& v : f.values) v = 2.0 * uniform01(rng);
        break;
    case 1:
        for (auto& v : f.values) v = -std::log1p(-uniform01(rng));
        break;
    case 2:
        for (auto& v : f.values) v = uniform01(rng) < 0.9 ? 0.0 : 5.0 * uniform01(rng);
        break;
    default:
        f = realize_field(FieldSpec::random_smooth(1.0, 1.0, 3.0), g, seed);
        for (auto& v : f.values) v = std::max(v, 0.0);
        break;
    }
    return f;
}

std::vector<SelftestResult> run_selftest(std::uint64_t seed)
{
    const Grid g(selftest_n);
    std::vector<SelftestResult> out;

    auto guarded = [&](const std::string& name, auto&& body) {
        try {
            out.push_back(body());
        } catch (const std::exception& e) {
            out.push_back({name, false, std::string("threw: ") + e.what()});
        }
    };

    guarded("transform_round_trip", [&] {
        const auto f = random_nonnegative_field(g, seed);
        const auto back = g.inverse(g.forward(f));
        double err = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(back[i] - f[i]));
        return check("transform_round_trip", err, 1e-12, "max_error");
    });

    guarded("mollifier_mean_and_identity", [&] {
        const auto f = random_nonnegative_field(g, seed + 1);
        const auto same = mollify(f, 0.0, g);
        const auto smooth = mollify(f, 0.1, g);
        double err = std::abs(mean(smooth) - mean(f));
        for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(same[i] - f[i]));
        return check("mollifier_mean_and_identity", err, 1e-13, "max_error");
    });

    guarded("leray_divergence_free", [&] {
        VectorField v;
        for (int a = 0; a < 3; ++a) {
            v[a] = dealias(realize_field(FieldSpec::random_smooth(0.0, 1.0, 3.0), g, seed + 10 + a), g);
        }
        const auto div = divergence(leray_project(v, g), g);
        return check("leray_divergence_free", max_abs(div), 1e-10, "max_divergence");
    });

    guarded("poisson_residual", [&] {
        auto rho = dealias(realize_field(FieldSpec::random_smooth(0.0, 1.0, 3.0), g, seed + 20), g);
        const double m = mean(rho);
        for (auto& v : rho.values) v -= m;
        const double eps = 0.7;
        const auto psi = poisson_solve(rho, eps, g);
        const auto lap = laplacian(psi, g);
        double err = std::abs(mean(psi));
        for (std::size_t i = 0; i < rho.size(); ++i) err = std::max(err, std::abs(-eps * lap[i] - rho[i]));
        return check("poisson_residual", err, 1e-10, "max_residual");
    });

    guarded("heat_limit_step", [&] {
        PhysParams p;
        p.kappa = 0.1;
        InitialCondition ic;
        ic.concentrations = {FieldSpec::constant(1.0), FieldSpec::constant(1.0)};
        ic.temperature = FieldSpec::single_mode(2.0, 0.1, {0, 0, 1});
        const auto s0 = make_initial_state(ic, p, g);
        const double dt = 1e-3;
        const auto s1 = imex_step(s0, p, g, StepControl::fixed(dt));
        const double factor = std::exp(-four_pi_sq * p.kappa * dt);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            err = std::max(err, std::abs((s1.temperature[i] - 2.0) - factor * (s0.temperature[i] - 2.0)));
        }
        return check("heat_limit_step", err, 1e-13, "max_error");
    });

    guarded("constant_state_fixed_point", [&] {
        PhysParams p = coupled_params();
        InitialCondition ic;
        ic.concentrations = {FieldSpec::constant(0.8), FieldSpec::constant(0.8)};
        ic.temperature = FieldSpec::constant(1.3);
        const auto s0 = make_initial_state(ic, p, g);
        const auto ctrl = StepControl::fixed(1e-3, Scheme::Picard);
        const auto a = imex_step(s0, p, g, ctrl);
        const auto b = picard_step(s0, p, g, ctrl);
        double err = 0.0;
        for (const auto* s : {&a, &b.state}) {
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t i = 0; i < g.size(); ++i)
                    err = std::max(err, std::abs(s->concentrations[k][i] - s0.concentrations[k][i]));
            for (int ax = 0; ax < 3; ++ax) err = std::max(err, max_abs(s->velocity[ax]));
            for (std::size_t i = 0; i < g.size(); ++i)
                err = std::max(err, std::abs(s->temperature[i] - s0.temperature[i]));
        }
        SelftestResult r = check("constant_state_fixed_point", err, 1e-14, "max_change");
        if (b.iterations != 1) {
            r.passed = false;
            r.detail += " picard_iterations=" + std::to_string(b.iterations);
        }
        return r;
    });

    guarded("conservation", [&] {
        const PhysParams p = coupled_params();
        const auto s0 = make_initial_state(smooth_ic(seed), p, g);
        auto s = s0;
        const auto ctrl = StepControl::fixed(2e-3);
        const auto ref = ReferenceValues::from_state(s0, p);
        double drift = 0.0;
        for (int step = 0; step < 10; ++step) {
            s = imex_step(s, ref, p, g, ctrl.dt);
            for (std::size_t k = 0; k < 2; ++k)
                drift = std::max(drift, std::abs(mean(s.concentrations[k]) - mean(s0.concentrations[k])));
            drift = std::max(drift, std::abs(mean(s.temperature) - mean(s0.temperature)));
            for (int ax = 0; ax < 3; ++ax) drift = std::max(drift, std::abs(mean(s.velocity[ax])));
        }
        return check("conservation", drift, 1e-12, "max_mean_drift");
    });

    guarded("entropy_and_ckp", [&] {
        double worst_entropy = std::numeric_limits<double>::infinity();
        double worst_margin = std::numeric_limits<double>::infinity();
        for (std::uint64_t k = 0; k < 40; ++k) {
            auto f = random_nonnegative_field(g, seed + 100 + k);
            const double m = mean(f);
            if (!(m > 0.0)) continue;
            worst_entropy = std::min(worst_entropy, entropy(f, m));
            worst_margin = std::min(worst_margin, ckp_check(f, m));
        }
        SelftestResult r{"entropy_and_ckp", worst_entropy >= -1e-12 && worst_margin >= -1e-10, ""};
        r.detail = fmt("min_entropy", worst_entropy) + " " + fmt("min_margin", worst_margin);
        return r;
    });

    guarded("llogl_mollifier", [&] {
        double worst = std::numeric_limits<double>::infinity();
        for (std::uint64_t k = 0; k < 20; ++k) {
            const auto f = random_nonnegative_field(g, seed + 200 + k);
            for (double eta : {0.01, 0.1, 1.0}) {
                const auto c = llogl_mollifier_check(f, eta, g);
                worst = std::min(worst, c.rhs - c.lhs);
            }
        }
        return SelftestResult{"llogl_mollifier", worst >= -1e-10, fmt("min_slack", worst)};
    });

    guarded("cancellation_law", [&] {
        const PhysParams p = coupled_params();
        const auto s = make_initial_state(smooth_ic(seed + 300), p, g);
        const auto ef = compute_electro(s, p, g);
        return check("cancellation_law", cancellation_residual(s, ef, p, g), 1e-10, "residual");
    });

    guarded("snapshot_round_trip", [&] {
        const PhysParams p = coupled_params();
        const auto s = make_initial_state(smooth_ic(seed + 400), p, g);
        const auto back = decode_snapshot(encode_snapshot(s, g.n()));
        const bool same = back.n == g.n() && back.state == s;
        return SelftestResult{"snapshot_round_trip", same, same ? "bit-identical" : "mismatch"};
    });

    guarded("csv_round_trip", [&] {
        std::mt19937_64 rng(seed + 500);
        int bad = 0;
        for (int k = 0; k < 1000; ++k) {
            const double v = std::ldexp(uniform01(rng) - 0.5, static_cast<int>(rng() % 200) - 100);
            const auto text = format_double(v);
            double back = 0.0;
            std::from_chars(text.data(), text.data() + text.size(), back);
            if (back != v) ++bad;
        }
        return SelftestResult{"csv_round_trip", bad == 0, "mismatches=" + std::to_string(bad)};
    });

    guarded("decay_fit_exact", [&] {
        std::vector<std::pair<double, double>> series;
        for (int k = 0; k < 10; ++k) {
            const double t = 0.1 * k;
            series.emplace_back(t, 3.0 * std::exp(-2.0 * t));
        }
        const auto fit = decay_fit(series, 0.0, 1.0);
        const double err = std::max({std::abs(fit.rate - 2.0), std::abs(fit.amplitude - 3.0), 1.0 - fit.r_squared});
        return check("decay_fit_exact", err, 1e-9, "max_error");
    });

    return out;
}

} // namespace npb
