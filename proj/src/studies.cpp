#include "npb/studies.hpp"

#include "npb/errors.hpp"
#include "npb/spectral.hpp"
#include "npb/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace npb {

Trajectory run_trajectory(const RunConfig& cfg, const Grid& g, const SimState& s0, const StepObserver& observer)
{
    Trajectory tr;
    const auto ref = ReferenceValues::from_state(s0, cfg.physics);
    const std::size_t every = std::max<std::size_t>(cfg.output.every, 1);

    RunHooks hooks;
    hooks.every = 1;
    hooks.on_output = [&](const SimState& s, std::size_t step) {
        if (observer) observer(s, step);
        if (step % every == 0 || s.time >= cfg.t_end) {
            tr.records.push_back(diagnose(s, ref, cfg.physics, g));
        }
    };

    try {
        auto result = run(s0, cfg.physics, g, cfg.time, cfg.t_end, hooks);
        tr.final_state = std::move(result.state);
        tr.steps = result.steps;
    } catch (const RunAborted& e) {
        tr.aborted = true;
        tr.picard_diverged = e.picard_diverged;
        tr.abort_reason = e.what();
        tr.final_state = e.last_state;
        tr.steps = e.steps_completed;
        if (tr.records.empty() || tr.records.back().time != e.last_state.time) {
            tr.records.push_back(diagnose(e.last_state, ref, cfg.physics, g));
        }
    }
    return tr;
}

const SeriesFit* DecayReport::find(const std::string& name) const
{
    for (const auto& f : fits) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

DecayReport decay_report(const std::vector<DiagnosticsRecord>& records, const RunConfig& cfg,
                         const std::vector<double>& initial_means)
{
    DecayReport rep;
    rep.temperature_rate_bound = four_pi_sq * cfg.physics.kappa;
    rep.smallness = smallness_check(cfg.physics, initial_means);
    rep.initial_means = initial_means;
    if (records.empty()) {
        return rep;
    }
    const double t0 = records.front().time;
    const double t1 = records.back().time;
    rep.window_start = t0 + cfg.study.fit_skip * (t1 - t0);
    rep.window_end = t1;

    auto fit_series = [&](const std::string& name, auto&& value) {
        std::vector<std::pair<double, double>> series;
        series.reserve(records.size());
        for (const auto& r : records) {
            series.emplace_back(r.time, value(r));
        }
        SeriesFit sf;
        sf.name = name;
        try {
            sf.fit = decay_fit(series, rep.window_start, rep.window_end);
            sf.ok = true;
        } catch (const Error& e) {
            sf.error = e.what();
        }
        rep.fits.push_back(std::move(sf));
    };

    fit_series("energy_calE", [](const DiagnosticsRecord& r) { return r.energy_calE; });
    fit_series("entropy_E", [](const DiagnosticsRecord& r) { return r.entropy_E; });
    fit_series("u_L2", [](const DiagnosticsRecord& r) { return r.u_L2; });
    fit_series("temp_L2_dev", [](const DiagnosticsRecord& r) { return r.temp_L2_dev; });
    for (std::size_t i = 0; i < records.front().conc_L1_dev.size(); ++i) {
        fit_series("conc_L1_dev_" + std::to_string(i + 1),
                   [i](const DiagnosticsRecord& r) { return r.conc_L1_dev[i]; });
    }
    return rep;
}

nlohmann::json DecayReport::to_json() const
{
    nlohmann::json j;
    j["window"] = {window_start, window_end};
    j["temperature_rate_bound"] = temperature_rate_bound;
    if (std::isinf(smallness.threshold)) {
        j["smallness"]["threshold"] = "inf";
    } else {
        j["smallness"]["threshold"] = smallness.threshold;
    }
    j["smallness"]["pass"] = smallness.pass;
    j["smallness"]["exceeds_threshold"] = !smallness.pass;
    j["smallness"]["initial_means"] = initial_means;
    auto& arr = j["fits"];
    arr = nlohmann::json::array();
    for (const auto& f : fits) {
        nlohmann::json e;
        e["series"] = f.name;
        e["ok"] = f.ok;
        if (f.ok) {
            e["rate"] = f.fit.rate;
            e["amplitude"] = f.fit.amplitude;
            e["r_squared"] = f.fit.r_squared;
            e["decaying"] = f.fit.rate > 0.0;
            if (f.name == "temp_L2_dev") {
                e["meets_rate_bound"] = f.fit.rate >= temperature_rate_bound * (1.0 - 1e-2);
            }
        } else {
            e["error"] = f.error;
        }
        arr.push_back(e);
    }
    return j;
}

nlohmann::json EtaStudyReport::to_json() const
{
    nlohmann::json j;
    j["eta_ladder"] = ladder;
    j["l2_time_differences"] = differences;
    j["strictly_decreasing"] = strictly_decreasing;
    j["t_end"] = t_end;
    j["steps"] = steps;
    return j;
}

EtaStudyReport eta_study(const RunConfig& cfg, const Grid& g, const SimState& s0)
{
    EtaStudyReport rep;
    rep.ladder = cfg.study.eta_ladder;
    rep.t_end = cfg.t_end;
    const std::size_t members = rep.ladder.size();

    std::vector<PhysParams> params(members, cfg.physics);
    std::vector<SimState> states(members, s0);
    std::vector<ReferenceValues> refs;
    for (std::size_t k = 0; k < members; ++k) {
        params[k].eta = rep.ladder[k];
        refs.push_back(ReferenceValues::from_state(s0, params[k]));
    }

    const std::size_t pairs = members > 0 ? members - 1 : 0;
    auto gaps = [&]() {
        std::vector<double> out(pairs);
        for (std::size_t k = 0; k < pairs; ++k) {
            double sum = 0.0;
            for (int a = 0; a < 3; ++a) {
                const auto& x = states[k].velocity[a];
                const auto& y = states[k + 1].velocity[a];
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const double d = x[i] - y[i];
                    sum += d * d;
                }
            }
            out[k] = sum / static_cast<double>(g.size());
        }
        return out;
    };

    std::vector<double> integral(pairs, 0.0);
    auto prev = gaps();
    double t = s0.time;
    while (t < cfg.t_end) {
        double dt = cfg.time.dt;
        const double remaining = cfg.t_end - t;
        const bool last = remaining <= dt * (1.0 + 1e-9);
        if (last) dt = remaining;
        for (std::size_t k = 0; k < members; ++k) {
            try {
                if (cfg.time.mode == Scheme::Picard) {
                    StepControl ctrl = cfg.time;
                    ctrl.dt = dt;
                    states[k] = picard_step(states[k], refs[k], params[k], g, ctrl).state;
                } else {
                    states[k] = imex_step(states[k], refs[k], params[k], g, dt);
                }
            } catch (const PicardDiverged& e) {
                throw RunAborted(e.what(), states[k], rep.steps, true);
            } catch (const Error& e) {
                throw RunAborted(e.what(), states[k], rep.steps, false);
            }
        }
        t = last ? cfg.t_end : t + dt;
        ++rep.steps;
        const auto cur = gaps();
        for (std::size_t k = 0; k < pairs; ++k) {
            integral[k] += 0.5 * dt * (prev[k] + cur[k]);
        }
        prev = cur;
    }

    rep.differences.resize(pairs);
    for (std::size_t k = 0; k < pairs; ++k) {
        rep.differences[k] = std::sqrt(integral[k]);
    }
    rep.strictly_decreasing = true;
    for (std::size_t k = 1; k < pairs; ++k) {
        if (!(rep.differences[k] < rep.differences[k - 1])) rep.strictly_decreasing = false;
    }
    return rep;
}

} // namespace npb
