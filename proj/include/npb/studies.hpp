/// @file studies.hpp
/// @brief Trajectory driver with diagnostics, decay-rate study and eta ladder study.

#pragma once

#include "npb/config.hpp"
#include "npb/diagnostics.hpp"
#include "npb/grid.hpp"
#include "npb/state.hpp"

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace npb {

struct Trajectory {
    std::vector<DiagnosticsRecord> records;
    SimState final_state;
    std::size_t steps = 0;
    bool aborted = false;
    bool picard_diverged = false;
    std::string abort_reason;
};

/// Called after every accepted step and once for the initial state.
using StepObserver = std::function<void(const SimState&, std::size_t step)>;

/// Runs @p s0 to cfg.t_end, recording diagnostics every cfg.output.every
/// steps and at both ends. A numerical abort is reported, not thrown; the
/// records end at the last valid state.
Trajectory run_trajectory(const RunConfig& cfg, const Grid& g, const SimState& s0,
                          const StepObserver& observer = {});

struct SeriesFit {
    std::string name;
    bool ok = false;
    DecayFit fit;
    std::string error;
};

struct DecayReport {
    std::vector<SeriesFit> fits;
    double temperature_rate_bound = 0.0; ///< 4 pi^2 kappa, the Poincare heat rate of ||T - T_r||_2
    SmallnessCheck smallness;
    std::vector<double> initial_means;
    double window_start = 0.0;
    double window_end = 0.0;

    const SeriesFit* find(const std::string& name) const;
    nlohmann::json to_json() const;
};

/// Fits energy_calE, entropy_E, u_L2, temp_L2_dev and every conc_L1_dev_i
/// over the horizon after the leading cfg.study.fit_skip fraction.
DecayReport decay_report(const std::vector<DiagnosticsRecord>& records, const RunConfig& cfg,
                         const std::vector<double>& initial_means);

struct EtaStudyReport {
    std::vector<double> ladder;
    /// ||u^{eta_k} - u^{eta_{k+1}}|| in L2(0,T;L2), one per consecutive pair.
    std::vector<double> differences;
    bool strictly_decreasing = false;
    double t_end = 0.0;
    std::size_t steps = 0;

    nlohmann::json to_json() const;
};

/// Integrates one initial state under every ladder value of eta in lockstep
/// with the fixed step cfg.time.dt.
/// @throws RunAborted if any member fails.
EtaStudyReport eta_study(const RunConfig& cfg, const Grid& g, const SimState& s0);

} // namespace npb
