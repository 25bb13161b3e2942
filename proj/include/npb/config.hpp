/// @file config.hpp
/// @brief Flat dotted key = value run configuration.
///
/// One assignment per line, '#' starts a comment. Unknown or repeated keys
/// are rejected. See config_reference() for the full key list and defaults.

#pragma once

#include "npb/state.hpp"
#include "npb/timestepper.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace npb {

struct OutputSpec {
    std::size_t every = 10;
    bool snapshots = false;
    std::size_t snapshot_every = 0; ///< 0: final state only
};

struct StudySpec {
    std::vector<double> eta_ladder{0.4, 0.2, 0.1, 0.05};
    double fit_skip = 0.1; ///< leading fraction of the horizon excluded from decay fits
};

struct RunConfig {
    int n = 32;
    PhysParams physics;
    StepControl time;
    double t_end = 1.0;
    OutputSpec output;
    InitialCondition ic;
    StudySpec study;
};

/// @throws ConfigError with the offending key path and reason.
RunConfig parse_config_text(const std::string& text);
/// @throws ConfigError, also when @p path cannot be read.
RunConfig parse_config(const std::filesystem::path& path);

/// Re-checks a config after command-line overrides.
/// @throws ConfigError
void validate_config(const RunConfig& cfg);

/// Human-readable key reference printed by --help.
std::string config_reference();

} // namespace npb
