/// @file io.hpp
/// @brief Time-series CSV and binary snapshot files.

#pragma once

#include "npb/diagnostics.hpp"
#include "npb/grid.hpp"
#include "npb/state.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace npb {

/// 17 significant digits; parses back to the same double.
std::string format_double(double v);

/// time,entropy_E,...,min_c_1..min_c_N,conc_L1_dev_1..conc_L1_dev_N
std::string timeseries_header(std::size_t species);
std::string timeseries_row(const DiagnosticsRecord& r);

/// @throws IoError naming @p path when the file cannot be written.
void write_timeseries(const std::vector<DiagnosticsRecord>& records, std::size_t species,
                      const std::filesystem::path& path);

/// Snapshot layout, all little-endian:
///   "NPB1" | u32 version = 1 | u32 n | u32 species | f64 time |
///   c_1 .. c_N, u_1, u_2, u_3, T, each n^3 f64 in x-fastest order.
inline constexpr std::uint32_t snapshot_version = 1;

void write_snapshot(const SimState& s, int n, const std::filesystem::path& path);

struct Snapshot {
    int n = 0;
    SimState state;
};

/// @throws FormatError on a bad magic, version or size; IoError if unreadable.
Snapshot read_snapshot(const std::filesystem::path& path);

std::string encode_snapshot(const SimState& s, int n);
Snapshot decode_snapshot(const std::string& bytes);

} // namespace npb
