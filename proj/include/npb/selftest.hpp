/// @file selftest.hpp
/// @brief Built-in property suites run by `npb selftest` at n = 16.

#pragma once

#include "npb/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace npb {

struct SelftestResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Seeded nonnegative test field. Families cycle with @p seed:
/// 0 uniform on [0,2), 1 exponential(1), 2 sparse (90% zeros), 3 smooth
/// random field with values in [0, 2].
ScalarField random_nonnegative_field(const Grid& g, std::uint64_t seed);

std::vector<SelftestResult> run_selftest(std::uint64_t seed);

} // namespace npb
