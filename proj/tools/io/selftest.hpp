// Built-in fixture suite behind `equislice selftest`.
#pragma once

#include <string>

#include "equislice_io.hpp"

namespace equislice::io {

// Runs every fixture at truncation order `order`. A fixture named in `corrupt` has one
// coefficient altered first. The report is independent of `order` whenever all checks agree.
Json run_selftest(int order, const std::string& corrupt = "");

// Fixed-width matrix rendering of a selftest report.
std::string render_matrix(const Json& report);

}  // namespace equislice::io
