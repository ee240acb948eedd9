#pragma once

#include <string>

namespace artequity::pipeline {
struct RunConfig;
}

namespace artequity::report {

// Renders report.txt and report.json in the output directory from existing
// artifacts, without recomputing anything.
void render(const pipeline::RunConfig& config, const std::string& digest);

// Disparity-table ratio presentation: two decimals.
std::string format_ratio(double ratio);

} // namespace artequity::report
