#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "artequity/auctions.hpp"
#include "artequity/bftest.hpp"
#include "artequity/corpus.hpp"
#include "artequity/exnet.hpp"
#include "artequity/regress.hpp"

namespace artequity::pipeline {

// Everything a run needs; serialized into every artifact's metadata so
// outputs are reproducible from their own provenance.
struct RunConfig {
    std::string artists_file;     // default: <out_dir>/artists.csv
    std::string exhibitions_file; // default: <out_dir>/exhibitions.csv
    std::string auctions_file;    // default: <out_dir>/auctions.csv
    std::string worldspec_file;   // simulate input; built-in default when empty
    std::string out_dir = "out";
    std::string criterion = "neutral"; // neutral | balanced | both
    std::uint64_t seed = 1;

    corpus::FilterParams filters;
    bf::ClassifyOptions classify;
    long long boundary_max_n = 1000;
    net::PrestigeOptions prestige;
    long long co_min_exhibitions = 10;
    int lockin_window = 5;
    std::string baseline_weighting = "exhibition"; // exhibition | institution
    auctions::CurveBinning curves;
    regress::FitOptions regress_options;
};

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
std::string config_digest(const RunConfig& config);

// Validates the config and fills defaulted input paths (<out_dir>/*.csv).
// Artifacts embed config_digest(effective_config(config)).
RunConfig effective_config(const RunConfig& config);

extern const char* const kSubcommands[9]; // ingest..all

// Runs one subcommand, reading prior-stage artifacts from out_dir and
// writing its own. Throws UsageError / DataError / NumericalError.
void run(const std::string& subcommand, const RunConfig& config);

// Maps exceptions to exit codes: 0 ok, 1 usage, 2 data, 3 numerical.
int run_cli(const std::string& subcommand, const RunConfig& config,
            std::string* error_message = nullptr);

} // namespace artequity::pipeline
