#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "artequity/pipeline.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string out_dir;
    std::string criterion;
    std::string artists, exhibitions, auctions, worldspec;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double gender_threshold = 0.0;
    bool gender_threshold_set = false;
    int start_year = 0;
    bool start_year_set = false;
    int min_age = 0;
    bool min_age_set = false;
    int max_start_age = 0;
    bool max_start_age_set = false;
    double prior_a = 0.0, prior_b = 0.0;
    bool prior_set = false;
    double damping = 0.0;
    bool damping_set = false;
};

void add_common_options(CLI::App* cmd, CliArgs& args) {
    cmd->add_option("--config", args.config_path, "Run configuration JSON (run.json)");
    cmd->add_option("--out", args.out_dir, "Output directory for artifacts (default: out)");
    cmd->add_option("--criterion", args.criterion,
                    "Equity criterion: neutral, balanced, or both (default: neutral)")
        ->check(CLI::IsMember({"neutral", "balanced", "both"}));
    cmd->add_option("--seed", args.seed, "Seed for randomized steps (simulate)")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--artists", args.artists, "artists.csv input path");
    cmd->add_option("--exhibitions", args.exhibitions, "exhibitions.csv input path");
    cmd->add_option("--auctions", args.auctions, "auctions.csv input path");
    cmd->add_option("--worldspec", args.worldspec, "worldspec.json for simulate");
    cmd->add_option("--start-year", args.start_year,
                    "Keep artists whose first exhibition year is >= this (default: 1990)")
        ->each([&](const std::string&) { args.start_year_set = true; });
    cmd->add_option("--min-age", args.min_age,
                    "Adulthood age for the career filters (default: 18)")
        ->each([&](const std::string&) { args.min_age_set = true; });
    cmd->add_option("--max-start-age", args.max_start_age,
                    "Exclude artists starting after this age (default: 50)")
        ->each([&](const std::string&) { args.max_start_age_set = true; });
    cmd->add_option("--gender-threshold", args.gender_threshold,
                    "Minimum inference probability to resolve a gender (default: 0.6)")
        ->each([&](const std::string&) { args.gender_threshold_set = true; });
    cmd->add_option("--prior-a", args.prior_a, "Beta prior a for the Bayes factor (default: 1)")
        ->each([&](const std::string&) { args.prior_set = true; });
    cmd->add_option("--prior-b", args.prior_b, "Beta prior b for the Bayes factor (default: 1)")
        ->each([&](const std::string&) { args.prior_set = true; });
    cmd->add_option("--damping", args.damping, "Prestige teleportation damping (default: 0.85)")
        ->each([&](const std::string&) { args.damping_set = true; });
}

artequity::pipeline::RunConfig build_config(const CliArgs& args) {
    artequity::pipeline::RunConfig config;
    if (!args.config_path.empty()) {
        config = artequity::pipeline::load_config(args.config_path);
    }
    if (!args.out_dir.empty()) config.out_dir = args.out_dir;
    if (!args.criterion.empty()) config.criterion = args.criterion;
    if (args.seed_set) config.seed = args.seed;
    if (!args.artists.empty()) config.artists_file = args.artists;
    if (!args.exhibitions.empty()) config.exhibitions_file = args.exhibitions;
    if (!args.auctions.empty()) config.auctions_file = args.auctions;
    if (!args.worldspec.empty()) config.worldspec_file = args.worldspec;
    if (args.start_year_set) config.filters.start_year = args.start_year;
    if (args.min_age_set) config.filters.min_age = args.min_age;
    if (args.max_start_age_set) config.filters.max_start_age = args.max_start_age;
    if (args.gender_threshold_set) config.filters.gender_threshold = args.gender_threshold;
    if (args.prior_set) {
        if (args.prior_a > 0.0) config.classify.prior.a = args.prior_a;
        if (args.prior_b > 0.0) config.classify.prior.b = args.prior_b;
    }
    if (args.damping_set) config.prestige.damping = args.damping;
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"artequity: institutional gender-representation audit toolkit"};
    app.require_subcommand(1);

    CliArgs args;
    const std::pair<const char*, const char*> subcommands[] = {
        {"ingest", "Parse, clean, and filter the input corpus"},
        {"classify", "Bayes-factor classification of institutions and countries"},
        {"network", "Co-exhibition network, prestige, and assortativity"},
        {"careers", "Career features, co-exhibition gender, and lock-in"},
        {"auctions", "Disparity metrics and access-rate curves"},
        {"regress", "Logistic-regression models of auction access"},
        {"simulate", "Generate a synthetic corpus from a worldspec"},
        {"report", "Render text/JSON reports from existing artifacts"},
        {"all", "Run ingest through report"},
    };
    for (const auto& [name, help] : subcommands) {
        add_common_options(app.add_subcommand(name, help), args);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version land here with exit code 0
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    std::string error;
    artequity::pipeline::RunConfig config;
    try {
        config = build_config(args);
    } catch (const artequity::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    const int code = artequity::pipeline::run_cli(subcommand, config, &error);
    if (code != 0) {
        std::cerr << "error: " << error << "\n";
    }
    return code;
}
