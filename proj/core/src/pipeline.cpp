#include "artequity/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <nlohmann/json.hpp>

#include "artequity/careers.hpp"
#include "artequity/report.hpp"
#include "artequity/synth.hpp"

namespace artequity::pipeline {

namespace fs = std::filesystem;

const char* const kSubcommands[9] = {"ingest", "classify", "network",  "careers", "auctions",
                                     "regress", "simulate", "report", "all"};

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["inputs"] = {{"artists", c.artists_file},
                   {"exhibitions", c.exhibitions_file},
                   {"auctions", c.auctions_file},
                   {"worldspec", c.worldspec_file}};
    j["out_dir"] = c.out_dir;
    j["criterion"] = c.criterion;
    j["seed"] = c.seed;
    j["filters"] = {{"start_year", c.filters.start_year},
                    {"min_age", c.filters.min_age},
                    {"max_start_age", c.filters.max_start_age},
                    {"gender_threshold", c.filters.gender_threshold}};
    j["classify"] = {{"prior_a", c.classify.prior.a},
                     {"prior_b", c.classify.prior.b},
                     {"evidence_threshold", c.classify.evidence_threshold},
                     {"boundary_max_n", c.boundary_max_n}};
    j["prestige"] = {{"damping", c.prestige.damping},
                     {"tolerance", c.prestige.tolerance},
                     {"max_iterations", c.prestige.max_iterations},
                     {"use_out_edges", c.prestige.use_out_edges}};
    j["careers"] = {{"co_min_exhibitions", c.co_min_exhibitions},
                    {"lockin_window", c.lockin_window},
                    {"baseline_weighting", c.baseline_weighting}};
    j["curves"] = {{"bins", c.curves.bins}, {"min_support", c.curves.min_support}};
    j["regress"] = {{"tolerance", c.regress_options.tolerance},
                    {"max_iterations", c.regress_options.max_iterations},
                    {"separation_norm", c.regress_options.separation_norm}};
    return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    if (j.contains("inputs")) {
        const auto& in = j.at("inputs");
        c.artists_file = in.value("artists", c.artists_file);
        c.exhibitions_file = in.value("exhibitions", c.exhibitions_file);
        c.auctions_file = in.value("auctions", c.auctions_file);
        c.worldspec_file = in.value("worldspec", c.worldspec_file);
    }
    c.out_dir = j.value("out_dir", c.out_dir);
    c.criterion = j.value("criterion", c.criterion);
    c.seed = j.value("seed", c.seed);
    if (j.contains("filters")) {
        const auto& f = j.at("filters");
        c.filters.start_year = f.value("start_year", c.filters.start_year);
        c.filters.min_age = f.value("min_age", c.filters.min_age);
        c.filters.max_start_age = f.value("max_start_age", c.filters.max_start_age);
        c.filters.gender_threshold = f.value("gender_threshold", c.filters.gender_threshold);
    }
    if (j.contains("classify")) {
        const auto& k = j.at("classify");
        c.classify.prior.a = k.value("prior_a", c.classify.prior.a);
        c.classify.prior.b = k.value("prior_b", c.classify.prior.b);
        c.classify.evidence_threshold =
            k.value("evidence_threshold", c.classify.evidence_threshold);
        c.boundary_max_n = k.value("boundary_max_n", c.boundary_max_n);
    }
    if (j.contains("prestige")) {
        const auto& p = j.at("prestige");
        c.prestige.damping = p.value("damping", c.prestige.damping);
        c.prestige.tolerance = p.value("tolerance", c.prestige.tolerance);
        c.prestige.max_iterations = p.value("max_iterations", c.prestige.max_iterations);
        c.prestige.use_out_edges = p.value("use_out_edges", c.prestige.use_out_edges);
    }
    if (j.contains("careers")) {
        const auto& k = j.at("careers");
        c.co_min_exhibitions = k.value("co_min_exhibitions", c.co_min_exhibitions);
        c.lockin_window = k.value("lockin_window", c.lockin_window);
        c.baseline_weighting = k.value("baseline_weighting", c.baseline_weighting);
    }
    if (j.contains("curves")) {
        const auto& k = j.at("curves");
        c.curves.bins = k.value("bins", c.curves.bins);
        c.curves.min_support = k.value("min_support", c.curves.min_support);
    }
    if (j.contains("regress")) {
        const auto& r = j.at("regress");
        c.regress_options.tolerance = r.value("tolerance", c.regress_options.tolerance);
        c.regress_options.max_iterations =
            r.value("max_iterations", c.regress_options.max_iterations);
        c.regress_options.separation_norm =
            r.value("separation_norm", c.regress_options.separation_norm);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

std::string config_digest(const RunConfig& config) {
    return to_hex(fnv1a64(config_to_json(config).dump()));
}

RunConfig effective_config(const RunConfig& input) {
    RunConfig c = input;
    if (c.out_dir.empty()) throw UsageError("output directory must not be empty");
    if (c.criterion != "neutral" && c.criterion != "balanced" && c.criterion != "both") {
        throw UsageError("criterion must be neutral, balanced, or both (got '" + c.criterion +
                         "')");
    }
    if (c.baseline_weighting != "exhibition" && c.baseline_weighting != "institution") {
        throw UsageError("baseline_weighting must be exhibition or institution");
    }
    if (!(c.filters.gender_threshold > 0.5 && c.filters.gender_threshold <= 1.0)) {
        throw UsageError("gender threshold must lie in (0.5, 1]");
    }
    if (!(c.classify.evidence_threshold > 1.0)) {
        throw UsageError("evidence threshold must exceed 1");
    }
    const auto def = [&](std::string& path, const char* name) {
        if (path.empty()) path = (fs::path(c.out_dir) / name).string();
    };
    def(c.artists_file, "artists.csv");
    def(c.exhibitions_file, "exhibitions.csv");
    def(c.auctions_file, "auctions.csv");
    return c;
}

namespace {

struct EffectiveConfig {
    RunConfig config;
    std::string digest;
};

EffectiveConfig resolve(const RunConfig& input) {
    RunConfig c = effective_config(input);
    return {c, config_digest(c)};
}

// One writer at a time per output directory; directory creation is atomic.
class DirectoryLock {
public:
    explicit DirectoryLock(const std::string& out_dir)
        : path_(fs::path(out_dir) / ".artequity.lock") {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (!fs::create_directory(path_, ec)) {
            throw DataError("output directory is locked by another run (" + path_.string() +
                            " exists)");
        }
    }
    ~DirectoryLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }

private:
    fs::path path_;
};

void touch_manifest(const std::string& out_dir, const std::string& stage,
                    const std::string& digest) {
    // Timestamps live only here; every other artifact is byte-deterministic.
    const auto path = fs::path(out_dir) / "manifest.json";
    nlohmann::json doc;
    if (fs::exists(path)) {
        std::ifstream in(path);
        try {
            doc = nlohmann::json::parse(in);
        } catch (...) {
            doc = nlohmann::json::object();
        }
    }
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    doc["stages"][stage] = {
        {"config_digest", digest},
        {"completed_unix_ms",
         std::chrono::duration_cast<std::chrono::milliseconds>(now).count()}};
    std::ofstream out(path, std::ios::binary);
    out << doc.dump(2) << "\n";
}

std::string artifact(const RunConfig& c, const char* name) {
    return (fs::path(c.out_dir) / name).string();
}

void require_artifact(const RunConfig& c, const char* name, const char* producer) {
    if (!fs::exists(artifact(c, name))) {
        throw DataError(std::string("missing artifact ") + name + " in " + c.out_dir +
                        "; run `artequity " + producer + "` first");
    }
}

std::map<std::string, bf::Category> category_map(
    const std::vector<bf::ClassificationResult>& results) {
    std::map<std::string, bf::Category> m;
    for (const auto& r : results) m[r.unit_id] = r.category;
    return m;
}

nlohmann::json summary_json(const bf::CorpusClassification& c) {
    nlohmann::json j;
    j["p0"] = c.criterion.p0;
    nlohmann::json counts, shares, reasons;
    for (const auto& [cat, n] : c.summary.counts) counts[std::string(bf::to_string(cat))] = n;
    for (const auto& [cat, s] : c.summary.shares) shares[std::string(bf::to_string(cat))] = s;
    for (const auto& [r, n] : c.summary.uncategorised_reasons) reasons[r] = n;
    j["counts"] = counts;
    j["shares_among_categorisable"] = shares;
    j["uncategorised_reasons"] = reasons;
    j["total_units"] = c.summary.total_units;
    j["categorisable_units"] = c.summary.categorisable;
    j["uncategorised_exhibition_share"] = c.summary.uncategorised_exhibition_share;
    return j;
}

void run_ingest(const EffectiveConfig& ec) {
    const RunConfig& c = ec.config;
    const auto raw = corpus::ingest(c.artists_file, c.exhibitions_file, c.auctions_file);
    auto clean = corpus::apply_career_filters(raw, c.filters);
    corpus::normalize_prices(clean.auctions);
    if (clean.empty_warning) {
        std::cerr << "warning: no artists survive the career filters (start year "
                  << c.filters.start_year << ")\n";
    }
    corpus::write_clean_corpus(c.out_dir, clean, ec.digest);
    corpus::write_rejects_json(artifact(c, "rejects.json"), raw.rejects, ec.digest);

    nlohmann::json j;
    j["meta"] = {{"config_digest", ec.digest}, {"config", config_to_json(c)}};
    std::size_t women = clean.count_women();
    j["artists"] = {{"total", clean.artists.size()},
                    {"women", women},
                    {"men", clean.artists.size() - women},
                    {"women_fraction", clean.women_fraction}};
    j["exhibitions"] = clean.exhibitions.size();
    j["auctions"] = clean.auctions.size();
    j["rejects"] = raw.rejects.size();
    j["raw_rows"] = {{"artists", raw.artist_rows_raw},
                     {"exhibitions", raw.exhibition_rows_raw},
                     {"auctions", raw.auction_rows_raw}};
    j["filtered"] = {{"artists_gender_excluded", clean.stats.artists_gender_excluded},
                     {"artists_age_excluded", clean.stats.artists_age_excluded},
                     {"artists_start_year_excluded", clean.stats.artists_start_year_excluded},
                     {"artists_without_exhibitions", clean.stats.artists_without_exhibitions},
                     {"exhibitions_deduplicated", clean.stats.exhibitions_deduplicated},
                     {"exhibitions_pre_adulthood", clean.stats.exhibitions_pre_adulthood},
                     {"exhibitions_of_removed_artists",
                      clean.stats.exhibitions_of_removed_artists},
                     {"auctions_pre_adulthood", clean.stats.auctions_pre_adulthood},
                     {"auctions_of_removed_artists", clean.stats.auctions_of_removed_artists}};
    j["empty_warning"] = clean.empty_warning;
    std::ofstream out(artifact(c, "corpus_summary.json"), std::ios::binary);
    out << j.dump(2) << "\n";
}

void run_classify(const EffectiveConfig& ec) {
    const RunConfig& c = ec.config;
    require_artifact(c, "clean_artists.csv", "ingest");
    const auto corpus = corpus::load_clean_corpus(c.out_dir);

    nlohmann::json summary;
    summary["meta"] = {{"config_digest", ec.digest}, {"config", config_to_json(c)}};
    for (const bool balanced : {false, true}) {
        const auto criterion = balanced
                                   ? bf::EquityCriterion::gender_balanced()
                                   : bf::EquityCriterion::gender_neutral(corpus.women_fraction);
        const char* tag = balanced ? "balanced" : "neutral";
        const auto institutions =
            bf::classify_corpus(corpus, criterion, bf::GroupBy::institution, c.classify);
        const auto countries =
            bf::classify_corpus(corpus, criterion, bf::GroupBy::country, c.classify);
        bf::write_classification_csv(
            artifact(c, (std::string("classification_") + tag + ".csv").c_str()),
            institutions.results, ec.digest);
        bf::write_classification_csv(
            artifact(c, (std::string("classification_country_") + tag + ".csv").c_str()),
            countries.results, ec.digest);
        const auto boundary =
            bf::decision_boundary(criterion, bf::boundary_grid(c.boundary_max_n), c.classify);
        bf::write_boundary_csv(
            artifact(c, (std::string("decision_boundary_") + tag + ".csv").c_str()),
            criterion.kind, boundary, ec.digest);
        summary[tag] = {{"institution", summary_json(institutions)},
                        {"country", summary_json(countries)}};
    }
    std::ofstream out(artifact(c, "classification_summary.json"), std::ios::binary);
    out << summary.dump(2) << "\n";
}

void run_network(const EffectiveConfig& ec) {
    const RunConfig& c = ec.config;
    require_artifact(c, "clean_artists.csv", "ingest");
    require_artifact(c, "classification_neutral.csv", "classify");
    const auto corpus = corpus::load_clean_corpus(c.out_dir);
    const auto neutral =
        category_map(bf::load_classification_csv(artifact(c, "classification_neutral.csv")));
    const auto balanced =
        category_map(bf::load_classification_csv(artifact(c, "classification_balanced.csv")));

    const auto network = net::build_network(corpus);
    const auto prestige = net::prestige(network, c.prestige);
    net::write_edges_csv(artifact(c, "edges.csv"), network, ec.digest);
    net::write_nodes_csv(artifact(c, "nodes.csv"), network, neutral, balanced, prestige,
                         ec.digest);

    nlohmann::json doc;
    doc["meta"] = {{"config_digest", ec.digest}};
    // report assortativity under both criteria, keyed by criterion name
    {
        const auto a_neutral = net::assortativity(network, neutral);
        const auto a_balanced = net::assortativity(network, balanced);
        auto to_json = [](const net::AssortativitySummary& s) {
            nlohmann::json rows = nlohmann::json::object();
            for (const auto& row : s.rows) {
                nlohmann::json r;
                r["out_weight_total"] = row.out_weight_total;
                r["out_weight_categorised"] = row.out_weight_categorised;
                nlohmann::json shares = nlohmann::json::object();
                if (row.share_man_over) shares["man_over"] = *row.share_man_over;
                if (row.share_null_consistent) {
                    shares["null_consistent"] = *row.share_null_consistent;
                }
                if (row.share_woman_over) shares["woman_over"] = *row.share_woman_over;
                r["target_shares"] = shares;
                r["share_uncategorised"] = row.share_uncategorised;
                rows[std::string(bf::to_string(row.source))] = r;
            }
            nlohmann::json base = nlohmann::json::object();
            for (const auto& [cat, share] : s.baseline) {
                base[std::string(bf::to_string(cat))] = share;
            }
            return nlohmann::json{{"sources", rows}, {"baseline", base}};
        };
        doc["neutral"] = to_json(a_neutral);
        doc["balanced"] = to_json(a_balanced);
    }
    std::ofstream out(artifact(c, "assortativity.json"), std::ios::binary);
    out << doc.dump(2) << "\n";
}

void run_careers(const EffectiveConfig& ec) {
    const RunConfig& c = ec.config;
    require_artifact(c, "clean_artists.csv", "ingest");
    require_artifact(c, "classification_neutral.csv", "classify");
    require_artifact(c, "nodes.csv", "network");
    const auto corpus = corpus::load_clean_corpus(c.out_dir);
    const auto neutral =
        category_map(bf::load_classification_csv(artifact(c, "classification_neutral.csv")));
    const auto balanced =
        category_map(bf::load_classification_csv(artifact(c, "classification_balanced.csv")));
    const auto prestige = net::load_nodes_prestige(artifact(c, "nodes.csv"));

    const auto weighting = c.baseline_weighting == "institution"
                               ? careers::BaselineWeighting::institution
                               : careers::BaselineWeighting::exhibition;

    careers::ArtistTable table;
    table.features = careers::career_features(corpus, prestige);

    std::map<std::string, std::vector<corpus::ExhibitionEvent>> events;
    for (const auto& ev : corpus.exhibitions) events[ev.artist_id].push_back(ev);

    std::vector<careers::LockInResult> lockins;
    for (const bool balanced_run : {false, true}) {
        const auto& categories = balanced_run ? balanced : neutral;
        const auto baseline = careers::category_baseline(corpus, categories, weighting);
        auto& column = balanced_run ? table.co_gender_balanced : table.co_gender_neutral;
        column.reserve(table.features.size());
        for (const auto& f : table.features) {
            column.push_back(careers::co_exhibition_gender(
                f.artist_id, events.at(f.artist_id), categories, baseline,
                c.co_min_exhibitions));
        }
        lockins.push_back(careers::lock_in_matrix(
            corpus, categories, baseline, prestige,
            balanced_run ? bf::CriterionKind::gender_balanced
                         : bf::CriterionKind::gender_neutral,
            c.lockin_window));
    }
    careers::write_careers_csv(artifact(c, "careers.csv"), table, ec.digest);
    careers::write_lockin_json(artifact(c, "lockin.json"), lockins, ec.digest);
}

void run_auctions(const EffectiveConfig& ec) {
    const RunConfig& c = ec.config;
    require_artifact(c, "clean_artists.csv", "ingest");
    require_artifact(c, "careers.csv", "careers");
    const auto corpus = corpus::load_clean_corpus(c.out_dir);
    const auto table = careers::load_careers_csv(artifact(c, "careers.csv"));

    const auto report = auctions::disparity_report(corpus);
    auctions::write_disparity_json(artifact(c, "disparity.json"), report, ec.digest);
    const auto curves = auctions::access_rate_curves(corpus, table.features, c.curves);
    auctions::write_curves_csv(artifact(c, "curves.csv"), curves, ec.digest);
}

void run_regress(const EffectiveConfig& ec) {
    const RunConfig& c = ec.config;
    require_artifact(c, "clean_artists.csv", "ingest");
    require_artifact(c, "careers.csv", "careers");
    const auto corpus = corpus::load_clean_corpus(c.out_dir);
    const auto table = careers::load_careers_csv(artifact(c, "careers.csv"));

    std::set<std::string> auctioned;
    for (const auto& rec : corpus.auctions) auctioned.insert(rec.artist_id);

    const bool use_balanced = c.criterion == "balanced";
    std::vector<regress::ObsInput> rows;
    rows.reserve(table.features.size());
    for (std::size_t i = 0; i < table.features.size(); ++i) {
        const auto& f = table.features[i];
        regress::ObsInput r;
        r.artist_id = f.artist_id;
        r.gender = f.gender;
        r.co_gender = (use_balanced ? table.co_gender_balanced : table.co_gender_neutral)[i]
                          .co_gender;
        r.exhibitions_per_year = f.exhibitions_per_year;
        r.career_length = static_cast<double>(f.career_length);
        r.auctioned = auctioned.count(f.artist_id) > 0;
        rows.push_back(std::move(r));
    }

    std::vector<regress::RegressionFit> fits;
    for (const auto model : {regress::ModelId::m1, regress::ModelId::m2, regress::ModelId::m3,
                             regress::ModelId::m4}) {
        const auto design = regress::encode(rows, model);
        auto fit = regress::fit(design, c.regress_options);
        const std::string name = "fit_model" + std::to_string(static_cast<int>(model)) + ".json";
        regress::write_fit_json(artifact(c, name.c_str()), fit, ec.digest);
        fits.push_back(std::move(fit));
    }
    regress::write_comparison_json(artifact(c, "model_comparison.json"),
                                   regress::compare(fits), ec.digest);
}

void run_simulate(const EffectiveConfig& ec) {
    const RunConfig& c = ec.config;
    synth::WorldSpec spec;
    if (!c.worldspec_file.empty()) {
        spec = synth::load_worldspec(c.worldspec_file);
    } else {
        // Built-in world: three venue clusters with planted probabilities
        // whose exhibition-share-weighted mean equals the woman fraction.
        spec.n_artists = 10000;
        spec.woman_fraction = 0.365;
        spec.groups = {{"man_lean", 120, 0.335, 0.1},
                       {"neutral", 130, 0.4, 0.365},
                       {"woman_lean", 100, 0.265, 0.7}};
    }
    spec.seed = c.seed;
    synth::validate(spec);
    const auto world = synth::generate(spec);
    synth::write_world(c.out_dir, spec, world, ec.digest);
}

void run_report(const EffectiveConfig& ec) {
    report::render(ec.config, ec.digest);
}

} // namespace

void run(const std::string& subcommand, const RunConfig& input) {
    const EffectiveConfig ec = resolve(input);
    const bool known = std::any_of(std::begin(kSubcommands), std::end(kSubcommands),
                                   [&](const char* s) { return subcommand == s; });
    if (!known) {
        throw UsageError("unknown subcommand '" + subcommand +
                         "' (expected ingest, classify, network, careers, auctions, regress, "
                         "simulate, report, or all)");
    }
    fs::create_directories(ec.config.out_dir);
    DirectoryLock lock(ec.config.out_dir);

    const std::vector<std::string> stages =
        subcommand == "all" ? std::vector<std::string>{"ingest", "classify", "network",
                                                       "careers", "auctions", "regress",
                                                       "report"}
                            : std::vector<std::string>{subcommand};
    for (const auto& stage : stages) {
        if (stage == "ingest") run_ingest(ec);
        else if (stage == "classify") run_classify(ec);
        else if (stage == "network") run_network(ec);
        else if (stage == "careers") run_careers(ec);
        else if (stage == "auctions") run_auctions(ec);
        else if (stage == "regress") run_regress(ec);
        else if (stage == "simulate") run_simulate(ec);
        else if (stage == "report") run_report(ec);
        touch_manifest(ec.config.out_dir, stage, ec.digest);
    }
}

int run_cli(const std::string& subcommand, const RunConfig& config,
            std::string* error_message) {
    try {
        run(subcommand, config);
        return 0;
    } catch (const UsageError& e) {
        if (error_message) *error_message = e.what();
        return 1;
    } catch (const DataError& e) {
        if (error_message) *error_message = e.what();
        return 2;
    } catch (const NumericalError& e) {
        if (error_message) *error_message = e.what();
        return 3;
    }
}

} // namespace artequity::pipeline
