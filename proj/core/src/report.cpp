#include "artequity/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "artequity/pipeline.hpp"

namespace artequity::report {

namespace fs = std::filesystem;

std::string format_ratio(double ratio) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", ratio);
    return buf;
}

namespace {

nlohmann::json load_json(const std::string& path, const char* producer) {
    if (!fs::exists(path)) {
        throw DataError("missing artifact " + path + "; run `artequity " + producer +
                        "` first");
    }
    std::ifstream in(path);
    return nlohmann::json::parse(in);
}

void render_classification(std::ostringstream& out, const nlohmann::json& summary,
                           const char* tag) {
    const auto& s = summary.at(tag).at("institution");
    out << "Institutions under the gender-" << tag
        << " criterion (p0 = " << format_double(s.at("p0").get<double>()) << ")\n";
    const auto& counts = s.at("counts");
    const auto& shares = s.at("shares_among_categorisable");
    for (const char* cat : {"man_over", "null_consistent", "woman_over"}) {
        const long long n = counts.contains(cat) ? counts.at(cat).get<long long>() : 0;
        out << "  " << cat << ": " << n;
        if (shares.contains(cat)) {
            out << " (" << format_percent(shares.at(cat).get<double>())
                << " of categorisable)";
        }
        out << "\n";
    }
    const long long unc =
        counts.contains("uncategorised") ? counts.at("uncategorised").get<long long>() : 0;
    out << "  uncategorised: " << unc << " ("
        << format_percent(s.at("uncategorised_exhibition_share").get<double>())
        << " of exhibitions)\n";
}

void render_assortativity(std::ostringstream& out, const nlohmann::json& doc,
                          const char* tag) {
    const auto& crit = doc.at(tag);
    out << "Assortativity (gender-" << tag << " categories)\n";
    const auto& sources = crit.at("sources");
    const auto& baseline = crit.at("baseline");
    for (const char* cat : {"man_over", "null_consistent", "woman_over"}) {
        if (!sources.contains(cat)) continue;
        const auto& shares = sources.at(cat).at("target_shares");
        if (!shares.contains(cat)) continue;
        out << "  " << cat << " -> " << cat << ": "
            << format_percent(shares.at(cat).get<double>());
        if (baseline.contains(cat)) {
            out << " (random baseline " << format_percent(baseline.at(cat).get<double>())
                << ")";
        }
        out << "\n";
    }
}

void render_disparity(std::ostringstream& out, const nlohmann::json& doc) {
    out << "Gender disparity metrics (men / women / man-to-woman ratio)\n";
    static const std::pair<const char*, const char*> kRows[] = {
        {"artist_population", "Artist population"},
        {"exhibition_count", "Number of exhibitions"},
        {"auction_population", "Auction population"},
        {"auction_access_rate", "Auction access rate"},
        {"auction_record_count", "Number of auction records"},
        {"average_auction_price", "Average auction price (normalized)"},
        {"average_auctions_per_artist", "Average number of auctions"},
        {"total_normalized_sales", "Auction total sales (normalized)"},
    };
    const auto& metrics = doc.at("metrics");
    for (const auto& [key, label] : kRows) {
        const auto& m = metrics.at(key);
        char line[160];
        const bool rate = std::string(key) == "auction_access_rate";
        const std::string men = rate ? format_percent(m.at("men").get<double>())
                                     : format_double(m.at("men").get<double>());
        const std::string women = rate ? format_percent(m.at("women").get<double>())
                                       : format_double(m.at("women").get<double>());
        std::string ratio = "n/a";
        if (m.contains("ratio")) ratio = format_ratio(m.at("ratio").get<double>());
        std::snprintf(line, sizeof line, "  %-36s %14s %14s %8s\n", label, men.c_str(),
                      women.c_str(), ratio.c_str());
        out << line;
    }
}

void render_lockin(std::ostringstream& out, const nlohmann::json& doc) {
    for (const auto& entry : doc.at("lockin")) {
        out << "Co-exhibition gender lock-in (criterion " << entry.at("criterion").get<std::string>()
            << ", first/last " << entry.at("window").get<int>() << " exhibitions)\n";
        const auto& m = entry.at("global");
        const auto labels = m.at("labels").get<std::vector<std::string>>();
        out << "  early \\ late    ";
        for (const auto& l : labels) {
            char cell[32];
            std::snprintf(cell, sizeof cell, "%12s", l.c_str());
            out << cell;
        }
        out << "\n";
        const auto prob = m.at("probability");
        for (std::size_t r = 0; r < labels.size(); ++r) {
            char head[32];
            std::snprintf(head, sizeof head, "  %-12s", labels[r].c_str());
            out << head << "    ";
            for (std::size_t c = 0; c < labels.size(); ++c) {
                char cell[32];
                std::snprintf(cell, sizeof cell, "%12s",
                              format_percent(prob.at(r).at(c).get<double>(), 1).c_str());
                out << cell;
            }
            out << "\n";
        }
    }
}

void render_regression(std::ostringstream& out, const std::string& out_dir) {
    out << "Auction access regression\n";
    for (int model = 1; model <= 4; ++model) {
        const auto path =
            (fs::path(out_dir) / ("fit_model" + std::to_string(model) + ".json")).string();
        const auto fit = load_json(path, "regress");
        char head[160];
        std::snprintf(head, sizeof head,
                      "  Model %d: N=%lld, df=%d, BIC=%.2f, lnL=%.2f\n", model,
                      fit.at("n_obs").get<long long>(), fit.at("df").get<int>(),
                      fit.at("bic").get<double>(), fit.at("log_likelihood").get<double>());
        out << head;
        char hdr[160];
        std::snprintf(hdr, sizeof hdr, "    %-22s %9s %9s %8s %10s %19s\n", "variable", "coef",
                      "O.R.", "S.E.", "p", "95% CI");
        out << hdr;
        for (const auto& c : fit.at("coefficients")) {
            const double p = c.at("p_value").get<double>();
            char pbuf[16];
            if (p < 0.001) std::snprintf(pbuf, sizeof pbuf, "<0.001");
            else std::snprintf(pbuf, sizeof pbuf, "%.3f", p);
            char line[200];
            std::snprintf(line, sizeof line,
                          "    %-22s %9.3f %9.3f %8.3f %10s (%8.3f, %8.3f)\n",
                          c.at("name").get<std::string>().c_str(),
                          c.at("coef").get<double>(), c.at("odds_ratio").get<double>(),
                          c.at("se").get<double>(), pbuf, c.at("ci_low").get<double>(),
                          c.at("ci_high").get<double>());
            out << line;
        }
    }
    const auto comparison =
        load_json((fs::path(out_dir) / "model_comparison.json").string(), "regress");
    out << "  Model comparison (delta BIC vs Model 1): ";
    bool first = true;
    for (const auto& row : comparison.at("models")) {
        if (!first) out << ", ";
        first = false;
        out << "M" << row.at("model").get<int>() << " "
            << format_ratio(row.at("delta_bic").get<double>());
    }
    out << "\n";
}

} // namespace

void render(const pipeline::RunConfig& config, const std::string& digest) {
    const std::string& dir = config.out_dir;
    const auto corpus_summary =
        load_json((fs::path(dir) / "corpus_summary.json").string(), "ingest");
    const auto classification =
        load_json((fs::path(dir) / "classification_summary.json").string(), "classify");
    const auto assort = load_json((fs::path(dir) / "assortativity.json").string(), "network");
    const auto lockin = load_json((fs::path(dir) / "lockin.json").string(), "careers");
    const auto disparity = load_json((fs::path(dir) / "disparity.json").string(), "auctions");

    std::ostringstream out;
    out << "artequity audit report\n";
    out << "======================\n";
    out << "config digest: " << digest << "\n\n";

    const auto& artists = corpus_summary.at("artists");
    out << "Corpus: " << artists.at("total").get<long long>() << " artists ("
        << artists.at("men").get<long long>() << " men, "
        << artists.at("women").get<long long>() << " women, women fraction "
        << format_percent(artists.at("women_fraction").get<double>()) << "), "
        << corpus_summary.at("exhibitions").get<long long>() << " exhibitions, "
        << corpus_summary.at("auctions").get<long long>() << " auction records\n\n";

    render_classification(out, classification, "neutral");
    out << "\n";
    render_classification(out, classification, "balanced");
    out << "\n";
    render_assortativity(out, assort, "neutral");
    out << "\n";
    render_lockin(out, lockin);
    out << "\n";
    render_disparity(out, disparity);
    out << "\n";
    render_regression(out, dir);

    {
        std::ofstream f((fs::path(dir) / "report.txt").string(), std::ios::binary);
        if (!f) throw DataError("cannot write report.txt");
        f << out.str();
    }
    {
        nlohmann::json doc;
        doc["meta"] = {{"config_digest", digest}};
        doc["corpus"] = corpus_summary;
        doc["classification"] = classification;
        doc["assortativity"] = assort;
        doc["lockin"] = lockin;
        doc["disparity"] = disparity;
        doc["regression"] = nlohmann::json::array();
        for (int model = 1; model <= 4; ++model) {
            doc["regression"].push_back(load_json(
                (fs::path(dir) / ("fit_model" + std::to_string(model) + ".json")).string(),
                "regress"));
        }
        doc["model_comparison"] =
            load_json((fs::path(dir) / "model_comparison.json").string(), "regress");
        std::ofstream f((fs::path(dir) / "report.json").string(), std::ios::binary);
        f << doc.dump(2) << "\n";
    }
}

} // namespace artequity::report
