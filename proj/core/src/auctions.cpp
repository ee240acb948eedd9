#include "artequity/auctions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "artequity/csv.hpp"

namespace artequity::auctions {

GenderedMetric gendered_metric(std::string name, double men, double women) {
    GenderedMetric m;
    m.name = std::move(name);
    m.men = men;
    m.women = women;
    if (women > 0.0) {
        m.ratio = men / women;
    } else {
        m.ratio_reason = "woman value is zero";
    }
    return m;
}

std::vector<const GenderedMetric*> DisparityReport::rows() const {
    return {&population,   &exhibitions, &auction_population, &access_rate,
            &auction_records, &avg_price, &avg_auctions,      &total_sales};
}

DisparityReport disparity_report(const corpus::CleanCorpus& corpus) {
    std::unordered_map<std::string, Gender> gender_of;
    for (const auto& a : corpus.artists) gender_of.emplace(a.artist_id, a.gender);

    double pop[2] = {0, 0}, exh[2] = {0, 0};
    for (const auto& a : corpus.artists) ++pop[a.gender == Gender::woman];
    for (const auto& e : corpus.exhibitions) ++exh[gender_of.at(e.artist_id) == Gender::woman];

    std::set<std::string> auctioned[2];
    double records[2] = {0, 0}, sales[2] = {0, 0};
    for (const auto& rec : corpus.auctions) {
        const int g = gender_of.at(rec.artist_id) == Gender::woman;
        auctioned[g].insert(rec.artist_id);
        ++records[g];
        sales[g] += rec.normalized_price;
    }
    const double auc_pop[2] = {static_cast<double>(auctioned[0].size()),
                               static_cast<double>(auctioned[1].size())};

    DisparityReport r;
    r.population = gendered_metric("artist_population", pop[0], pop[1]);
    r.exhibitions = gendered_metric("exhibition_count", exh[0], exh[1]);
    r.auction_population = gendered_metric("auction_population", auc_pop[0], auc_pop[1]);
    r.access_rate = gendered_metric("auction_access_rate",
                                    pop[0] > 0 ? auc_pop[0] / pop[0] : 0.0,
                                    pop[1] > 0 ? auc_pop[1] / pop[1] : 0.0);
    r.auction_records = gendered_metric("auction_record_count", records[0], records[1]);
    r.avg_price = gendered_metric("average_auction_price",
                                  records[0] > 0 ? sales[0] / records[0] : 0.0,
                                  records[1] > 0 ? sales[1] / records[1] : 0.0);
    r.avg_auctions = gendered_metric("average_auctions_per_artist",
                                     auc_pop[0] > 0 ? records[0] / auc_pop[0] : 0.0,
                                     auc_pop[1] > 0 ? records[1] / auc_pop[1] : 0.0);
    r.total_sales = gendered_metric("total_normalized_sales", sales[0], sales[1]);
    return r;
}

std::vector<CurvePoint> access_rate_curves(const corpus::CleanCorpus& corpus,
                                           const std::vector<careers::CareerFeatures>& features,
                                           const CurveBinning& binning) {
    if (binning.bins < 1) throw UsageError("curve binning needs at least one bin");
    std::set<std::string> auctioned;
    for (const auto& rec : corpus.auctions) auctioned.insert(rec.artist_id);

    std::vector<CurvePoint> out;
    struct FeatureAccess {
        std::string name;
        double (*get)(const careers::CareerFeatures&);
    };
    const FeatureAccess accessors[2] = {
        {"career_length",
         [](const careers::CareerFeatures& f) { return static_cast<double>(f.career_length); }},
        {"exhibitions_per_year",
         [](const careers::CareerFeatures& f) { return f.exhibitions_per_year; }},
    };

    for (const auto& accessor : accessors) {
        if (features.empty()) continue;
        double lo = accessor.get(features.front()), hi = lo;
        for (const auto& f : features) {
            lo = std::min(lo, accessor.get(f));
            hi = std::max(hi, accessor.get(f));
        }
        if (hi <= lo) hi = lo + 1.0; // degenerate span: single bin covers it
        const double width = (hi - lo) / binning.bins;
        for (const Gender g : {Gender::man, Gender::woman}) {
            std::vector<long long> count(static_cast<std::size_t>(binning.bins), 0);
            std::vector<long long> hits(static_cast<std::size_t>(binning.bins), 0);
            for (const auto& f : features) {
                if (f.gender != g) continue;
                int b = static_cast<int>((accessor.get(f) - lo) / width);
                b = std::clamp(b, 0, binning.bins - 1);
                ++count[static_cast<std::size_t>(b)];
                if (auctioned.count(f.artist_id)) ++hits[static_cast<std::size_t>(b)];
            }
            for (int b = 0; b < binning.bins; ++b) {
                CurvePoint p;
                p.feature = accessor.name;
                p.bin_low = lo + b * width;
                p.bin_high = lo + (b + 1) * width;
                p.gender = g;
                p.n = count[static_cast<std::size_t>(b)];
                if (p.n > 0) {
                    p.access_rate = static_cast<double>(hits[static_cast<std::size_t>(b)]) /
                                    static_cast<double>(p.n);
                }
                out.push_back(std::move(p));
            }
        }
    }
    return out;
}

namespace {

nlohmann::json metric_json(const GenderedMetric& m) {
    nlohmann::json j;
    j["men"] = m.men;
    j["women"] = m.women;
    if (m.ratio) {
        j["ratio"] = *m.ratio;
    } else {
        j["ratio_reason"] = m.ratio_reason;
    }
    return j;
}

GenderedMetric metric_from_json(const std::string& name, const nlohmann::json& j) {
    GenderedMetric m;
    m.name = name;
    m.men = j.at("men").get<double>();
    m.women = j.at("women").get<double>();
    if (j.contains("ratio")) m.ratio = j.at("ratio").get<double>();
    if (j.contains("ratio_reason")) m.ratio_reason = j.at("ratio_reason").get<std::string>();
    return m;
}

} // namespace

void write_disparity_json(const std::string& path, const DisparityReport& report,
                          const std::string& config_digest) {
    nlohmann::json doc;
    doc["meta"] = {{"config_digest", config_digest}};
    nlohmann::json metrics;
    for (const auto* m : report.rows()) metrics[m->name] = metric_json(*m);
    doc["metrics"] = metrics;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out << doc.dump(2) << "\n";
}

DisparityReport load_disparity_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    const auto& m = doc.at("metrics");
    DisparityReport r;
    r.population = metric_from_json("artist_population", m.at("artist_population"));
    r.exhibitions = metric_from_json("exhibition_count", m.at("exhibition_count"));
    r.auction_population = metric_from_json("auction_population", m.at("auction_population"));
    r.access_rate = metric_from_json("auction_access_rate", m.at("auction_access_rate"));
    r.auction_records = metric_from_json("auction_record_count", m.at("auction_record_count"));
    r.avg_price = metric_from_json("average_auction_price", m.at("average_auction_price"));
    r.avg_auctions =
        metric_from_json("average_auctions_per_artist", m.at("average_auctions_per_artist"));
    r.total_sales = metric_from_json("total_normalized_sales", m.at("total_normalized_sales"));
    return r;
}

void write_curves_csv(const std::string& path, const std::vector<CurvePoint>& points,
                      const std::string& config_digest) {
    CsvWriter w(path, {"feature", "bin_low", "bin_high", "gender", "n", "access_rate"},
                "config_digest=" + config_digest);
    for (const auto& p : points) {
        w.write_row({p.feature, format_double(p.bin_low), format_double(p.bin_high),
                     std::string(to_string(p.gender)), std::to_string(p.n),
                     p.access_rate ? format_double(*p.access_rate) : std::string()});
    }
}

} // namespace artequity::auctions
