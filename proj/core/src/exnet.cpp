#include "artequity/exnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "artequity/csv.hpp"

namespace artequity::net {

std::size_t CoExhibitionNetwork::node_index(const std::string& id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
    if (it == nodes.end() || *it != id) throw DataError("unknown institution: " + id);
    return static_cast<std::size_t>(it - nodes.begin());
}

CoExhibitionNetwork build_network(const corpus::CleanCorpus& corpus) {
    CoExhibitionNetwork net;
    for (const auto& ev : corpus.exhibitions) net.nodes.push_back(ev.institution_id);
    std::sort(net.nodes.begin(), net.nodes.end());
    net.nodes.erase(std::unique(net.nodes.begin(), net.nodes.end()), net.nodes.end());

    // Exhibitions are grouped per artist and time-ordered; same-day ties
    // break by institution_id so builds are reproducible.
    std::unordered_map<std::string, std::vector<const corpus::ExhibitionEvent*>> by_artist;
    for (const auto& ev : corpus.exhibitions) by_artist[ev.artist_id].push_back(&ev);

    std::map<std::pair<std::uint32_t, std::uint32_t>, long long> weights;
    for (auto& [artist_id, events] : by_artist) {
        std::sort(events.begin(), events.end(), [](const auto* a, const auto* b) {
            if (a->date != b->date) return a->date < b->date;
            return a->institution_id < b->institution_id;
        });
        for (std::size_t i = 1; i < events.size(); ++i) {
            const auto& prev = *events[i - 1];
            const auto& next = *events[i];
            if (prev.institution_id == next.institution_id) continue; // skip self-loops
            const auto s = static_cast<std::uint32_t>(net.node_index(prev.institution_id));
            const auto t = static_cast<std::uint32_t>(net.node_index(next.institution_id));
            ++weights[{s, t}];
        }
    }
    net.edges.reserve(weights.size());
    for (const auto& [key, w] : weights) {
        net.edges.push_back({key.first, key.second, w});
        net.total_weight += w;
    }
    return net;
}

std::string_view to_string(PrestigeBin b) {
    switch (b) {
    case PrestigeBin::low: return "low";
    case PrestigeBin::mid: return "mid";
    case PrestigeBin::high: return "high";
    }
    return "low";
}

PercentileCuts percentile_cuts(std::vector<double> scores) {
    if (scores.empty()) throw DataError("cannot bin an empty score set");
    std::sort(scores.begin(), scores.end());
    const auto n = scores.size();
    auto quantile = [&](double q) {
        // smallest value with empirical CDF >= q
        std::size_t idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
        if (idx > 0) --idx;
        return scores[idx];
    };
    return {quantile(0.40), quantile(0.70)};
}

PrestigeBin PercentileCuts::bin_of(double score) const {
    if (score <= p40) return PrestigeBin::low;
    if (score <= p70) return PrestigeBin::mid;
    return PrestigeBin::high;
}

PrestigeTable prestige(const CoExhibitionNetwork& network, const PrestigeOptions& options) {
    if (network.nodes.empty()) throw DataError("prestige requires a nonempty network");
    if (!(options.damping > 0.0 && options.damping <= 1.0)) {
        throw UsageError("damping must lie in (0,1]");
    }
    const std::size_t n = network.nodes.size();
    const double d = options.damping;

    // Out-weight-normalized transitions; dangling nodes spread uniformly.
    std::vector<double> out_weight(n, 0.0);
    for (const auto& e : network.edges) {
        const double w = static_cast<double>(e.weight);
        out_weight[options.use_out_edges ? e.target : e.source] += w;
    }
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);
    long iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = 0.0;
            if (out_weight[i] == 0.0) dangling += x[i];
        }
        for (const auto& e : network.edges) {
            const std::size_t s = options.use_out_edges ? e.target : e.source;
            const std::size_t t = options.use_out_edges ? e.source : e.target;
            next[t] += x[s] * static_cast<double>(e.weight) / out_weight[s];
        }
        const double base = d * dangling / static_cast<double>(n) +
                            (1.0 - d) / static_cast<double>(n);
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = d * next[i] + base;
            delta += std::fabs(next[i] - x[i]);
        }
        x.swap(next);
        if (delta < options.tolerance) break;
    }
    if (iter == options.max_iterations) {
        throw NumericalError("prestige power iteration did not converge after " +
                             std::to_string(options.max_iterations) +
                             " iterations (damping=" + format_double(options.damping) +
                             ", tolerance=" + format_double(options.tolerance) + ")");
    }

    const double max_score = *std::max_element(x.begin(), x.end());
    for (auto& v : x) v /= max_score;

    PrestigeTable table;
    table.institution_ids = network.nodes;
    table.score = x;
    table.iterations = iter + 1;
    const PercentileCuts cuts = percentile_cuts(x);
    table.bin.reserve(n);
    for (double s : x) table.bin.push_back(cuts.bin_of(s));
    return table;
}

void PrestigeTable::ensure_index() const {
    if (index_.empty() && !institution_ids.empty()) {
        for (std::size_t i = 0; i < institution_ids.size(); ++i) {
            index_.emplace(institution_ids[i], i);
        }
    }
}

std::optional<double> PrestigeTable::score_of(const std::string& id) const {
    ensure_index();
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return score[it->second];
}

std::optional<PrestigeBin> PrestigeTable::bin_of(const std::string& id) const {
    ensure_index();
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return bin[it->second];
}

std::optional<double> AssortativitySummary::SourceRow::share_of(bf::Category target) const {
    switch (target) {
    case bf::Category::man_over: return share_man_over;
    case bf::Category::null_consistent: return share_null_consistent;
    case bf::Category::woman_over: return share_woman_over;
    default: return std::nullopt;
    }
}

AssortativitySummary assortativity(const CoExhibitionNetwork& network,
                                   const std::map<std::string, bf::Category>& category_of) {
    const std::size_t n = network.nodes.size();
    std::vector<bf::Category> cat(n, bf::Category::uncategorised);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = category_of.find(network.nodes[i]);
        if (it == category_of.end()) {
            throw DataError("assortativity: no classification for institution " +
                            network.nodes[i]);
        }
        cat[i] = it->second;
    }

    using bf::Category;
    const Category strata[4] = {Category::man_over, Category::null_consistent,
                                Category::woman_over, Category::uncategorised};
    auto stratum_index = [&](Category c) {
        for (std::size_t i = 0; i < 4; ++i) {
            if (strata[i] == c) return i;
        }
        return std::size_t{3};
    };

    long long flow[4][4] = {};
    for (const auto& e : network.edges) {
        flow[stratum_index(cat[e.source])][stratum_index(cat[e.target])] += e.weight;
    }

    AssortativitySummary summary;
    for (std::size_t s = 0; s < 4; ++s) {
        AssortativitySummary::SourceRow row;
        row.source = strata[s];
        for (std::size_t t = 0; t < 4; ++t) row.out_weight_total += flow[s][t];
        row.out_weight_categorised = row.out_weight_total - flow[s][3];
        if (row.out_weight_total == 0) continue; // zero outgoing weight: absent
        if (row.out_weight_categorised > 0) {
            const double denom = static_cast<double>(row.out_weight_categorised);
            row.share_man_over = static_cast<double>(flow[s][0]) / denom;
            row.share_null_consistent = static_cast<double>(flow[s][1]) / denom;
            row.share_woman_over = static_cast<double>(flow[s][2]) / denom;
        }
        row.share_uncategorised =
            static_cast<double>(flow[s][3]) / static_cast<double>(row.out_weight_total);
        summary.rows.push_back(row);
    }

    std::size_t categorisable = 0;
    std::map<bf::Category, std::size_t> counts;
    for (const auto c : cat) {
        if (c != Category::uncategorised) {
            ++counts[c];
            ++categorisable;
        }
    }
    if (categorisable > 0) {
        for (const auto& [c, count] : counts) {
            summary.baseline[c] =
                static_cast<double>(count) / static_cast<double>(categorisable);
        }
    }
    return summary;
}

void write_edges_csv(const std::string& path, const CoExhibitionNetwork& network,
                     const std::string& config_digest) {
    CsvWriter w(path, {"source", "target", "weight"}, "config_digest=" + config_digest);
    for (const auto& e : network.edges) {
        w.write_row({network.nodes[e.source], network.nodes[e.target],
                     std::to_string(e.weight)});
    }
}

namespace {
std::string category_str(const std::map<std::string, bf::Category>& m, const std::string& id) {
    auto it = m.find(id);
    return std::string(to_string(it == m.end() ? bf::Category::uncategorised : it->second));
}
} // namespace

void write_nodes_csv(const std::string& path, const CoExhibitionNetwork& network,
                     const std::map<std::string, bf::Category>& neutral,
                     const std::map<std::string, bf::Category>& balanced,
                     const PrestigeTable& prestige, const std::string& config_digest) {
    CsvWriter w(path,
                {"institution_id", "category_neutral", "category_balanced", "prestige_score",
                 "prestige_bin"},
                "config_digest=" + config_digest);
    for (std::size_t i = 0; i < network.nodes.size(); ++i) {
        const auto& id = network.nodes[i];
        w.write_row({id, category_str(neutral, id), category_str(balanced, id),
                     format_double(prestige.score[i]),
                     std::string(to_string(prestige.bin[i]))});
    }
}

void write_assortativity_json(const std::string& path, const AssortativitySummary& summary,
                              const std::string& config_digest) {
    nlohmann::json doc;
    doc["meta"] = {{"config_digest", config_digest}};
    nlohmann::json rows = nlohmann::json::object();
    for (const auto& row : summary.rows) {
        nlohmann::json r;
        r["out_weight_total"] = row.out_weight_total;
        r["out_weight_categorised"] = row.out_weight_categorised;
        nlohmann::json shares = nlohmann::json::object();
        if (row.share_man_over) shares["man_over"] = *row.share_man_over;
        if (row.share_null_consistent) shares["null_consistent"] = *row.share_null_consistent;
        if (row.share_woman_over) shares["woman_over"] = *row.share_woman_over;
        r["target_shares"] = shares;
        r["share_uncategorised"] = row.share_uncategorised;
        rows[std::string(to_string(row.source))] = r;
    }
    doc["sources"] = rows;
    nlohmann::json base = nlohmann::json::object();
    for (const auto& [cat, share] : summary.baseline) {
        base[std::string(to_string(cat))] = share;
    }
    doc["baseline"] = base;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out << doc.dump(2) << "\n";
}

CoExhibitionNetwork load_edges_csv(const std::string& path) {
    CsvReader r(path);
    r.require_header({"source", "target", "weight"}, path);
    std::vector<std::tuple<std::string, std::string, long long>> raw;
    std::vector<std::string> fields;
    std::size_t row = 0;
    CoExhibitionNetwork net;
    while (r.next(fields, row)) {
        raw.emplace_back(fields[0], fields[1], std::stoll(fields[2]));
        net.nodes.push_back(fields[0]);
        net.nodes.push_back(fields[1]);
    }
    std::sort(net.nodes.begin(), net.nodes.end());
    net.nodes.erase(std::unique(net.nodes.begin(), net.nodes.end()), net.nodes.end());
    for (const auto& [s, t, w] : raw) {
        net.edges.push_back({static_cast<std::uint32_t>(net.node_index(s)),
                             static_cast<std::uint32_t>(net.node_index(t)), w});
        net.total_weight += w;
    }
    std::sort(net.edges.begin(), net.edges.end(), [](const auto& a, const auto& b) {
        return std::pair(a.source, a.target) < std::pair(b.source, b.target);
    });
    return net;
}

PrestigeTable load_nodes_prestige(const std::string& path) {
    CsvReader r(path);
    r.require_header({"institution_id", "category_neutral", "category_balanced",
                      "prestige_score", "prestige_bin"},
                     path);
    PrestigeTable table;
    std::vector<std::string> fields;
    std::size_t row = 0;
    while (r.next(fields, row)) {
        table.institution_ids.push_back(fields[0]);
        table.score.push_back(std::stod(fields[3]));
        if (fields[4] == "low") table.bin.push_back(PrestigeBin::low);
        else if (fields[4] == "mid") table.bin.push_back(PrestigeBin::mid);
        else table.bin.push_back(PrestigeBin::high);
    }
    return table;
}

} // namespace artequity::net
