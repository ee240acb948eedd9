#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "artequity/bftest.hpp"
#include "artequity/corpus.hpp"

namespace artequity::net {

// Directed weighted institution graph: one unit of weight per consecutive
// pair in an artist's time-ordered exhibition sequence. Nodes cover every
// institution in the corpus, including ones without transitions.
struct CoExhibitionNetwork {
    std::vector<std::string> nodes; // sorted institution ids
    struct Edge {
        std::uint32_t source = 0;
        std::uint32_t target = 0;
        long long weight = 0;
    };
    std::vector<Edge> edges; // sorted by (source, target), no self-loops
    long long total_weight = 0;

    std::size_t node_index(const std::string& id) const; // throws if absent
};

CoExhibitionNetwork build_network(const corpus::CleanCorpus& corpus);

enum class PrestigeBin { low, mid, high };

std::string_view to_string(PrestigeBin b);

struct PrestigeOptions {
    double damping = 0.85;    // teleportation mass is 1 - damping
    double tolerance = 1e-12; // L1 change stopping rule
    long max_iterations = 200000;
    bool use_out_edges = false; // default: incoming links confer prestige
};

struct PrestigeTable {
    std::vector<std::string> institution_ids; // aligned with scores/bins
    std::vector<double> score;                // scaled so max = 1
    std::vector<PrestigeBin> bin;
    long iterations = 0;

    std::optional<double> score_of(const std::string& id) const;
    std::optional<PrestigeBin> bin_of(const std::string& id) const;

private:
    mutable std::map<std::string, std::size_t> index_;
    void ensure_index() const;
};

PrestigeTable prestige(const CoExhibitionNetwork& network, const PrestigeOptions& options = {});

// 40th/70th percentile cutoffs over a score set; ties go to the lower bin.
struct PercentileCuts {
    double p40;
    double p70;
    PrestigeBin bin_of(double score) const;
};
PercentileCuts percentile_cuts(std::vector<double> scores);

// Weighted out-link mixing between institution categories. Shares per
// source are over categorisable targets (summing to 1); the flow into
// uncategorised targets is reported separately.
struct AssortativitySummary {
    struct SourceRow {
        bf::Category source;
        long long out_weight_total = 0;      // all targets
        long long out_weight_categorised = 0; // man/woman/null targets
        std::optional<double> share_man_over;
        std::optional<double> share_null_consistent;
        std::optional<double> share_woman_over;
        double share_uncategorised = 0.0; // of out_weight_total

        std::optional<double> share_of(bf::Category target) const;
    };
    std::vector<SourceRow> rows; // one per source stratum present
    // baseline: category share of categorisable institutions
    std::map<bf::Category, double> baseline;
};

AssortativitySummary assortativity(const CoExhibitionNetwork& network,
                                   const std::map<std::string, bf::Category>& category_of);

void write_edges_csv(const std::string& path, const CoExhibitionNetwork& network,
                     const std::string& config_digest);
void write_nodes_csv(const std::string& path, const CoExhibitionNetwork& network,
                     const std::map<std::string, bf::Category>& neutral,
                     const std::map<std::string, bf::Category>& balanced,
                     const PrestigeTable& prestige, const std::string& config_digest);
void write_assortativity_json(const std::string& path, const AssortativitySummary& summary,
                              const std::string& config_digest);

CoExhibitionNetwork load_edges_csv(const std::string& path);
PrestigeTable load_nodes_prestige(const std::string& path);

} // namespace artequity::net
