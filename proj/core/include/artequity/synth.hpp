#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "artequity/bftest.hpp"
#include "artequity/corpus.hpp"
#include "artequity/exnet.hpp"

namespace artequity::synth {

// Counter-free splitmix64: deterministic across platforms, one independent
// stream per entity so adding artists never perturbs institution draws.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double next_double();                        // [0, 1)
    std::uint64_t next_below(std::uint64_t bound);
    int next_int(int lo, int hi);                // inclusive
    double next_normal();                        // Box-Muller

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[next_below(i)]);
        }
    }
};

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0);

struct GroupSpec {
    std::string name;
    int count = 0;                  // institutions in the group
    double exhibition_share = 0.0;  // target share of all exhibition slots
    std::optional<double> woman_p;  // planted woman-exhibition probability
};

struct ProfileSpec {
    std::string name;
    double share = 0.0;
    std::optional<Gender> gender;           // restrict to one gender; nullopt = any
    std::map<std::string, double> weights;  // venue-group mixture
};

struct AuctionModel {
    double intercept = -2.5;
    double coef_exhibitions_per_year = 2.0;
    double coef_career_length = 1.5;
    double coef_woman = -0.5;
    double records_mean = 3.0;       // extra records beyond the first
    double price_log_sigma = 1.0;
    double price_gender_ratio = 1.75; // man/woman mean raw price
};

struct WorldSpec {
    std::uint64_t seed = 1;
    int n_artists = 1000;
    double woman_fraction = 0.365;
    int start_year_lo = 1995;
    int start_year_hi = 2012;
    int career_years_lo = 2;
    int career_years_hi = 12;
    int exhibitions_lo = 5;
    int exhibitions_hi = 35;
    std::vector<GroupSpec> groups;
    std::vector<ProfileSpec> profiles; // empty: derived from groups' woman_p
    double museum_fraction = 0.3;
    std::vector<std::string> countries = {"US", "DE", "FR", "GB", "AT"};
    AuctionModel auction;
    double curated_fraction = 1.0;
};

void validate(const WorldSpec& spec); // throws DataError on infeasible specs

nlohmann::json worldspec_to_json(const WorldSpec& spec);
WorldSpec worldspec_from_json(const nlohmann::json& j);
WorldSpec load_worldspec(const std::string& path);

struct GeneratedCorpus {
    std::vector<corpus::ArtistRecord> artists;
    std::vector<corpus::ExhibitionEvent> exhibitions;
    std::vector<corpus::AuctionRecord> auctions;
    // planted ground truth: institution categories, artist profiles,
    // access-model coefficients and feature transforms
    std::string truth_json;
};

GeneratedCorpus generate(const WorldSpec& spec);

// Writes artists.csv / exhibitions.csv / auctions.csv in the corpus input
// schemas, plus truth.json and an echo of worldspec.json. A nonempty
// config digest is embedded in every file for provenance.
void write_world(const std::string& out_dir, const WorldSpec& spec,
                 const GeneratedCorpus& world, const std::string& config_digest = "");

// ---- independent test oracles (no shared code with bftest / exnet) ----

enum class Sided { two, below, above };

// ln BF via adaptive quadrature of the marginal likelihood. Requires
// n <= 2000 and prior a,b >= 1 (quadrature budget / endpoint regularity).
double oracle_bf(long long n, long long k, double p0, const bf::BetaPrior& prior, Sided sided);

// Dominant eigenvector of the dense teleported transition matrix,
// scaled to max 1. Requires <= 50 nodes.
std::vector<double> oracle_centrality(const net::CoExhibitionNetwork& network,
                                      double damping = 0.85);

} // namespace artequity::synth
