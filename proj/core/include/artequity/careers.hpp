#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "artequity/bftest.hpp"
#include "artequity/corpus.hpp"
#include "artequity/exnet.hpp"

namespace artequity::careers {

struct CareerFeatures {
    std::string artist_id;
    Gender gender = Gender::unknown;
    long long exhibition_count = 0;
    int career_length = 0; // last year - first year + 1
    double exhibitions_per_year = 0.0;
    std::optional<double> artist_prestige; // mean venue prestige, with multiplicity
    std::optional<net::PrestigeBin> prestige_bin;
};

std::vector<CareerFeatures> career_features(const corpus::CleanCorpus& corpus,
                                            const net::PrestigeTable& prestige);

// Canonical venue-category order for rho vectors.
inline constexpr std::array<bf::Category, 3> kVenueCategories = {
    bf::Category::man_over, bf::Category::null_consistent, bf::Category::woman_over};

enum class CoGender { co_man, co_neutral, co_woman, unassigned };

std::string_view to_string(CoGender g);

// Expected category shares if venues were selected at random. The default
// weights each category by its share of exhibition slots; the alternative
// weights by its share of institutions.
enum class BaselineWeighting { exhibition, institution };

struct Baseline {
    std::array<double, 3> share = {0.0, 0.0, 0.0}; // kVenueCategories order
};

Baseline category_baseline(const corpus::CleanCorpus& corpus,
                           const std::map<std::string, bf::Category>& category_of,
                           BaselineWeighting weighting = BaselineWeighting::exhibition);

struct CoExhibitionProfile {
    std::string artist_id;
    std::array<double, 3> rho = {0.0, 0.0, 0.0};
    std::array<double, 3> rho_baseline = {0.0, 0.0, 0.0};
    CoGender co_gender = CoGender::unassigned;
    std::string reason; // set when unassigned
    long long total_exhibitions = 0;
    long long categorisable_exhibitions = 0;
};

// Index of the largest relative difference (rho - base)/base; categories
// with base = 0 are skipped; -1 on an exact tie for the maximum.
int rel_diff_argmax(const std::array<double, 3>& rho, const std::array<double, 3>& base);

// Assigns the dominant venue category of an artist's exhibitions relative
// to the corpus baseline. Artists need strictly more than min_exhibitions
// exhibitions to be assigned.
CoExhibitionProfile co_exhibition_gender(const std::vector<bf::Category>& venue_categories,
                                         const Baseline& baseline,
                                         long long min_exhibitions = 10);

CoExhibitionProfile co_exhibition_gender(const std::string& artist_id,
                                         const std::vector<corpus::ExhibitionEvent>& exhibitions,
                                         const std::map<std::string, bf::Category>& category_of,
                                         const Baseline& baseline,
                                         long long min_exhibitions = 10);

// Early/late co-exhibition-gender transition matrix: rows = label from the
// first `window` exhibitions, columns = label from the last `window`,
// row-normalized. Only artists with >= 2*window exhibitions whose windows
// both yield a label are counted.
struct LockInMatrix {
    std::array<std::array<double, 3>, 3> probability = {}; // row-normalized
    std::array<std::array<long long, 3>, 3> counts = {};
    std::array<long long, 3> row_totals = {};
    long long artists_included = 0;
    long long artists_window_unassigned = 0;
};

struct LockInResult {
    int window = 5;
    bf::CriterionKind criterion = bf::CriterionKind::gender_neutral;
    LockInMatrix global;
    std::map<std::string, LockInMatrix> by_prestige_bin; // "low","mid","high","unbinned"
};

LockInResult lock_in_matrix(const corpus::CleanCorpus& corpus,
                            const std::map<std::string, bf::Category>& category_of,
                            const Baseline& baseline, const net::PrestigeTable& prestige,
                            bf::CriterionKind criterion, int window = 5);

struct ArtistTable {
    std::vector<CareerFeatures> features;                  // sorted by artist_id
    std::vector<CoExhibitionProfile> co_gender_neutral;    // aligned
    std::vector<CoExhibitionProfile> co_gender_balanced;   // aligned
};

void write_careers_csv(const std::string& path, const ArtistTable& table,
                       const std::string& config_digest);
ArtistTable load_careers_csv(const std::string& path);

void write_lockin_json(const std::string& path, const std::vector<LockInResult>& results,
                       const std::string& config_digest);

} // namespace artequity::careers
