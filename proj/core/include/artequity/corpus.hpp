#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "artequity/common.hpp"

namespace artequity::corpus {

struct ArtistRecord {
    std::string artist_id;
    std::string name;
    std::optional<int> birth_year;
    Gender curated_gender = Gender::unknown;
    Gender inferred_gender = Gender::unknown;
    std::optional<double> inferred_probability;
};

enum class InstitutionType { museum, gallery, other };

std::string_view to_string(InstitutionType t);
std::optional<InstitutionType> institution_type_from_string(std::string_view s);

struct ExhibitionEvent {
    std::string artist_id;
    std::string institution_id;
    Date date;
    InstitutionType institution_type = InstitutionType::other;
    std::string country;
};

struct AuctionRecord {
    std::string artist_id;
    Date date;
    double raw_price = 0.0;      // 2013 USD
    double normalized_price = 0.0; // raw / annual mean, set by normalize_prices
};

struct Reject {
    std::string file;
    std::size_t row;
    std::string reason;
};

struct RawCorpus {
    std::vector<ArtistRecord> artists;
    std::vector<ExhibitionEvent> exhibitions;
    std::vector<AuctionRecord> auctions;
    std::vector<Reject> rejects;
    std::size_t artist_rows_raw = 0;
    std::size_t exhibition_rows_raw = 0;
    std::size_t auction_rows_raw = 0;
};

struct CleanArtist {
    std::string artist_id;
    std::string name;
    std::optional<int> birth_year;
    Gender gender = Gender::unknown; // always man or woman after filtering
};

// Removal accounting per input file; together with the rejects report this
// satisfies raw == clean + rejected + filtered for each file.
struct FilterStats {
    std::size_t artists_gender_excluded = 0;
    std::size_t artists_age_excluded = 0;
    std::size_t artists_start_year_excluded = 0;
    std::size_t artists_without_exhibitions = 0;
    std::size_t exhibitions_deduplicated = 0;
    std::size_t exhibitions_pre_adulthood = 0;
    std::size_t exhibitions_of_removed_artists = 0;
    std::size_t auctions_pre_adulthood = 0;
    std::size_t auctions_of_removed_artists = 0;

    std::size_t artists_filtered() const {
        return artists_gender_excluded + artists_age_excluded + artists_start_year_excluded +
               artists_without_exhibitions;
    }
    std::size_t exhibitions_filtered() const {
        return exhibitions_deduplicated + exhibitions_pre_adulthood +
               exhibitions_of_removed_artists;
    }
    std::size_t auctions_filtered() const {
        return auctions_pre_adulthood + auctions_of_removed_artists;
    }
};

struct CleanCorpus {
    std::vector<CleanArtist> artists;          // sorted by artist_id
    std::vector<ExhibitionEvent> exhibitions;  // sorted by (artist, date, institution)
    std::vector<AuctionRecord> auctions;       // sorted by (artist, date)
    double women_fraction = 0.0;
    FilterStats stats;
    bool empty_warning = false; // start_year beyond all data, etc.

    std::unordered_map<std::string, std::size_t> artist_index() const;
    std::size_t count_women() const;
};

struct FilterParams {
    int start_year = 1990;
    int min_age = 18;
    int max_start_age = 50;
    double gender_threshold = 0.6;
};

// women / (women + men); 0 when both empty.
double women_fraction(std::size_t women, std::size_t men);

RawCorpus ingest(const std::string& artist_file, const std::string& exhibition_file,
                 const std::string& auction_file);

enum class ResolvedGender { man, woman, excluded };

// Curated gender wins; otherwise the inferred gender if its probability
// reaches the threshold; otherwise excluded.
ResolvedGender resolve_gender(const ArtistRecord& artist, double threshold);

CleanCorpus apply_career_filters(const RawCorpus& raw, const FilterParams& params);

// Sets normalized_price = raw_price / mean(raw_price over same calendar year).
void normalize_prices(std::vector<AuctionRecord>& auctions);

void write_rejects_json(const std::string& path, const std::vector<Reject>& rejects,
                        const std::string& config_digest);

// Clean-corpus artifact IO (ingest stage output, later stages' input).
void write_clean_corpus(const std::string& out_dir, const CleanCorpus& corpus,
                        const std::string& config_digest);
CleanCorpus load_clean_corpus(const std::string& out_dir);

} // namespace artequity::corpus
