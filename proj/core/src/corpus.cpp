#include "artequity/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "artequity/csv.hpp"

namespace artequity::corpus {

namespace {

const std::vector<std::string> kArtistHeader = {
    "artist_id", "name", "birth_year", "curated_gender", "inferred_gender",
    "inferred_probability"};
const std::vector<std::string> kExhibitionHeader = {
    "artist_id", "institution_id", "date", "institution_type", "country"};
const std::vector<std::string> kAuctionHeader = {"artist_id", "date", "price_usd2013"};

bool parse_int_field(const std::string& s, int& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_double_field(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

} // namespace

std::string_view to_string(InstitutionType t) {
    switch (t) {
    case InstitutionType::museum: return "museum";
    case InstitutionType::gallery: return "gallery";
    case InstitutionType::other: return "other";
    }
    return "other";
}

std::optional<InstitutionType> institution_type_from_string(std::string_view s) {
    if (s == "museum") return InstitutionType::museum;
    if (s == "gallery") return InstitutionType::gallery;
    if (s == "other" || s.empty()) return InstitutionType::other;
    return std::nullopt;
}

double women_fraction(std::size_t women, std::size_t men) {
    const std::size_t total = women + men;
    if (total == 0) return 0.0;
    return static_cast<double>(women) / static_cast<double>(total);
}

std::unordered_map<std::string, std::size_t> CleanCorpus::artist_index() const {
    std::unordered_map<std::string, std::size_t> index;
    index.reserve(artists.size());
    for (std::size_t i = 0; i < artists.size(); ++i) index.emplace(artists[i].artist_id, i);
    return index;
}

std::size_t CleanCorpus::count_women() const {
    return static_cast<std::size_t>(
        std::count_if(artists.begin(), artists.end(),
                      [](const CleanArtist& a) { return a.gender == Gender::woman; }));
}

RawCorpus ingest(const std::string& artist_file, const std::string& exhibition_file,
                 const std::string& auction_file) {
    namespace fs = std::filesystem;
    for (const auto& f : {artist_file, exhibition_file, auction_file}) {
        if (!fs::exists(f)) throw DataError("missing file: " + f);
    }

    RawCorpus raw;
    std::vector<std::string> fields;
    std::size_t row = 0;

    {
        CsvReader reader(artist_file);
        reader.require_header(kArtistHeader, "artists");
        std::unordered_set<std::string> seen;
        while (reader.next(fields, row)) {
            ++raw.artist_rows_raw;
            if (fields.size() != kArtistHeader.size()) {
                raw.rejects.push_back({"artists", row, "wrong field count"});
                continue;
            }
            ArtistRecord rec;
            rec.artist_id = fields[0];
            rec.name = fields[1];
            if (rec.artist_id.empty()) {
                raw.rejects.push_back({"artists", row, "empty artist_id"});
                continue;
            }
            if (!seen.insert(rec.artist_id).second) {
                throw DataError("artists: duplicate artist_id '" + rec.artist_id + "' at row " +
                                std::to_string(row));
            }
            if (!fields[2].empty()) {
                int y = 0;
                if (!parse_int_field(fields[2], y)) {
                    raw.rejects.push_back({"artists", row, "unparseable birth_year"});
                    continue;
                }
                rec.birth_year = y;
            }
            auto curated = gender_from_string(fields[3]);
            auto inferred = gender_from_string(fields[4]);
            if (!curated || !inferred) {
                raw.rejects.push_back({"artists", row, "unknown gender value"});
                continue;
            }
            rec.curated_gender = *curated;
            rec.inferred_gender = *inferred;
            if (!fields[5].empty()) {
                double p = 0.0;
                if (!parse_double_field(fields[5], p) || p < 0.0 || p > 1.0) {
                    raw.rejects.push_back({"artists", row, "inferred_probability not in [0,1]"});
                    continue;
                }
                rec.inferred_probability = p;
            }
            // invariant: probability present iff an inferred gender is present
            if (rec.inferred_gender != Gender::unknown && !rec.inferred_probability) {
                raw.rejects.push_back({"artists", row, "inferred_gender without probability"});
                continue;
            }
            if (rec.inferred_gender == Gender::unknown && rec.inferred_probability) {
                raw.rejects.push_back({"artists", row, "probability without inferred_gender"});
                continue;
            }
            raw.artists.push_back(std::move(rec));
        }
    }

    std::unordered_set<std::string> known_artists;
    known_artists.reserve(raw.artists.size());
    for (const auto& a : raw.artists) known_artists.insert(a.artist_id);

    {
        CsvReader reader(exhibition_file);
        reader.require_header(kExhibitionHeader, "exhibitions");
        while (reader.next(fields, row)) {
            ++raw.exhibition_rows_raw;
            if (fields.size() != kExhibitionHeader.size()) {
                raw.rejects.push_back({"exhibitions", row, "wrong field count"});
                continue;
            }
            ExhibitionEvent ev;
            ev.artist_id = fields[0];
            ev.institution_id = fields[1];
            if (ev.artist_id.empty() || ev.institution_id.empty()) {
                raw.rejects.push_back({"exhibitions", row, "empty artist_id or institution_id"});
                continue;
            }
            if (!known_artists.count(ev.artist_id)) {
                raw.rejects.push_back({"exhibitions", row, "unknown artist_id '" + ev.artist_id + "'"});
                continue;
            }
            auto date = Date::parse_iso(fields[2]);
            if (!date) {
                raw.rejects.push_back({"exhibitions", row, "unparseable date '" + fields[2] + "'"});
                continue;
            }
            ev.date = *date;
            auto type = institution_type_from_string(fields[3]);
            if (!type) {
                raw.rejects.push_back({"exhibitions", row, "unknown institution_type '" + fields[3] + "'"});
                continue;
            }
            ev.institution_type = *type;
            ev.country = fields[4];
            raw.exhibitions.push_back(std::move(ev));
        }
    }

    {
        CsvReader reader(auction_file);
        reader.require_header(kAuctionHeader, "auctions");
        while (reader.next(fields, row)) {
            ++raw.auction_rows_raw;
            if (fields.size() != kAuctionHeader.size()) {
                raw.rejects.push_back({"auctions", row, "wrong field count"});
                continue;
            }
            AuctionRecord rec;
            rec.artist_id = fields[0];
            if (rec.artist_id.empty() || !known_artists.count(rec.artist_id)) {
                raw.rejects.push_back({"auctions", row, "unknown artist_id '" + rec.artist_id + "'"});
                continue;
            }
            auto date = Date::parse_iso(fields[1]);
            if (!date) {
                raw.rejects.push_back({"auctions", row, "unparseable date '" + fields[1] + "'"});
                continue;
            }
            rec.date = *date;
            if (!parse_double_field(fields[2], rec.raw_price) || rec.raw_price <= 0.0) {
                raw.rejects.push_back({"auctions", row, "price_usd2013 not a positive number"});
                continue;
            }
            raw.auctions.push_back(std::move(rec));
        }
    }

    return raw;
}

ResolvedGender resolve_gender(const ArtistRecord& artist, double threshold) {
    if (artist.curated_gender == Gender::man) return ResolvedGender::man;
    if (artist.curated_gender == Gender::woman) return ResolvedGender::woman;
    if (artist.inferred_gender != Gender::unknown && artist.inferred_probability &&
        *artist.inferred_probability >= threshold) {
        return artist.inferred_gender == Gender::man ? ResolvedGender::man
                                                     : ResolvedGender::woman;
    }
    return ResolvedGender::excluded;
}

CleanCorpus apply_career_filters(const RawCorpus& raw, const FilterParams& params) {
    if (params.gender_threshold <= 0.5 || params.gender_threshold > 1.0) {
        throw UsageError("gender threshold must lie in (0.5, 1]");
    }
    CleanCorpus clean;

    // Stage 1: gender resolution.
    std::unordered_map<std::string, CleanArtist> resolved;
    resolved.reserve(raw.artists.size());
    for (const auto& rec : raw.artists) {
        const ResolvedGender g = resolve_gender(rec, params.gender_threshold);
        if (g == ResolvedGender::excluded) {
            ++clean.stats.artists_gender_excluded;
            continue;
        }
        resolved.emplace(rec.artist_id,
                         CleanArtist{rec.artist_id, rec.name, rec.birth_year,
                                     g == ResolvedGender::man ? Gender::man : Gender::woman});
    }

    // Stage 2: deduplicate exhibitions on (artist, institution, date) and
    // group per artist. Events of gender-excluded artists are dropped here.
    std::unordered_map<std::string, std::vector<ExhibitionEvent>> events_by_artist;
    {
        std::set<std::tuple<std::string, std::string, Date>> seen;
        for (const auto& ev : raw.exhibitions) {
            if (!resolved.count(ev.artist_id)) {
                ++clean.stats.exhibitions_of_removed_artists;
                continue;
            }
            if (!seen.insert({ev.artist_id, ev.institution_id, ev.date}).second) {
                ++clean.stats.exhibitions_deduplicated;
                continue;
            }
            events_by_artist[ev.artist_id].push_back(ev);
        }
    }

    // Stage 3: age filter on career start, then the start-year filter.
    // Ages use birth_year only; artists without one bypass the age filters.
    std::unordered_map<std::string, std::vector<ExhibitionEvent>> kept;
    for (auto& [artist_id, events] : events_by_artist) {
        std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
            if (a.date != b.date) return a.date < b.date;
            return a.institution_id < b.institution_id;
        });
        const CleanArtist& artist = resolved.at(artist_id);
        const int first_year = events.front().date.year;
        if (artist.birth_year) {
            const int start_age = first_year - *artist.birth_year;
            if (start_age < params.min_age || start_age > params.max_start_age) {
                ++clean.stats.artists_age_excluded;
                clean.stats.exhibitions_of_removed_artists += events.size();
                continue;
            }
        }
        if (first_year < params.start_year) {
            ++clean.stats.artists_start_year_excluded;
            clean.stats.exhibitions_of_removed_artists += events.size();
            continue;
        }
        // Drop events before adulthood (age filters computable only with birth_year).
        if (artist.birth_year) {
            const int adult_year = *artist.birth_year + params.min_age;
            std::vector<ExhibitionEvent> adult_events;
            adult_events.reserve(events.size());
            for (auto& ev : events) {
                if (ev.date.year < adult_year) {
                    ++clean.stats.exhibitions_pre_adulthood;
                } else {
                    adult_events.push_back(std::move(ev));
                }
            }
            events = std::move(adult_events);
            if (events.empty()) {
                ++clean.stats.artists_without_exhibitions;
                continue;
            }
        }
        kept.emplace(artist_id, std::move(events));
    }

    // Artists that resolved a gender but have no exhibitions at all.
    for (const auto& [artist_id, artist] : resolved) {
        if (!events_by_artist.count(artist_id)) ++clean.stats.artists_without_exhibitions;
    }

    // Assemble, sorted for determinism.
    for (const auto& [artist_id, events] : kept) {
        clean.artists.push_back(resolved.at(artist_id));
    }
    std::sort(clean.artists.begin(), clean.artists.end(),
              [](const CleanArtist& a, const CleanArtist& b) { return a.artist_id < b.artist_id; });
    for (const auto& artist : clean.artists) {
        const auto& events = kept.at(artist.artist_id);
        clean.exhibitions.insert(clean.exhibitions.end(), events.begin(), events.end());
    }

    // Auctions: keep records of retained artists, dated in adulthood.
    for (const auto& rec : raw.auctions) {
        auto it = kept.find(rec.artist_id);
        if (it == kept.end()) {
            ++clean.stats.auctions_of_removed_artists;
            continue;
        }
        const CleanArtist& artist = resolved.at(rec.artist_id);
        if (artist.birth_year && rec.date.year < *artist.birth_year + params.min_age) {
            ++clean.stats.auctions_pre_adulthood;
            continue;
        }
        clean.auctions.push_back(rec);
    }
    std::sort(clean.auctions.begin(), clean.auctions.end(), [](const auto& a, const auto& b) {
        if (a.artist_id != b.artist_id) return a.artist_id < b.artist_id;
        return a.date < b.date;
    });

    std::size_t women = 0, men = 0;
    for (const auto& a : clean.artists) (a.gender == Gender::woman ? women : men) += 1;
    clean.women_fraction = women_fraction(women, men);
    clean.empty_warning = clean.artists.empty();
    return clean;
}

void normalize_prices(std::vector<AuctionRecord>& auctions) {
    std::map<int, std::pair<double, std::size_t>> per_year; // sum, count
    for (const auto& rec : auctions) {
        if (!(rec.raw_price > 0.0)) throw DataError("auction price must be positive");
        auto& [sum, count] = per_year[rec.date.year];
        sum += rec.raw_price;
        ++count;
    }
    for (auto& rec : auctions) {
        const auto& [sum, count] = per_year.at(rec.date.year);
        rec.normalized_price = rec.raw_price / (sum / static_cast<double>(count));
    }
}

void write_rejects_json(const std::string& path, const std::vector<Reject>& rejects,
                        const std::string& config_digest) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rejects) {
        arr.push_back({{"file", r.file}, {"row", r.row}, {"reason", r.reason}});
    }
    nlohmann::json doc;
    doc["meta"] = {{"config_digest", config_digest}};
    doc["rejects"] = arr;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out << doc.dump(2) << "\n";
}

void write_clean_corpus(const std::string& out_dir, const CleanCorpus& corpus,
                        const std::string& config_digest) {
    namespace fs = std::filesystem;
    const std::string meta = "config_digest=" + config_digest;
    {
        CsvWriter w((fs::path(out_dir) / "clean_artists.csv").string(),
                    {"artist_id", "name", "birth_year", "gender"}, meta);
        for (const auto& a : corpus.artists) {
            w.write_row({a.artist_id, a.name,
                         a.birth_year ? std::to_string(*a.birth_year) : std::string(),
                         std::string(to_string(a.gender))});
        }
    }
    {
        CsvWriter w((fs::path(out_dir) / "clean_exhibitions.csv").string(),
                    {"artist_id", "institution_id", "date", "institution_type", "country"}, meta);
        for (const auto& e : corpus.exhibitions) {
            w.write_row({e.artist_id, e.institution_id, e.date.to_iso(),
                         std::string(to_string(e.institution_type)), e.country});
        }
    }
    {
        CsvWriter w((fs::path(out_dir) / "clean_auctions.csv").string(),
                    {"artist_id", "date", "price_usd2013", "normalized_price"}, meta);
        for (const auto& a : corpus.auctions) {
            w.write_row({a.artist_id, a.date.to_iso(), format_double(a.raw_price),
                         format_double(a.normalized_price)});
        }
    }
}

CleanCorpus load_clean_corpus(const std::string& out_dir) {
    namespace fs = std::filesystem;
    const auto artists_path = (fs::path(out_dir) / "clean_artists.csv").string();
    if (!fs::exists(artists_path)) {
        throw DataError("missing artifact " + artists_path + "; run `artequity ingest` (or `simulate` + `ingest`) first");
    }
    CleanCorpus corpus;
    std::vector<std::string> fields;
    std::size_t row = 0;
    {
        CsvReader r(artists_path);
        r.require_header({"artist_id", "name", "birth_year", "gender"}, "clean_artists");
        while (r.next(fields, row)) {
            CleanArtist a;
            a.artist_id = fields[0];
            a.name = fields[1];
            if (!fields[2].empty()) a.birth_year = std::stoi(fields[2]);
            a.gender = *gender_from_string(fields[3]);
            corpus.artists.push_back(std::move(a));
        }
    }
    {
        CsvReader r((fs::path(out_dir) / "clean_exhibitions.csv").string());
        r.require_header({"artist_id", "institution_id", "date", "institution_type", "country"},
                         "clean_exhibitions");
        while (r.next(fields, row)) {
            ExhibitionEvent e;
            e.artist_id = fields[0];
            e.institution_id = fields[1];
            e.date = *Date::parse_iso(fields[2]);
            e.institution_type = *institution_type_from_string(fields[3]);
            e.country = fields[4];
            corpus.exhibitions.push_back(std::move(e));
        }
    }
    {
        CsvReader r((fs::path(out_dir) / "clean_auctions.csv").string());
        r.require_header({"artist_id", "date", "price_usd2013", "normalized_price"},
                         "clean_auctions");
        while (r.next(fields, row)) {
            AuctionRecord a;
            a.artist_id = fields[0];
            a.date = *Date::parse_iso(fields[1]);
            a.raw_price = std::stod(fields[2]);
            a.normalized_price = std::stod(fields[3]);
            corpus.auctions.push_back(std::move(a));
        }
    }
    std::size_t women = 0, men = 0;
    for (const auto& a : corpus.artists) (a.gender == Gender::woman ? women : men) += 1;
    corpus.women_fraction = women_fraction(women, men);
    return corpus;
}

} // namespace artequity::corpus
