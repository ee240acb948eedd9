#include "artequity/careers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "artequity/csv.hpp"

namespace artequity::careers {

namespace {

// Exhibitions per artist, time-ordered with the same tie-break as the
// network build.
std::map<std::string, std::vector<const corpus::ExhibitionEvent*>>
ordered_events_by_artist(const corpus::CleanCorpus& corpus) {
    std::map<std::string, std::vector<const corpus::ExhibitionEvent*>> by_artist;
    for (const auto& ev : corpus.exhibitions) by_artist[ev.artist_id].push_back(&ev);
    for (auto& [id, events] : by_artist) {
        std::sort(events.begin(), events.end(), [](const auto* a, const auto* b) {
            if (a->date != b->date) return a->date < b->date;
            return a->institution_id < b->institution_id;
        });
    }
    return by_artist;
}

} // namespace

std::vector<CareerFeatures> career_features(const corpus::CleanCorpus& corpus,
                                            const net::PrestigeTable& prestige) {
    std::unordered_map<std::string, Gender> gender_of;
    for (const auto& a : corpus.artists) gender_of.emplace(a.artist_id, a.gender);

    const auto by_artist = ordered_events_by_artist(corpus);
    std::vector<CareerFeatures> out;
    out.reserve(by_artist.size());
    for (const auto& [artist_id, events] : by_artist) {
        CareerFeatures f;
        f.artist_id = artist_id;
        f.gender = gender_of.at(artist_id);
        f.exhibition_count = static_cast<long long>(events.size());
        f.career_length = events.back()->date.year - events.front()->date.year + 1;
        f.exhibitions_per_year =
            static_cast<double>(f.exhibition_count) / static_cast<double>(f.career_length);
        double prestige_sum = 0.0;
        long long scored = 0;
        for (const auto* ev : events) {
            if (auto s = prestige.score_of(ev->institution_id)) {
                prestige_sum += *s;
                ++scored;
            }
        }
        if (scored > 0) f.artist_prestige = prestige_sum / static_cast<double>(scored);
        out.push_back(std::move(f));
    }

    // Artist prestige bins use the same 40/70 percentile convention as
    // institutions, over the artists that have a prestige value.
    std::vector<double> scores;
    for (const auto& f : out) {
        if (f.artist_prestige) scores.push_back(*f.artist_prestige);
    }
    if (!scores.empty()) {
        const net::PercentileCuts cuts = net::percentile_cuts(scores);
        for (auto& f : out) {
            if (f.artist_prestige) f.prestige_bin = cuts.bin_of(*f.artist_prestige);
        }
    }
    return out;
}

std::string_view to_string(CoGender g) {
    switch (g) {
    case CoGender::co_man: return "co_man";
    case CoGender::co_neutral: return "co_neutral";
    case CoGender::co_woman: return "co_woman";
    case CoGender::unassigned: return "unassigned";
    }
    return "unassigned";
}

Baseline category_baseline(const corpus::CleanCorpus& corpus,
                           const std::map<std::string, bf::Category>& category_of,
                           BaselineWeighting weighting) {
    Baseline base;
    double total = 0.0;
    if (weighting == BaselineWeighting::exhibition) {
        for (const auto& ev : corpus.exhibitions) {
            auto it = category_of.find(ev.institution_id);
            if (it == category_of.end()) continue;
            for (std::size_t i = 0; i < kVenueCategories.size(); ++i) {
                if (it->second == kVenueCategories[i]) {
                    base.share[i] += 1.0;
                    total += 1.0;
                }
            }
        }
    } else {
        for (const auto& [id, cat] : category_of) {
            for (std::size_t i = 0; i < kVenueCategories.size(); ++i) {
                if (cat == kVenueCategories[i]) {
                    base.share[i] += 1.0;
                    total += 1.0;
                }
            }
        }
    }
    if (total > 0.0) {
        for (auto& s : base.share) s /= total;
    }
    return base;
}

int rel_diff_argmax(const std::array<double, 3>& rho, const std::array<double, 3>& base) {
    int best = -1;
    double best_value = 0.0;
    bool tie = false;
    for (int i = 0; i < 3; ++i) {
        if (base[static_cast<std::size_t>(i)] <= 0.0) continue; // relative difference undefined
        const double value = (rho[static_cast<std::size_t>(i)] -
                              base[static_cast<std::size_t>(i)]) /
                             base[static_cast<std::size_t>(i)];
        if (best < 0 || value > best_value) {
            best = i;
            best_value = value;
            tie = false;
        } else if (value == best_value) {
            tie = true;
        }
    }
    return tie ? -1 : best;
}

CoExhibitionProfile co_exhibition_gender(const std::vector<bf::Category>& venue_categories,
                                         const Baseline& baseline, long long min_exhibitions) {
    CoExhibitionProfile profile;
    profile.rho_baseline = baseline.share;
    profile.total_exhibitions = static_cast<long long>(venue_categories.size());

    std::array<long long, 3> counts = {0, 0, 0};
    for (const auto cat : venue_categories) {
        for (std::size_t i = 0; i < kVenueCategories.size(); ++i) {
            if (cat == kVenueCategories[i]) {
                ++counts[i];
                ++profile.categorisable_exhibitions;
            }
        }
    }

    if (profile.total_exhibitions <= min_exhibitions) {
        profile.co_gender = CoGender::unassigned;
        profile.reason = "at most " + std::to_string(min_exhibitions) + " exhibitions";
        return profile;
    }
    if (profile.categorisable_exhibitions == 0) {
        profile.co_gender = CoGender::unassigned;
        profile.reason = "no exhibitions at categorisable institutions";
        return profile;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        profile.rho[i] = static_cast<double>(counts[i]) /
                         static_cast<double>(profile.categorisable_exhibitions);
    }

    const int best = rel_diff_argmax(profile.rho, profile.rho_baseline);
    if (best < 0) {
        // A tie means no category is distinctly overrepresented.
        profile.co_gender = CoGender::co_neutral;
        return profile;
    }
    switch (kVenueCategories[static_cast<std::size_t>(best)]) {
    case bf::Category::man_over: profile.co_gender = CoGender::co_man; break;
    case bf::Category::null_consistent: profile.co_gender = CoGender::co_neutral; break;
    case bf::Category::woman_over: profile.co_gender = CoGender::co_woman; break;
    default: profile.co_gender = CoGender::unassigned; break;
    }
    return profile;
}

namespace {

std::vector<bf::Category> categories_of_events(
    const std::vector<const corpus::ExhibitionEvent*>& events,
    const std::map<std::string, bf::Category>& category_of) {
    std::vector<bf::Category> cats;
    cats.reserve(events.size());
    for (const auto* ev : events) {
        auto it = category_of.find(ev->institution_id);
        cats.push_back(it == category_of.end() ? bf::Category::uncategorised : it->second);
    }
    return cats;
}

} // namespace

CoExhibitionProfile co_exhibition_gender(const std::string& artist_id,
                                         const std::vector<corpus::ExhibitionEvent>& exhibitions,
                                         const std::map<std::string, bf::Category>& category_of,
                                         const Baseline& baseline, long long min_exhibitions) {
    std::vector<bf::Category> cats;
    cats.reserve(exhibitions.size());
    for (const auto& ev : exhibitions) {
        auto it = category_of.find(ev.institution_id);
        cats.push_back(it == category_of.end() ? bf::Category::uncategorised : it->second);
    }
    CoExhibitionProfile profile = co_exhibition_gender(cats, baseline, min_exhibitions);
    profile.artist_id = artist_id;
    return profile;
}

namespace {

int co_gender_index(CoGender g) {
    switch (g) {
    case CoGender::co_man: return 0;
    case CoGender::co_neutral: return 1;
    case CoGender::co_woman: return 2;
    default: return -1;
    }
}

void finalize_matrix(LockInMatrix& m) {
    for (std::size_t r = 0; r < 3; ++r) {
        long long total = 0;
        for (std::size_t c = 0; c < 3; ++c) total += m.counts[r][c];
        m.row_totals[r] = total;
        for (std::size_t c = 0; c < 3; ++c) {
            m.probability[r][c] =
                total > 0 ? static_cast<double>(m.counts[r][c]) / static_cast<double>(total)
                          : 0.0;
        }
    }
}

} // namespace

LockInResult lock_in_matrix(const corpus::CleanCorpus& corpus,
                            const std::map<std::string, bf::Category>& category_of,
                            const Baseline& baseline, const net::PrestigeTable& prestige,
                            bf::CriterionKind criterion, int window) {
    if (window < 1) throw UsageError("lock-in window must be >= 1");
    LockInResult result;
    result.window = window;
    result.criterion = criterion;
    result.by_prestige_bin = {{"low", {}}, {"mid", {}}, {"high", {}}, {"unbinned", {}}};

    const auto features = career_features(corpus, prestige);
    std::unordered_map<std::string, const CareerFeatures*> feature_of;
    for (const auto& f : features) feature_of.emplace(f.artist_id, &f);

    const auto by_artist = ordered_events_by_artist(corpus);
    for (const auto& [artist_id, events] : by_artist) {
        if (static_cast<long long>(events.size()) < 2LL * window) continue;
        auto cats = categories_of_events(events, category_of);
        const std::vector<bf::Category> early(cats.begin(), cats.begin() + window);
        const std::vector<bf::Category> late(cats.end() - window, cats.end());
        // min_exhibitions is waived inside a window: any nonempty window
        // with categorisable venues yields a label.
        const auto early_profile = co_exhibition_gender(early, baseline, 0);
        const auto late_profile = co_exhibition_gender(late, baseline, 0);
        const int r = co_gender_index(early_profile.co_gender);
        const int c = co_gender_index(late_profile.co_gender);
        if (r < 0 || c < 0) {
            ++result.global.artists_window_unassigned;
            continue;
        }
        auto record = [&](LockInMatrix& m) {
            ++m.counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            ++m.artists_included;
        };
        record(result.global);
        const auto* f = feature_of.at(artist_id);
        if (f->prestige_bin) {
            record(result.by_prestige_bin.at(std::string(net::to_string(*f->prestige_bin))));
        } else {
            record(result.by_prestige_bin.at("unbinned"));
        }
    }
    finalize_matrix(result.global);
    for (auto& [name, m] : result.by_prestige_bin) finalize_matrix(m);
    return result;
}

namespace {

CoGender co_gender_from_string(const std::string& s) {
    if (s == "co_man") return CoGender::co_man;
    if (s == "co_neutral") return CoGender::co_neutral;
    if (s == "co_woman") return CoGender::co_woman;
    return CoGender::unassigned;
}

} // namespace

void write_careers_csv(const std::string& path, const ArtistTable& table,
                       const std::string& config_digest) {
    CsvWriter w(path,
                {"artist_id", "gender", "career_length", "exhibitions_per_year",
                 "artist_prestige", "prestige_bin", "co_gender_neutral", "co_gender_balanced"},
                "config_digest=" + config_digest);
    for (std::size_t i = 0; i < table.features.size(); ++i) {
        const auto& f = table.features[i];
        w.write_row({f.artist_id, std::string(to_string(f.gender)),
                     std::to_string(f.career_length), format_double(f.exhibitions_per_year),
                     f.artist_prestige ? format_double(*f.artist_prestige) : std::string(),
                     f.prestige_bin ? std::string(net::to_string(*f.prestige_bin))
                                    : std::string(),
                     std::string(to_string(table.co_gender_neutral[i].co_gender)),
                     std::string(to_string(table.co_gender_balanced[i].co_gender))});
    }
}

ArtistTable load_careers_csv(const std::string& path) {
    CsvReader r(path);
    r.require_header({"artist_id", "gender", "career_length", "exhibitions_per_year",
                      "artist_prestige", "prestige_bin", "co_gender_neutral",
                      "co_gender_balanced"},
                     path);
    ArtistTable table;
    std::vector<std::string> fields;
    std::size_t row = 0;
    while (r.next(fields, row)) {
        CareerFeatures f;
        f.artist_id = fields[0];
        f.gender = *gender_from_string(fields[1]);
        f.career_length = std::stoi(fields[2]);
        f.exhibitions_per_year = std::stod(fields[3]);
        f.exhibition_count = static_cast<long long>(
            std::llround(f.exhibitions_per_year * f.career_length));
        if (!fields[4].empty()) f.artist_prestige = std::stod(fields[4]);
        if (fields[5] == "low") f.prestige_bin = net::PrestigeBin::low;
        else if (fields[5] == "mid") f.prestige_bin = net::PrestigeBin::mid;
        else if (fields[5] == "high") f.prestige_bin = net::PrestigeBin::high;
        table.features.push_back(std::move(f));
        CoExhibitionProfile pn, pb;
        pn.artist_id = fields[0];
        pn.co_gender = co_gender_from_string(fields[6]);
        pb.artist_id = fields[0];
        pb.co_gender = co_gender_from_string(fields[7]);
        table.co_gender_neutral.push_back(std::move(pn));
        table.co_gender_balanced.push_back(std::move(pb));
    }
    return table;
}

namespace {

nlohmann::json matrix_json(const LockInMatrix& m) {
    nlohmann::json j;
    j["labels"] = {"co_man", "co_neutral", "co_woman"};
    j["probability"] = m.probability;
    j["counts"] = m.counts;
    j["row_totals"] = m.row_totals;
    j["artists_included"] = m.artists_included;
    j["artists_window_unassigned"] = m.artists_window_unassigned;
    return j;
}

} // namespace

void write_lockin_json(const std::string& path, const std::vector<LockInResult>& results,
                       const std::string& config_digest) {
    nlohmann::json doc;
    doc["meta"] = {{"config_digest", config_digest}};
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& res : results) {
        nlohmann::json j;
        j["criterion"] = std::string(bf::to_string(res.criterion));
        j["window"] = res.window;
        j["global"] = matrix_json(res.global);
        nlohmann::json bins;
        for (const auto& [name, m] : res.by_prestige_bin) bins[name] = matrix_json(m);
        j["by_prestige_bin"] = bins;
        arr.push_back(j);
    }
    doc["lockin"] = arr;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out << doc.dump(2) << "\n";
}

} // namespace artequity::careers
