#include "doctest.h"

#include <cmath>
#include <map>

#include "artequity/careers.hpp"
#include "artequity/synth.hpp"
#include "helpers.hpp"

using namespace artequity;
using namespace artequity::careers;
using testutil::artist;
using testutil::event;
using testutil::make_corpus;

namespace {

net::PrestigeTable table_of(const std::map<std::string, double>& scores) {
    net::PrestigeTable t;
    std::vector<double> values;
    for (const auto& [id, s] : scores) {
        t.institution_ids.push_back(id);
        t.score.push_back(s);
        values.push_back(s);
    }
    const auto cuts = net::percentile_cuts(values);
    for (double s : t.score) t.bin.push_back(cuts.bin_of(s));
    return t;
}

std::vector<bf::Category> cats(int man, int null, int woman) {
    std::vector<bf::Category> v;
    v.insert(v.end(), man, bf::Category::man_over);
    v.insert(v.end(), null, bf::Category::null_consistent);
    v.insert(v.end(), woman, bf::Category::woman_over);
    return v;
}

} // namespace

TEST_CASE("career features: length, rate, mean venue prestige") {
    std::vector<corpus::ExhibitionEvent> events;
    for (int y = 2000; y <= 2009; ++y) events.push_back(event("A", "I1", y));
    events.push_back(event("B", "I1", 2005));
    events.push_back(event("C", "I1", 2003));
    events.push_back(event("C", "I2", 2004));
    const auto corpus = make_corpus({artist("A", Gender::man), artist("B", Gender::woman),
                                     artist("C", Gender::woman)},
                                    events);
    const auto prestige = table_of({{"I1", 0.2}, {"I2", 0.8}});
    const auto features = career_features(corpus, prestige);
    REQUIRE(features.size() == 3);
    CHECK(features[0].artist_id == "A");
    CHECK(features[0].career_length == 10);
    CHECK(features[0].exhibitions_per_year == doctest::Approx(1.0));
    CHECK(features[1].career_length == 1);
    CHECK(features[1].exhibitions_per_year == doctest::Approx(1.0));
    CHECK(*features[2].artist_prestige == doctest::Approx(0.5));
}

TEST_CASE("artists at venues without prestige scores have no artist_prestige") {
    const auto corpus = make_corpus({artist("A", Gender::man)}, {event("A", "UNKNOWN", 2001)});
    const auto features = career_features(corpus, table_of({{"I1", 1.0}}));
    CHECK(!features[0].artist_prestige);
    CHECK(!features[0].prestige_bin);
}

TEST_CASE("worked co-exhibition example: shares (6,4,2)/12 against baseline (.4,.4,.2)") {
    Baseline base{{0.40, 0.40, 0.20}};
    const auto profile = co_exhibition_gender(cats(6, 4, 2), base, 10);
    CHECK(profile.rho[0] == doctest::Approx(0.5));
    CHECK(profile.rho[1] == doctest::Approx(4.0 / 12.0));
    CHECK(profile.rho[2] == doctest::Approx(2.0 / 12.0));
    // relative differences: +0.25, -1/6, -1/6
    CHECK(profile.co_gender == CoGender::co_man);
}

TEST_CASE("exclusively woman-overrepresented venues give co_woman") {
    Baseline base{{0.5, 0.3, 0.2}};
    const auto profile = co_exhibition_gender(cats(0, 0, 15), base, 10);
    CHECK(profile.co_gender == CoGender::co_woman);
}

TEST_CASE("shares exactly at the baseline tie out to co_neutral") {
    Baseline base{{0.5, 0.25, 0.25}};
    const auto profile = co_exhibition_gender(cats(6, 3, 3), base, 10);
    CHECK(profile.co_gender == CoGender::co_neutral);
}

TEST_CASE("a zero-baseline category is excluded from the argmax") {
    Baseline base{{0.6, 0.4, 0.0}};
    // woman_over dominates the history but has no baseline mass
    const auto profile = co_exhibition_gender(cats(2, 4, 6), base, 10);
    CHECK(profile.co_gender == CoGender::co_neutral);
}

TEST_CASE("the exhibition threshold is strict: 10 is unassigned, 11 is assigned") {
    Baseline base{{0.4, 0.4, 0.2}};
    const auto at = co_exhibition_gender(cats(5, 3, 2), base, 10);
    CHECK(at.total_exhibitions == 10);
    CHECK(at.co_gender == CoGender::unassigned);
    CHECK(at.reason.find("10") != std::string::npos);
    const auto above = co_exhibition_gender(cats(6, 3, 2), base, 10);
    CHECK(above.co_gender == CoGender::co_man);
}

TEST_CASE("zero categorisable exhibitions is unassigned with a reason") {
    Baseline base{{0.4, 0.4, 0.2}};
    const std::vector<bf::Category> unc(12, bf::Category::uncategorised);
    const auto profile = co_exhibition_gender(unc, base, 10);
    CHECK(profile.co_gender == CoGender::unassigned);
    CHECK(profile.reason.find("categorisable") != std::string::npos);
}

TEST_CASE("co-exhibition gender does not depend on exhibition order") {
    Baseline base{{0.4, 0.4, 0.2}};
    auto venues = cats(6, 4, 2);
    const auto label = co_exhibition_gender(venues, base, 10).co_gender;
    synth::SplitMix64 rng(3);
    for (int i = 0; i < 20; ++i) {
        rng.shuffle(venues);
        CHECK(co_exhibition_gender(venues, base, 10).co_gender == label);
    }
}

TEST_CASE("argmax of relative differences: label permutations permute the winner") {
    const std::array<double, 3> rho = {0.5, 0.3, 0.2};
    const std::array<double, 3> base = {0.3, 0.4, 0.3};
    const int best = rel_diff_argmax(rho, base);
    REQUIRE(best == 0);
    // swap categories 0 and 2 in both vectors: the winner follows the swap
    const std::array<double, 3> rho_s = {rho[2], rho[1], rho[0]};
    const std::array<double, 3> base_s = {base[2], base[1], base[0]};
    CHECK(rel_diff_argmax(rho_s, base_s) == 2);
}

TEST_CASE("argmax is invariant to adding a common constant to every relative difference") {
    // realized by scaling rho: rel diffs (rho*c - b)/b = c*(rho/b) - 1 keep order
    synth::SplitMix64 rng(8);
    for (int i = 0; i < 200; ++i) {
        std::array<double, 3> rho{}, base{};
        double rs = 0, bs = 0;
        for (int j = 0; j < 3; ++j) {
            rho[static_cast<std::size_t>(j)] = 0.05 + rng.next_double();
            base[static_cast<std::size_t>(j)] = 0.05 + rng.next_double();
            rs += rho[static_cast<std::size_t>(j)];
            bs += base[static_cast<std::size_t>(j)];
        }
        for (int j = 0; j < 3; ++j) {
            rho[static_cast<std::size_t>(j)] /= rs;
            base[static_cast<std::size_t>(j)] /= bs;
        }
        const int best = rel_diff_argmax(rho, base);
        // adding c to every relative difference leaves the argmax unchanged
        std::array<double, 3> shifted{};
        const double c = rng.next_double() * 2.0 - 1.0;
        for (int j = 0; j < 3; ++j) {
            const auto js = static_cast<std::size_t>(j);
            // solve for rho' with rel-diff' = rel-diff + c
            shifted[js] = rho[js] + c * base[js];
        }
        CHECK(rel_diff_argmax(shifted, base) == best);
    }
}

namespace {

struct LockInWorld {
    corpus::CleanCorpus corpus;
    std::map<std::string, bf::Category> categories;
    Baseline baseline;
    net::PrestigeTable prestige;
};

// Each artist exhibits at venues of exactly one category, forever.
LockInWorld segregated_world() {
    LockInWorld world;
    std::vector<corpus::CleanArtist> artists;
    std::vector<corpus::ExhibitionEvent> events;
    const char* venues[3] = {"MAN", "NEU", "WOM"};
    const bf::Category categories[3] = {bf::Category::man_over, bf::Category::null_consistent,
                                        bf::Category::woman_over};
    for (int c = 0; c < 3; ++c) {
        world.categories[venues[c]] = categories[c];
        for (int a = 0; a < 10; ++a) {
            const std::string id = std::string(venues[c]) + "_artist" + std::to_string(a);
            artists.push_back(artist(id, c == 2 ? Gender::woman : Gender::man));
            for (int e = 0; e < 12; ++e) {
                events.push_back(event(id, venues[c], 2000 + e));
            }
        }
    }
    world.corpus = make_corpus(std::move(artists), std::move(events));
    world.baseline = category_baseline(world.corpus, world.categories);
    world.prestige = table_of({{"MAN", 0.9}, {"NEU", 0.5}, {"WOM", 0.1}});
    return world;
}

} // namespace

TEST_CASE("perfect segregation produces the identity lock-in matrix") {
    const auto world = segregated_world();
    const auto result = lock_in_matrix(world.corpus, world.categories, world.baseline,
                                       world.prestige, bf::CriterionKind::gender_neutral, 5);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(result.global.probability[r][c] == doctest::Approx(r == c ? 1.0 : 0.0));
        }
        CHECK(result.global.row_totals[r] == 10);
    }
    CHECK(result.global.artists_included == 30);
}

TEST_CASE("lock-in rows sum to one and per-bin matrices aggregate to the global one") {
    const auto world = segregated_world();
    const auto result = lock_in_matrix(world.corpus, world.categories, world.baseline,
                                       world.prestige, bf::CriterionKind::gender_neutral, 5);
    for (std::size_t r = 0; r < 3; ++r) {
        if (result.global.row_totals[r] == 0) continue;
        double sum = 0.0;
        for (std::size_t c = 0; c < 3; ++c) sum += result.global.probability[r][c];
        CHECK(std::fabs(sum - 1.0) < 1e-9);
    }
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            long long agg = 0;
            for (const auto& [bin, m] : result.by_prestige_bin) agg += m.counts[r][c];
            CHECK(agg == result.global.counts[r][c]);
        }
    }
}

TEST_CASE("uniformly random venues give near-independent early/late labels") {
    synth::SplitMix64 rng(404);
    std::vector<corpus::CleanArtist> artists;
    std::vector<corpus::ExhibitionEvent> events;
    std::map<std::string, bf::Category> categories = {
        {"MAN", bf::Category::man_over},
        {"NEU", bf::Category::null_consistent},
        {"WOM", bf::Category::woman_over}};
    const char* venues[3] = {"MAN", "NEU", "WOM"};
    const int n_artists = 4000;
    for (int a = 0; a < n_artists; ++a) {
        const std::string id = "A" + std::to_string(a);
        artists.push_back(artist(id, Gender::man));
        for (int e = 0; e < 10; ++e) {
            events.push_back(event(id, venues[rng.next_below(3)], 2000 + e));
        }
    }
    const auto corpus = make_corpus(std::move(artists), std::move(events));
    const auto baseline = category_baseline(corpus, categories);
    const auto prestige = table_of({{"MAN", 0.9}, {"NEU", 0.5}, {"WOM", 0.1}});
    const auto result = lock_in_matrix(corpus, categories, baseline, prestige,
                                       bf::CriterionKind::gender_neutral, 5);

    // column marginals over all included artists
    std::array<double, 3> marginal = {0, 0, 0};
    long long total = 0;
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            marginal[c] += static_cast<double>(result.global.counts[r][c]);
            total += result.global.counts[r][c];
        }
    }
    for (auto& m : marginal) m /= static_cast<double>(total);
    for (std::size_t r = 0; r < 3; ++r) {
        const auto n = static_cast<double>(result.global.row_totals[r]);
        REQUIRE(n > 100);
        for (std::size_t c = 0; c < 3; ++c) {
            const double p = marginal[c];
            const double sigma = std::sqrt(p * (1.0 - p) / n);
            CHECK(std::fabs(result.global.probability[r][c] - p) <= 3.0 * sigma + 1e-12);
        }
    }
}

TEST_CASE("planted venue preferences are recovered for artists with 50+ exhibitions") {
    synth::SplitMix64 rng(77);
    Baseline base{{1.0 / 3, 1.0 / 3, 1.0 / 3}};
    const CoGender expected[3] = {CoGender::co_man, CoGender::co_neutral, CoGender::co_woman};
    int agree = 0, total = 0;
    for (int a = 0; a < 600; ++a) {
        const int preferred = a % 3;
        std::vector<bf::Category> venues;
        for (int e = 0; e < 60; ++e) {
            int c;
            if (rng.next_double() < 0.75) {
                c = preferred;
            } else {
                c = (preferred + 1 + static_cast<int>(rng.next_below(2))) % 3;
            }
            venues.push_back(kVenueCategories[static_cast<std::size_t>(c)]);
        }
        const auto profile = co_exhibition_gender(venues, base, 10);
        ++total;
        if (profile.co_gender == expected[preferred]) ++agree;
    }
    CHECK(static_cast<double>(agree) >= 0.95 * static_cast<double>(total));
}

TEST_CASE("careers table round-trips through careers.csv") {
    testutil::TempDir dir("careers");
    const auto world = segregated_world();
    ArtistTable table;
    table.features = career_features(world.corpus, world.prestige);
    for (const auto& f : table.features) {
        std::vector<corpus::ExhibitionEvent> events;
        for (const auto& ev : world.corpus.exhibitions) {
            if (ev.artist_id == f.artist_id) events.push_back(ev);
        }
        table.co_gender_neutral.push_back(
            co_exhibition_gender(f.artist_id, events, world.categories, world.baseline, 10));
        table.co_gender_balanced.push_back(table.co_gender_neutral.back());
    }
    write_careers_csv(dir.file("careers.csv"), table, "d");
    const auto loaded = load_careers_csv(dir.file("careers.csv"));
    REQUIRE(loaded.features.size() == table.features.size());
    for (std::size_t i = 0; i < loaded.features.size(); ++i) {
        CHECK(loaded.features[i].artist_id == table.features[i].artist_id);
        CHECK(loaded.features[i].career_length == table.features[i].career_length);
        CHECK(loaded.co_gender_neutral[i].co_gender == table.co_gender_neutral[i].co_gender);
    }
}
