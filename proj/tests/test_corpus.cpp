#include "doctest.h"

#include <cmath>
#include <map>

#include "artequity/corpus.hpp"
#include "artequity/synth.hpp"
#include "helpers.hpp"

using namespace artequity;
using namespace artequity::corpus;
using testutil::TempDir;
using testutil::write_file;

namespace {

const char* kArtistHeader =
    "artist_id,name,birth_year,curated_gender,inferred_gender,inferred_probability\n";
const char* kExhibitionHeader = "artist_id,institution_id,date,institution_type,country\n";
const char* kAuctionHeader = "artist_id,date,price_usd2013\n";

struct Files {
    TempDir dir{"corpus"};
    std::string artists, exhibitions, auctions;

    Files(const std::string& artist_rows, const std::string& exhibition_rows,
          const std::string& auction_rows) {
        artists = dir.file("artists.csv");
        exhibitions = dir.file("exhibitions.csv");
        auctions = dir.file("auctions.csv");
        write_file(artists, kArtistHeader + artist_rows);
        write_file(exhibitions, kExhibitionHeader + exhibition_rows);
        write_file(auctions, kAuctionHeader + auction_rows);
    }
};

} // namespace

TEST_CASE("ingest parses a small valid corpus with no rejects") {
    Files f("A1,Alice,1980,woman,,\n"
            "A2,Bob,1975,man,,\n"
            "A3,Chris,,,man,0.92\n",
            "A1,I1,2001-05-10,museum,US\n"
            "A2,I1,2002-03-01,museum,US\n",
            "A1,2003-01-02,1500.0\n");
    const auto raw = ingest(f.artists, f.exhibitions, f.auctions);
    CHECK(raw.artists.size() == 3);
    CHECK(raw.exhibitions.size() == 2);
    CHECK(raw.auctions.size() == 1);
    CHECK(raw.rejects.empty());
    CHECK(raw.artists[2].inferred_probability == doctest::Approx(0.92));
}

TEST_CASE("unparseable dates land in the rejects report with row and reason") {
    Files f("A1,Alice,1980,woman,,\n",
            "A1,I1,2001-13-40,museum,US\n"
            "A1,I1,not-a-date,museum,US\n"
            "A1,I1,2001-02-29,museum,US\n", // 2001 is not a leap year
            "");
    const auto raw = ingest(f.artists, f.exhibitions, f.auctions);
    CHECK(raw.exhibitions.empty());
    REQUIRE(raw.rejects.size() == 3);
    CHECK(raw.rejects[0].file == "exhibitions");
    CHECK(raw.rejects[0].row == 1);
    CHECK(raw.rejects[1].row == 2);
    CHECK(raw.rejects[0].reason.find("date") != std::string::npos);
}

TEST_CASE("empty exhibition file with a valid header is not an error") {
    Files f("A1,Alice,1980,woman,,\n", "", "");
    const auto raw = ingest(f.artists, f.exhibitions, f.auctions);
    CHECK(raw.exhibitions.empty());
    CHECK(raw.rejects.empty());
}

TEST_CASE("missing file, schema mismatch, duplicate artist_id are hard errors") {
    Files f("A1,Alice,1980,woman,,\n", "", "");
    CHECK_THROWS_AS(ingest(f.dir.file("nope.csv"), f.exhibitions, f.auctions), DataError);

    write_file(f.artists, "artist_id,name\nA1,Alice\n");
    CHECK_THROWS_AS(ingest(f.artists, f.exhibitions, f.auctions), DataError);

    write_file(f.artists, std::string(kArtistHeader) + "A1,Alice,1980,woman,,\nA1,Alice,1980,woman,,\n");
    CHECK_THROWS_AS(ingest(f.artists, f.exhibitions, f.auctions), DataError);
}

TEST_CASE("rows referencing unknown artists are rejected, not dropped silently") {
    Files f("A1,Alice,1980,woman,,\n", "GHOST,I1,2001-05-10,museum,US\n",
            "GHOST,2003-01-02,100\n");
    const auto raw = ingest(f.artists, f.exhibitions, f.auctions);
    REQUIRE(raw.rejects.size() == 2);
    CHECK(raw.rejects[0].reason.find("unknown artist_id") != std::string::npos);
}

TEST_CASE("resolve_gender: curated wins, threshold gates inference") {
    ArtistRecord rec;
    rec.curated_gender = Gender::woman;
    rec.inferred_gender = Gender::man;
    rec.inferred_probability = 0.99;
    CHECK(resolve_gender(rec, 0.6) == ResolvedGender::woman);

    rec = {};
    rec.inferred_gender = Gender::man;
    rec.inferred_probability = 0.59;
    CHECK(resolve_gender(rec, 0.6) == ResolvedGender::excluded);
    rec.inferred_probability = 0.60;
    CHECK(resolve_gender(rec, 0.6) == ResolvedGender::man);

    rec = {};
    CHECK(resolve_gender(rec, 0.6) == ResolvedGender::excluded);
}

TEST_CASE("resolve_gender is threshold-monotone: raising the threshold never resolves more") {
    synth::SplitMix64 rng(11);
    for (int i = 0; i < 500; ++i) {
        ArtistRecord rec;
        rec.inferred_gender = rng.next_double() < 0.5 ? Gender::man : Gender::woman;
        rec.inferred_probability = rng.next_double();
        const double t1 = 0.501 + 0.499 * rng.next_double();
        const double t2 = t1 + (1.0 - t1) * rng.next_double();
        const auto low = resolve_gender(rec, t1);
        const auto high = resolve_gender(rec, t2);
        if (low == ResolvedGender::excluded) CHECK(high == ResolvedGender::excluded);
        CHECK(resolve_gender(rec, t1) == low); // deterministic
    }
}

namespace {

FilterParams default_params() {
    return {};
}

RawCorpus small_raw() {
    RawCorpus raw;
    auto add_artist = [&](std::string id, int birth, Gender g) {
        ArtistRecord a;
        a.artist_id = std::move(id);
        a.birth_year = birth;
        a.curated_gender = g;
        raw.artists.push_back(std::move(a));
        ++raw.artist_rows_raw;
    };
    add_artist("A1", 1970, Gender::woman); // first show 1985 -> age 15, excluded
    add_artist("A2", 1965, Gender::man);   // first show 1989 -> before 1990, excluded
    add_artist("A3", 1972, Gender::woman); // fine
    add_artist("A4", 1930, Gender::man);   // first show 1995 -> age 65 > 50, excluded
    auto add_event = [&](std::string artist, std::string inst, int y) {
        raw.exhibitions.push_back(testutil::event(std::move(artist), std::move(inst), y));
        ++raw.exhibition_rows_raw;
    };
    add_event("A1", "I1", 1985);
    add_event("A1", "I1", 1995);
    add_event("A2", "I1", 1989);
    add_event("A2", "I2", 1995);
    add_event("A3", "I1", 1995);
    add_event("A3", "I2", 1997);
    add_event("A4", "I1", 1995);
    return raw;
}

} // namespace

TEST_CASE("career filters: age and start-year rules") {
    const auto clean = apply_career_filters(small_raw(), default_params());
    REQUIRE(clean.artists.size() == 1);
    CHECK(clean.artists[0].artist_id == "A3");
    CHECK(clean.exhibitions.size() == 2);
    CHECK(clean.stats.artists_age_excluded == 2);       // A1 (15), A4 (65)
    CHECK(clean.stats.artists_start_year_excluded == 1); // A2
    CHECK(clean.women_fraction == doctest::Approx(1.0));
}

TEST_CASE("missing birth_year bypasses the age filters but not the start-year filter") {
    RawCorpus raw;
    ArtistRecord a;
    a.artist_id = "A1";
    a.curated_gender = Gender::man;
    raw.artists.push_back(a);
    raw.artist_rows_raw = 1;
    raw.exhibitions.push_back(testutil::event("A1", "I1", 1989));
    raw.exhibition_rows_raw = 1;
    auto clean = apply_career_filters(raw, default_params());
    CHECK(clean.artists.empty());
    CHECK(clean.stats.artists_start_year_excluded == 1);

    raw.exhibitions[0].date.year = 1995;
    clean = apply_career_filters(raw, default_params());
    CHECK(clean.artists.size() == 1);
}

TEST_CASE("a start year beyond all data yields an empty corpus, flagged") {
    FilterParams params;
    params.start_year = 3000;
    const auto clean = apply_career_filters(small_raw(), params);
    CHECK(clean.artists.empty());
    CHECK(clean.empty_warning);
    CHECK(clean.stats.artists_start_year_excluded == 2); // A1/A4 hit the age filter first
    CHECK(clean.stats.artists_age_excluded == 2);
}

TEST_CASE("paper population fixture: 24,030 of 65,768 is 36.54%") {
    const double wf = women_fraction(24030, 41738);
    CHECK(std::fabs(wf - 0.3654) < 1e-4);
    CHECK(wf == doctest::Approx(24030.0 / 65768.0).epsilon(1e-12));
}

TEST_CASE("career filtering is idempotent") {
    const auto clean = apply_career_filters(small_raw(), default_params());
    RawCorpus again;
    for (const auto& a : clean.artists) {
        ArtistRecord rec;
        rec.artist_id = a.artist_id;
        rec.name = a.name;
        rec.birth_year = a.birth_year;
        rec.curated_gender = a.gender;
        again.artists.push_back(std::move(rec));
    }
    again.exhibitions = clean.exhibitions;
    again.auctions = clean.auctions;
    const auto twice = apply_career_filters(again, default_params());
    REQUIRE(twice.artists.size() == clean.artists.size());
    for (std::size_t i = 0; i < clean.artists.size(); ++i) {
        CHECK(twice.artists[i].artist_id == clean.artists[i].artist_id);
    }
    REQUIRE(twice.exhibitions.size() == clean.exhibitions.size());
    CHECK(twice.women_fraction == clean.women_fraction);
    CHECK(twice.stats.artists_filtered() == 0);
    CHECK(twice.stats.exhibitions_filtered() == 0);
}

TEST_CASE("count conservation: raw = clean + rejected + filtered, per file") {
    Files f("A1,Alice,1980,woman,,\n"
            "A2,Bob,1975,man,,\n"
            "A3,Eve,1990,woman,,\n"      // first show at 17: age-excluded
            "A4,Dan,,man,0.4,\n"          // malformed: probability w/o gender is fine? gender w/o prob
            "A5,Pat,,,man,0.55\n",        // below threshold: gender-excluded
            "A1,I1,2001-05-10,museum,US\n"
            "A1,I1,2001-05-10,museum,US\n" // duplicate -> deduplicated
            "A2,I1,2002-03-01,gallery,US\n"
            "A3,I1,2007-03-01,gallery,US\n"
            "A5,I1,2002-03-01,gallery,US\n"
            "BAD,I1,2002-03-01,gallery,US\n", // unknown artist -> reject
            "A1,2003-01-02,1500.0\n"
            "A1,1997-01-02,800.0\n"          // pre-adulthood (age 17) -> filtered
            "A2,2005-06-07,-5\n");           // nonpositive price -> reject
    const auto raw = ingest(f.artists, f.exhibitions, f.auctions);
    const auto clean = apply_career_filters(raw, default_params());

    // artists: A4 is a reject (curated/inferred invariant), A5 gender-excluded,
    // A3 age-excluded, A1+A2 clean
    std::size_t artist_rejects = 0, exhibition_rejects = 0, auction_rejects = 0;
    for (const auto& r : raw.rejects) {
        if (r.file == "artists") ++artist_rejects;
        if (r.file == "exhibitions") ++exhibition_rejects;
        if (r.file == "auctions") ++auction_rejects;
    }
    CHECK(raw.artist_rows_raw ==
          clean.artists.size() + artist_rejects + clean.stats.artists_filtered());
    CHECK(raw.exhibition_rows_raw ==
          clean.exhibitions.size() + exhibition_rejects + clean.stats.exhibitions_filtered());
    CHECK(raw.auction_rows_raw ==
          clean.auctions.size() + auction_rejects + clean.stats.auctions_filtered());
    CHECK(clean.stats.exhibitions_deduplicated == 1);
    CHECK(clean.stats.auctions_pre_adulthood == 1);
}

TEST_CASE("normalize_prices: two-sale years, singleton years, per-year mean invariant") {
    std::vector<AuctionRecord> recs;
    recs.push_back({"A1", {2005, 1, 1}, 100.0, 0.0});
    recs.push_back({"A2", {2005, 7, 1}, 300.0, 0.0});
    recs.push_back({"A1", {1999, 3, 3}, 42.0, 0.0});
    normalize_prices(recs);
    CHECK(recs[0].normalized_price == doctest::Approx(0.5));
    CHECK(recs[1].normalized_price == doctest::Approx(1.5));
    CHECK(recs[2].normalized_price == doctest::Approx(1.0));
}

TEST_CASE("normalize_prices: per-year normalized mean is 1 within 1e-9 on log-normal data") {
    synth::SplitMix64 rng(99);
    std::vector<AuctionRecord> recs;
    for (int year = 2000; year < 2003; ++year) {
        for (int i = 0; i < 1000; ++i) {
            AuctionRecord r;
            r.artist_id = "A1";
            r.date = {year, 1 + static_cast<int>(rng.next_below(12)), 15};
            r.raw_price = std::exp(5.0 + 1.2 * rng.next_normal());
            recs.push_back(r);
        }
    }
    normalize_prices(recs);
    // independent recomputation of the per-year means
    std::map<int, std::pair<double, int>> sums;
    for (const auto& r : recs) {
        sums[r.date.year].first += r.normalized_price;
        sums[r.date.year].second += 1;
    }
    for (const auto& [year, sc] : sums) {
        CHECK(std::fabs(sc.first / sc.second - 1.0) < 1e-9);
    }
}

TEST_CASE("clean corpus round-trips through its artifact files") {
    TempDir dir("roundtrip");
    auto clean = apply_career_filters(small_raw(), default_params());
    clean.auctions.push_back({"A3", {2000, 1, 1}, 50.0, 0.0});
    normalize_prices(clean.auctions);
    write_clean_corpus(dir.str(), clean, "digest");
    const auto loaded = load_clean_corpus(dir.str());
    CHECK(loaded.artists.size() == clean.artists.size());
    CHECK(loaded.exhibitions.size() == clean.exhibitions.size());
    CHECK(loaded.auctions.size() == clean.auctions.size());
    CHECK(loaded.women_fraction == doctest::Approx(clean.women_fraction));
}
