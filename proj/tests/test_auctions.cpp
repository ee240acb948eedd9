#include "doctest.h"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "artequity/auctions.hpp"
#include "artequity/corpus.hpp"
#include "artequity/synth.hpp"
#include "helpers.hpp"

using namespace artequity;
using namespace artequity::auctions;
using testutil::artist;
using testutil::event;
using testutil::make_corpus;

TEST_CASE("published counts reproduce the eight reference disparity ratios") {
    struct Row {
        double men, women, expected;
    };
    const Row rows[] = {
        {41738, 24030, 1.74},                      // population
        {662571, 355506, 1.86},                    // exhibitions
        {10179, 3761, 2.71},                       // auction population
        {10179.0 / 41738.0, 3761.0 / 24030.0, 1.56}, // access rates
        {102729, 22953, 4.48},                     // auction records
        {0.7, 0.4, 1.75},                          // mean normalized price
        {10.1, 6.1, 1.66},                         // auctions per auctioned artist
        {9.8e4, 1.3e4, 7.54},                      // total normalized sales
    };
    for (const auto& row : rows) {
        const auto metric = gendered_metric("m", row.men, row.women);
        REQUIRE(metric.ratio);
        CHECK(std::fabs(*metric.ratio - row.expected) <= 0.01);
    }
}

namespace {

// Mirror-symmetric corpus: every man has an identical woman twin.
corpus::CleanCorpus symmetric_corpus() {
    std::vector<corpus::CleanArtist> artists;
    std::vector<corpus::ExhibitionEvent> events;
    std::vector<corpus::AuctionRecord> auctions;
    synth::SplitMix64 rng(55);
    for (int i = 0; i < 40; ++i) {
        const int shows = 2 + static_cast<int>(rng.next_below(8));
        const bool auctioned = rng.next_double() < 0.4;
        const double price = 100.0 * (1.0 + rng.next_double());
        for (const Gender g : {Gender::man, Gender::woman}) {
            const std::string id =
                (g == Gender::man ? "M" : "W") + std::to_string(i);
            artists.push_back(artist(id, g));
            for (int e = 0; e < shows; ++e) {
                events.push_back(event(id, "I" + std::to_string(e % 5), 2000 + e));
            }
            if (auctioned) {
                auctions.push_back({id, Date{2005, 6, 1}, price, 0.0});
            }
        }
    }
    auto corpus = make_corpus(std::move(artists), std::move(events), std::move(auctions));
    corpus::normalize_prices(corpus.auctions);
    return corpus;
}

} // namespace

TEST_CASE("a gender-symmetric corpus yields unit ratios") {
    const auto report = disparity_report(symmetric_corpus());
    for (const auto* metric : report.rows()) {
        REQUIRE(metric->ratio);
        CHECK(*metric->ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("zero women in the corpus reports absent ratios, never a division") {
    const auto corpus = make_corpus({artist("M1", Gender::man)}, {event("M1", "I1", 2001)});
    const auto report = disparity_report(corpus);
    CHECK(!report.population.ratio);
    CHECK(report.population.ratio_reason.find("zero") != std::string::npos);
}

TEST_CASE("total normalized sales are conserved under the gender partition") {
    const auto corpus = symmetric_corpus();
    const auto report = disparity_report(corpus);
    double total = 0.0;
    for (const auto& rec : corpus.auctions) total += rec.normalized_price;
    CHECK(report.total_sales.men + report.total_sales.women ==
          doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("overall access rate is the population-weighted mean of per-gender rates") {
    const auto corpus = symmetric_corpus();
    const auto report = disparity_report(corpus);
    const double pop = report.population.men + report.population.women;
    const double overall =
        (report.auction_population.men + report.auction_population.women) / pop;
    const double weighted = report.access_rate.men * (report.population.men / pop) +
                            report.access_rate.women * (report.population.women / pop);
    CHECK(overall == doctest::Approx(weighted).epsilon(1e-12));
}

TEST_CASE("access curve is a clean step when access is a career-length threshold") {
    std::vector<corpus::CleanArtist> artists;
    std::vector<corpus::ExhibitionEvent> events;
    std::vector<corpus::AuctionRecord> auctions;
    for (int i = 0; i < 60; ++i) {
        const std::string id = "A" + std::to_string(i);
        artists.push_back(artist(id, i % 2 == 0 ? Gender::man : Gender::woman));
        const int length = i % 2 == 0 ? 5 : 15; // two career-length clusters
        events.push_back(event(id, "I1", 2000));
        events.push_back(event(id, "I1", 2000 + length - 1));
        if (length >= 10) auctions.push_back({id, Date{2010, 1, 1}, 100.0, 1.0});
    }
    auto corpus = make_corpus(std::move(artists), std::move(events), std::move(auctions));
    const auto features = careers::career_features(corpus, net::PrestigeTable{});
    const auto curves = access_rate_curves(corpus, features, {10, 1});
    int checked = 0;
    for (const auto& p : curves) {
        if (p.feature != "career_length") continue;
        if (p.n == 0) {
            CHECK(!p.access_rate); // empty bins carry no rate
            continue;
        }
        REQUIRE(p.access_rate);
        ++checked;
        if (p.bin_high <= 10.0) CHECK(*p.access_rate == doctest::Approx(0.0));
        if (p.bin_low >= 10.0) CHECK(*p.access_rate == doctest::Approx(1.0));
    }
    CHECK(checked >= 2);
}

TEST_CASE("empirical access curves track the generating logistic model") {
    synth::WorldSpec spec;
    spec.seed = 12;
    spec.n_artists = 6000;
    spec.woman_fraction = 0.4;
    spec.groups = {{"g1", 30, 1.0, 0.4}};
    const auto world = synth::generate(spec);
    auto corpus = make_corpus(
        [&] {
            std::vector<corpus::CleanArtist> as;
            for (const auto& a : world.artists) {
                as.push_back(artist(a.artist_id, a.curated_gender));
            }
            return as;
        }(),
        world.exhibitions, world.auctions);

    const auto truth = nlohmann::json::parse(world.truth_json);
    const auto& model = truth.at("access_model");
    const double b0 = model.at("intercept").get<double>();
    const double b1 = model.at("coef_exhibitions_per_year").get<double>();
    const double b2 = model.at("coef_career_length").get<double>();
    const double bw = model.at("coef_woman").get<double>();
    const auto& tf = model.at("transforms");
    const double e_lo = tf.at("exhibitions_per_year").at("ln_min").get<double>();
    const double e_hi = tf.at("exhibitions_per_year").at("ln_max").get<double>();
    const double c_lo = tf.at("career_length").at("ln_min").get<double>();
    const double c_hi = tf.at("career_length").at("ln_max").get<double>();

    const auto features = careers::career_features(corpus, net::PrestigeTable{});
    const auto curves = access_rate_curves(corpus, features, {8, 5});

    // expected access probability per (feature bin, gender), from the truth
    // model, replicating the binning rule
    double lo = features.front().career_length, hi = lo;
    for (const auto& f : features) {
        lo = std::min(lo, static_cast<double>(f.career_length));
        hi = std::max(hi, static_cast<double>(f.career_length));
    }
    const int bins = 8;
    const double width = (hi - lo) / bins;
    for (const Gender g : {Gender::man, Gender::woman}) {
        std::vector<double> expected(bins, 0.0), variance(bins, 0.0);
        std::vector<long long> count(bins, 0);
        for (const auto& f : features) {
            if (f.gender != g) continue;
            const double x = static_cast<double>(f.career_length);
            const int b = std::clamp(static_cast<int>((x - lo) / width), 0, bins - 1);
            const double z1 =
                (std::log(f.exhibitions_per_year) - e_lo) / std::max(e_hi - e_lo, 1e-12);
            const double z2 = (std::log(x) - c_lo) / std::max(c_hi - c_lo, 1e-12);
            const double eta = b0 + b1 * z1 + b2 * z2 + (g == Gender::woman ? bw : 0.0);
            const double prob = 1.0 / (1.0 + std::exp(-eta));
            const auto bi = static_cast<std::size_t>(b);
            expected[bi] += prob;
            variance[bi] += prob * (1.0 - prob);
            ++count[bi];
        }
        int checked = 0;
        for (const auto& p : curves) {
            if (p.feature != "career_length" || p.gender != g || p.n < 30) continue;
            const int b = std::clamp(static_cast<int>((p.bin_low - lo) / width + 0.5), 0,
                                     bins - 1);
            const auto bi = static_cast<std::size_t>(b);
            REQUIRE(count[bi] == p.n);
            const double mean = expected[bi] / static_cast<double>(count[bi]);
            const double sigma = std::sqrt(variance[bi]) / static_cast<double>(count[bi]);
            CHECK(std::fabs(*p.access_rate - mean) <= 3.0 * sigma + 1e-9);
            ++checked;
        }
        CHECK(checked >= 3);
    }
}

TEST_CASE("disparity JSON round-trips") {
    testutil::TempDir dir("disparity");
    const auto report = disparity_report(symmetric_corpus());
    write_disparity_json(dir.file("d.json"), report, "digest");
    const auto loaded = load_disparity_json(dir.file("d.json"));
    CHECK(loaded.population.men == report.population.men);
    CHECK(*loaded.total_sales.ratio == doctest::Approx(*report.total_sales.ratio));
}
