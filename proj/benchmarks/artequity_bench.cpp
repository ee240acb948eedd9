#include <benchmark/benchmark.h>

#include "artequity/bftest.hpp"
#include "artequity/careers.hpp"
#include "artequity/corpus.hpp"
#include "artequity/exnet.hpp"
#include "artequity/regress.hpp"
#include "artequity/synth.hpp"

using namespace artequity;

namespace {

synth::WorldSpec bench_spec(int n_artists) {
    synth::WorldSpec spec;
    spec.seed = 77;
    spec.n_artists = n_artists;
    spec.woman_fraction = 0.365;
    spec.groups = {{"man_lean", 60, 0.335, 0.1},
                   {"neutral", 70, 0.4, 0.365},
                   {"woman_lean", 50, 0.265, 0.7}};
    return spec;
}

corpus::CleanCorpus bench_corpus(int n_artists) {
    const auto world = synth::generate(bench_spec(n_artists));
    corpus::CleanCorpus c;
    for (const auto& a : world.artists) {
        c.artists.push_back({a.artist_id, a.name, a.birth_year, a.curated_gender});
    }
    c.exhibitions = world.exhibitions;
    c.auctions = world.auctions;
    std::size_t women = 0;
    for (const auto& a : c.artists) women += a.gender == Gender::woman;
    c.women_fraction = corpus::women_fraction(women, c.artists.size() - women);
    return c;
}

void bm_log_bf_two_sided(benchmark::State& state) {
    const auto n = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bf::log_bf_two_sided(n, n / 3, 0.365));
    }
}
BENCHMARK(bm_log_bf_two_sided)->Arg(100)->Arg(10000)->Arg(1000000);

void bm_classify_corpus(benchmark::State& state) {
    const auto corpus = bench_corpus(static_cast<int>(state.range(0)));
    const auto criterion = bf::EquityCriterion::gender_neutral(corpus.women_fraction);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            bf::classify_corpus(corpus, criterion, bf::GroupBy::institution));
    }
}
BENCHMARK(bm_classify_corpus)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

void bm_build_network(benchmark::State& state) {
    const auto corpus = bench_corpus(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(net::build_network(corpus));
    }
}
BENCHMARK(bm_build_network)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

void bm_prestige(benchmark::State& state) {
    const auto corpus = bench_corpus(static_cast<int>(state.range(0)));
    const auto network = net::build_network(corpus);
    for (auto _ : state) {
        benchmark::DoNotOptimize(net::prestige(network));
    }
}
BENCHMARK(bm_prestige)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

void bm_logistic_fit(benchmark::State& state) {
    synth::SplitMix64 rng(5);
    const auto n = state.range(0);
    std::vector<regress::ObsInput> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        regress::ObsInput r;
        r.artist_id = std::to_string(i);
        r.gender = rng.next_double() < 0.4 ? Gender::woman : Gender::man;
        const double u = rng.next_double();
        r.co_gender = u < 0.4   ? careers::CoGender::co_man
                      : u < 0.7 ? careers::CoGender::co_neutral
                                : careers::CoGender::co_woman;
        r.exhibitions_per_year = 0.5 + 5.0 * rng.next_double();
        r.career_length = 1.0 + static_cast<double>(rng.next_below(20));
        r.auctioned = rng.next_double() < 0.25;
        rows.push_back(std::move(r));
    }
    const auto design = regress::encode(rows, regress::ModelId::m4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(regress::fit(design));
    }
}
BENCHMARK(bm_logistic_fit)->Arg(16126)->Unit(benchmark::kMillisecond);

void bm_generate_world(benchmark::State& state) {
    const auto spec = bench_spec(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(synth::generate(spec));
    }
}
BENCHMARK(bm_generate_world)->Arg(10000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
