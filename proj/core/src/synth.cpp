#include "artequity/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "artequity/csv.hpp"

namespace artequity::synth {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
    // modulo bias is immaterial for synthetic-world generation
    return bound == 0 ? 0 : next() % bound;
}

int SplitMix64::next_int(int lo, int hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

double SplitMix64::next_normal() {
    const double u1 = 1.0 - next_double(); // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    SplitMix64 rng(master ^ (stream * 0x9e3779b97f4a7c15ULL));
    const std::uint64_t base = rng.next();
    SplitMix64 rng2(base ^ (index * 0xbf58476d1ce4e5b9ULL));
    return rng2.next();
}

namespace {

constexpr std::uint64_t kStreamInstitutions = 1;
constexpr std::uint64_t kStreamGenders = 2;
constexpr std::uint64_t kStreamCareers = 3;
constexpr std::uint64_t kStreamAuctions = 4;

struct DayOfYear {
    int month;
    int day;
};

// Non-leap calendar so every generated date is valid.
DayOfYear day_of_year(int doy) { // 0..364
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int m = 0;
    while (doy >= kDays[m]) {
        doy -= kDays[m];
        ++m;
    }
    return {m + 1, doy + 1};
}

} // namespace

void validate(const WorldSpec& spec) {
    if (spec.n_artists <= 0) throw DataError("worldspec: n_artists must be positive");
    if (!(spec.woman_fraction >= 0.0 && spec.woman_fraction <= 1.0)) {
        throw DataError("worldspec: woman_fraction must lie in [0,1]");
    }
    if (spec.groups.empty()) throw DataError("worldspec: at least one institution group required");
    double share_sum = 0.0;
    for (const auto& g : spec.groups) {
        if (g.count <= 0) throw DataError("worldspec: group '" + g.name + "' needs count > 0");
        if (!(g.exhibition_share > 0.0)) {
            throw DataError("worldspec: group '" + g.name + "' needs exhibition_share > 0");
        }
        if (g.woman_p && !(*g.woman_p >= 0.0 && *g.woman_p <= 1.0)) {
            throw DataError("worldspec: group '" + g.name + "' woman_p must lie in [0,1]");
        }
        share_sum += g.exhibition_share;
    }
    if (std::fabs(share_sum - 1.0) > 1e-9) {
        throw DataError("worldspec: group exhibition shares must sum to 1");
    }
    if (spec.career_years_lo < 1 || spec.career_years_hi < spec.career_years_lo) {
        throw DataError("worldspec: invalid career length range");
    }
    if (spec.exhibitions_lo < 1 || spec.exhibitions_hi < spec.exhibitions_lo) {
        throw DataError("worldspec: invalid exhibition count range");
    }
    if (spec.exhibitions_hi > 365 * spec.career_years_lo) {
        throw DataError("worldspec: infeasible, more exhibitions than career slots (" +
                        std::to_string(spec.exhibitions_hi) + " > " +
                        std::to_string(365 * spec.career_years_lo) + ")");
    }
    if (spec.start_year_hi < spec.start_year_lo) {
        throw DataError("worldspec: invalid start year range");
    }
    if (spec.profiles.empty()) {
        for (const auto& g : spec.groups) {
            if (!g.woman_p) {
                throw DataError("worldspec: group '" + g.name +
                                "' needs woman_p when no profiles are given");
            }
        }
    } else {
        for (const auto& p : spec.profiles) {
            if (!(p.share > 0.0)) {
                throw DataError("worldspec: profile '" + p.name + "' needs share > 0");
            }
            double w = 0.0;
            for (const auto& [group, weight] : p.weights) {
                bool known = false;
                for (const auto& g : spec.groups) known |= g.name == group;
                if (!known) {
                    throw DataError("worldspec: profile '" + p.name +
                                    "' references unknown group '" + group + "'");
                }
                if (weight < 0.0) throw DataError("worldspec: negative profile weight");
                w += weight;
            }
            if (!(w > 0.0)) throw DataError("worldspec: profile '" + p.name + "' has zero weight");
        }
    }
    if (!(spec.curated_fraction >= 0.0 && spec.curated_fraction <= 1.0)) {
        throw DataError("worldspec: curated_fraction must lie in [0,1]");
    }
    if (spec.countries.empty()) throw DataError("worldspec: countries must be nonempty");
}

namespace {

// Per-gender venue-choice mixtures; either given explicitly or derived
// from planted per-group woman probabilities.
struct CompiledProfiles {
    std::vector<ProfileSpec> profiles;          // normalized weights
    std::vector<double> cumulative_man;         // profile choice CDF per gender
    std::vector<double> cumulative_woman;
};

CompiledProfiles compile_profiles(const WorldSpec& spec) {
    CompiledProfiles out;
    if (!spec.profiles.empty()) {
        out.profiles = spec.profiles;
    } else {
        double zw = 0.0, zm = 0.0;
        for (const auto& g : spec.groups) {
            zw += *g.woman_p * g.exhibition_share;
            zm += (1.0 - *g.woman_p) * g.exhibition_share;
        }
        ProfileSpec man{"derived_man", 1.0, Gender::man, {}};
        ProfileSpec woman{"derived_woman", 1.0, Gender::woman, {}};
        for (const auto& g : spec.groups) {
            if (zm > 0.0) man.weights[g.name] = (1.0 - *g.woman_p) * g.exhibition_share / zm;
            if (zw > 0.0) woman.weights[g.name] = *g.woman_p * g.exhibition_share / zw;
        }
        out.profiles = {man, woman};
    }
    for (auto& p : out.profiles) {
        double total = 0.0;
        for (const auto& [g, w] : p.weights) total += w;
        for (auto& [g, w] : p.weights) w /= total;
    }
    auto build_cdf = [&](Gender g, std::vector<double>& cdf) {
        double total = 0.0;
        for (const auto& p : out.profiles) {
            const bool applies = !p.gender || *p.gender == g;
            cdf.push_back(applies ? p.share : 0.0);
            total += cdf.back();
        }
        if (!(total > 0.0)) {
            throw DataError("worldspec: no profile applies to gender '" +
                            std::string(to_string(g)) + "'");
        }
        double acc = 0.0;
        for (auto& c : cdf) {
            acc += c / total;
            c = acc;
        }
    };
    build_cdf(Gender::man, out.cumulative_man);
    build_cdf(Gender::woman, out.cumulative_woman);
    return out;
}

std::size_t pick_from_cdf(const std::vector<double>& cdf, double u) {
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        if (u < cdf[i]) return i;
    }
    return cdf.size() - 1;
}

} // namespace

GeneratedCorpus generate(const WorldSpec& spec) {
    validate(spec);
    GeneratedCorpus world;

    // Institutions, grouped.
    struct Institution {
        std::string id;
        std::size_t group = 0;
        corpus::InstitutionType type = corpus::InstitutionType::gallery;
        std::string country;
    };
    std::vector<Institution> institutions;
    std::vector<std::vector<std::size_t>> members(spec.groups.size());
    {
        SplitMix64 rng(derive_seed(spec.seed, kStreamInstitutions));
        int serial = 0;
        for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
            for (int c = 0; c < spec.groups[gi].count; ++c) {
                Institution inst;
                char buf[16];
                std::snprintf(buf, sizeof buf, "I%05d", ++serial);
                inst.id = buf;
                inst.group = gi;
                inst.type = rng.next_double() < spec.museum_fraction
                                ? corpus::InstitutionType::museum
                                : corpus::InstitutionType::gallery;
                inst.country = spec.countries[rng.next_below(spec.countries.size())];
                members[gi].push_back(institutions.size());
                institutions.push_back(std::move(inst));
            }
        }
    }

    const CompiledProfiles compiled = compile_profiles(spec);

    // Exact-quota genders, shuffled.
    std::vector<Gender> genders(static_cast<std::size_t>(spec.n_artists), Gender::man);
    {
        const auto n_women = static_cast<std::size_t>(
            std::llround(spec.woman_fraction * spec.n_artists));
        for (std::size_t i = 0; i < std::min(n_women, genders.size()); ++i) {
            genders[i] = Gender::woman;
        }
        SplitMix64 rng(derive_seed(spec.seed, kStreamGenders));
        rng.shuffle(genders);
    }

    struct ArtistState {
        std::size_t profile = 0;
        int first_year = 0, last_year = 0;
        long long n_exhibitions = 0;
    };
    std::vector<ArtistState> states(static_cast<std::size_t>(spec.n_artists));
    std::vector<std::string> group_weight_keys; // flattened per-profile weights
    struct ProfileDraw {
        std::vector<double> cdf;
        std::vector<std::size_t> group_index;
    };
    std::vector<ProfileDraw> profile_draws(compiled.profiles.size());
    {
        std::map<std::string, std::size_t> group_by_name;
        for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
            group_by_name[spec.groups[gi].name] = gi;
        }
        for (std::size_t pi = 0; pi < compiled.profiles.size(); ++pi) {
            double acc = 0.0;
            for (const auto& [gname, w] : compiled.profiles[pi].weights) {
                acc += w;
                profile_draws[pi].cdf.push_back(acc);
                profile_draws[pi].group_index.push_back(group_by_name.at(gname));
            }
        }
    }

    for (int i = 0; i < spec.n_artists; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        SplitMix64 rng(derive_seed(spec.seed, kStreamCareers, static_cast<std::uint64_t>(i)));
        ArtistState& st = states[idx];
        const Gender gender = genders[idx];

        const auto& profile_cdf =
            gender == Gender::woman ? compiled.cumulative_woman : compiled.cumulative_man;
        st.profile = pick_from_cdf(profile_cdf, rng.next_double());

        const int start_year = rng.next_int(spec.start_year_lo, spec.start_year_hi);
        const int career_years = rng.next_int(spec.career_years_lo, spec.career_years_hi);
        const int n_exh = rng.next_int(spec.exhibitions_lo, spec.exhibitions_hi);
        st.n_exhibitions = n_exh;

        corpus::ArtistRecord artist;
        char buf[16];
        std::snprintf(buf, sizeof buf, "A%06d", i + 1);
        artist.artist_id = buf;
        artist.name = "Artist " + std::string(buf);
        artist.birth_year = start_year - rng.next_int(20, 40);
        if (rng.next_double() < spec.curated_fraction) {
            artist.curated_gender = gender;
        } else {
            artist.inferred_gender = gender;
            artist.inferred_probability = 0.8 + 0.2 * rng.next_double();
        }
        world.artists.push_back(std::move(artist));

        const ProfileDraw& draw = profile_draws[st.profile];
        st.first_year = start_year + career_years; // shrink below
        st.last_year = start_year;
        for (int e = 0; e < n_exh; ++e) {
            const std::size_t slot = pick_from_cdf(draw.cdf, rng.next_double());
            const std::size_t gi = draw.group_index[slot];
            const std::size_t inst =
                members[gi][rng.next_below(members[gi].size())];
            corpus::ExhibitionEvent ev;
            ev.artist_id = world.artists.back().artist_id;
            ev.institution_id = institutions[inst].id;
            const int year = start_year + rng.next_int(0, career_years - 1);
            const DayOfYear doy = day_of_year(static_cast<int>(rng.next_below(365)));
            ev.date = Date{year, doy.month, doy.day};
            ev.institution_type = institutions[inst].type;
            ev.country = institutions[inst].country;
            st.first_year = std::min(st.first_year, year);
            st.last_year = std::max(st.last_year, year);
            world.exhibitions.push_back(std::move(ev));
        }
    }

    // Auction access from the planted logistic model on ln+min-max features.
    double ln_exh_min = 0.0, ln_exh_max = 0.0, ln_len_min = 0.0, ln_len_max = 0.0;
    {
        bool first = true;
        for (const auto& st : states) {
            const double len = st.last_year - st.first_year + 1;
            const double per_year = static_cast<double>(st.n_exhibitions) / len;
            const double le = std::log(per_year), ll = std::log(len);
            if (first) {
                ln_exh_min = ln_exh_max = le;
                ln_len_min = ln_len_max = ll;
                first = false;
            } else {
                ln_exh_min = std::min(ln_exh_min, le);
                ln_exh_max = std::max(ln_exh_max, le);
                ln_len_min = std::min(ln_len_min, ll);
                ln_len_max = std::max(ln_len_max, ll);
            }
        }
    }
    auto minmax = [](double lx, double lo, double hi) {
        return hi > lo ? (lx - lo) / (hi - lo) : 0.0;
    };
    const double mu_man = 0.5 * std::log(spec.auction.price_gender_ratio);
    const double mu_woman = -0.5 * std::log(spec.auction.price_gender_ratio);
    for (int i = 0; i < spec.n_artists; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        SplitMix64 rng(derive_seed(spec.seed, kStreamAuctions, static_cast<std::uint64_t>(i)));
        const ArtistState& st = states[idx];
        const double len = st.last_year - st.first_year + 1;
        const double per_year = static_cast<double>(st.n_exhibitions) / len;
        const double z1 = minmax(std::log(per_year), ln_exh_min, ln_exh_max);
        const double z2 = minmax(std::log(len), ln_len_min, ln_len_max);
        const double eta = spec.auction.intercept +
                           spec.auction.coef_exhibitions_per_year * z1 +
                           spec.auction.coef_career_length * z2 +
                           (genders[idx] == Gender::woman ? spec.auction.coef_woman : 0.0);
        const double p = 1.0 / (1.0 + std::exp(-eta));
        if (rng.next_double() >= p) continue;
        const long long extra = static_cast<long long>(std::floor(
            -spec.auction.records_mean * std::log(1.0 - rng.next_double())));
        const long long n_records = 1 + std::min<long long>(extra, 200);
        for (long long r = 0; r < n_records; ++r) {
            corpus::AuctionRecord rec;
            rec.artist_id = world.artists[idx].artist_id;
            const int year = st.first_year + rng.next_int(0, st.last_year - st.first_year);
            const DayOfYear doy = day_of_year(static_cast<int>(rng.next_below(365)));
            rec.date = Date{year, doy.month, doy.day};
            const double mu = genders[idx] == Gender::woman ? mu_woman : mu_man;
            rec.raw_price =
                1000.0 * std::exp(mu + spec.auction.price_log_sigma * rng.next_normal());
            world.auctions.push_back(std::move(rec));
        }
    }

    // Ground truth.
    nlohmann::json truth;
    truth["seed"] = spec.seed;
    truth["woman_fraction_target"] = spec.woman_fraction;
    {
        // implied woman-exhibition probability per group from profile flows
        std::vector<double> woman_flow(spec.groups.size(), 0.0);
        std::vector<double> total_flow(spec.groups.size(), 0.0);
        auto add_flow = [&](Gender g, double mass_share) {
            const auto& cdf = g == Gender::woman ? compiled.cumulative_woman
                                                 : compiled.cumulative_man;
            double prev = 0.0;
            for (std::size_t pi = 0; pi < compiled.profiles.size(); ++pi) {
                const double prob = cdf[pi] - prev;
                prev = cdf[pi];
                if (prob <= 0.0) continue;
                for (const auto& [gname, w] : compiled.profiles[pi].weights) {
                    for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
                        if (spec.groups[gi].name == gname) {
                            total_flow[gi] += mass_share * prob * w;
                            if (g == Gender::woman) woman_flow[gi] += mass_share * prob * w;
                        }
                    }
                }
            }
        };
        add_flow(Gender::woman, spec.woman_fraction);
        add_flow(Gender::man, 1.0 - spec.woman_fraction);
        nlohmann::json groups = nlohmann::json::array();
        for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
            nlohmann::json g;
            g["name"] = spec.groups[gi].name;
            g["count"] = spec.groups[gi].count;
            g["exhibition_share"] = spec.groups[gi].exhibition_share;
            if (spec.groups[gi].woman_p) g["woman_p_planted"] = *spec.groups[gi].woman_p;
            g["woman_p_implied"] =
                total_flow[gi] > 0.0 ? woman_flow[gi] / total_flow[gi] : 0.0;
            groups.push_back(g);
        }
        truth["groups"] = groups;
        nlohmann::json inst = nlohmann::json::object();
        for (const auto& institution : institutions) {
            inst[institution.id] = {
                {"group", spec.groups[institution.group].name},
                {"woman_p_implied", total_flow[institution.group] > 0.0
                                        ? woman_flow[institution.group] /
                                              total_flow[institution.group]
                                        : 0.0}};
        }
        truth["institutions"] = inst;
    }
    {
        nlohmann::json profiles = nlohmann::json::array();
        for (const auto& p : compiled.profiles) {
            nlohmann::json pj;
            pj["name"] = p.name;
            pj["share"] = p.share;
            if (p.gender) pj["gender"] = std::string(to_string(*p.gender));
            pj["weights"] = p.weights;
            profiles.push_back(pj);
        }
        truth["profiles"] = profiles;
        nlohmann::json artist_profiles = nlohmann::json::object();
        for (int i = 0; i < spec.n_artists; ++i) {
            artist_profiles[world.artists[static_cast<std::size_t>(i)].artist_id] =
                compiled.profiles[states[static_cast<std::size_t>(i)].profile].name;
        }
        truth["artist_profiles"] = artist_profiles;
    }
    truth["access_model"] = {
        {"intercept", spec.auction.intercept},
        {"coef_exhibitions_per_year", spec.auction.coef_exhibitions_per_year},
        {"coef_career_length", spec.auction.coef_career_length},
        {"coef_woman", spec.auction.coef_woman},
        {"transforms",
         {{"exhibitions_per_year", {{"ln_min", ln_exh_min}, {"ln_max", ln_exh_max}}},
          {"career_length", {{"ln_min", ln_len_min}, {"ln_max", ln_len_max}}}}}};
    world.truth_json = truth.dump(2) + "\n";
    return world;
}

void write_world(const std::string& out_dir, const WorldSpec& spec,
                 const GeneratedCorpus& world, const std::string& config_digest) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::string meta =
        config_digest.empty() ? std::string() : "config_digest=" + config_digest;
    {
        CsvWriter w((fs::path(out_dir) / "artists.csv").string(),
                    {"artist_id", "name", "birth_year", "curated_gender", "inferred_gender",
                     "inferred_probability"},
                    meta);
        for (const auto& a : world.artists) {
            w.write_row({a.artist_id, a.name,
                         a.birth_year ? std::to_string(*a.birth_year) : std::string(),
                         a.curated_gender == Gender::unknown
                             ? std::string()
                             : std::string(to_string(a.curated_gender)),
                         a.inferred_gender == Gender::unknown
                             ? std::string()
                             : std::string(to_string(a.inferred_gender)),
                         a.inferred_probability ? format_double(*a.inferred_probability)
                                                : std::string()});
        }
    }
    {
        CsvWriter w((fs::path(out_dir) / "exhibitions.csv").string(),
                    {"artist_id", "institution_id", "date", "institution_type", "country"},
                    meta);
        for (const auto& e : world.exhibitions) {
            w.write_row({e.artist_id, e.institution_id, e.date.to_iso(),
                         std::string(corpus::to_string(e.institution_type)), e.country});
        }
    }
    {
        CsvWriter w((fs::path(out_dir) / "auctions.csv").string(),
                    {"artist_id", "date", "price_usd2013"}, meta);
        for (const auto& a : world.auctions) {
            w.write_row({a.artist_id, a.date.to_iso(), format_double(a.raw_price)});
        }
    }
    {
        nlohmann::json truth = nlohmann::json::parse(world.truth_json);
        if (!config_digest.empty()) truth["meta"] = {{"config_digest", config_digest}};
        std::ofstream out((fs::path(out_dir) / "truth.json").string(), std::ios::binary);
        out << truth.dump(2) << "\n";
    }
    {
        nlohmann::json echo = worldspec_to_json(spec);
        if (!config_digest.empty()) echo["meta"] = {{"config_digest", config_digest}};
        std::ofstream out((fs::path(out_dir) / "worldspec.json").string(), std::ios::binary);
        out << echo.dump(2) << "\n";
    }
}

nlohmann::json worldspec_to_json(const WorldSpec& spec) {
    nlohmann::json j;
    j["seed"] = spec.seed;
    j["n_artists"] = spec.n_artists;
    j["woman_fraction"] = spec.woman_fraction;
    j["career"] = {{"start_year_range", {spec.start_year_lo, spec.start_year_hi}},
                   {"length_years_range", {spec.career_years_lo, spec.career_years_hi}},
                   {"exhibitions_range", {spec.exhibitions_lo, spec.exhibitions_hi}}};
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : spec.groups) {
        nlohmann::json gj;
        gj["name"] = g.name;
        gj["count"] = g.count;
        gj["exhibition_share"] = g.exhibition_share;
        if (g.woman_p) gj["woman_p"] = *g.woman_p;
        groups.push_back(gj);
    }
    j["groups"] = groups;
    if (!spec.profiles.empty()) {
        nlohmann::json profiles = nlohmann::json::array();
        for (const auto& p : spec.profiles) {
            nlohmann::json pj;
            pj["name"] = p.name;
            pj["share"] = p.share;
            if (p.gender) pj["gender"] = std::string(to_string(*p.gender));
            pj["weights"] = p.weights;
            profiles.push_back(pj);
        }
        j["profiles"] = profiles;
    }
    j["museum_fraction"] = spec.museum_fraction;
    j["countries"] = spec.countries;
    j["auction"] = {{"intercept", spec.auction.intercept},
                    {"coef_exhibitions_per_year", spec.auction.coef_exhibitions_per_year},
                    {"coef_career_length", spec.auction.coef_career_length},
                    {"coef_woman", spec.auction.coef_woman},
                    {"records_mean", spec.auction.records_mean},
                    {"price_log_sigma", spec.auction.price_log_sigma},
                    {"price_gender_ratio", spec.auction.price_gender_ratio}};
    j["curated_fraction"] = spec.curated_fraction;
    return j;
}

WorldSpec worldspec_from_json(const nlohmann::json& j) {
    WorldSpec spec;
    spec.seed = j.value("seed", spec.seed);
    spec.n_artists = j.value("n_artists", spec.n_artists);
    spec.woman_fraction = j.value("woman_fraction", spec.woman_fraction);
    if (j.contains("career")) {
        const auto& c = j.at("career");
        if (c.contains("start_year_range")) {
            spec.start_year_lo = c.at("start_year_range").at(0).get<int>();
            spec.start_year_hi = c.at("start_year_range").at(1).get<int>();
        }
        if (c.contains("length_years_range")) {
            spec.career_years_lo = c.at("length_years_range").at(0).get<int>();
            spec.career_years_hi = c.at("length_years_range").at(1).get<int>();
        }
        if (c.contains("exhibitions_range")) {
            spec.exhibitions_lo = c.at("exhibitions_range").at(0).get<int>();
            spec.exhibitions_hi = c.at("exhibitions_range").at(1).get<int>();
        }
    }
    if (j.contains("groups")) {
        spec.groups.clear();
        for (const auto& gj : j.at("groups")) {
            GroupSpec g;
            g.name = gj.at("name").get<std::string>();
            g.count = gj.at("count").get<int>();
            g.exhibition_share = gj.at("exhibition_share").get<double>();
            if (gj.contains("woman_p")) g.woman_p = gj.at("woman_p").get<double>();
            spec.groups.push_back(std::move(g));
        }
    }
    if (j.contains("profiles")) {
        for (const auto& pj : j.at("profiles")) {
            ProfileSpec p;
            p.name = pj.at("name").get<std::string>();
            p.share = pj.at("share").get<double>();
            if (pj.contains("gender")) {
                p.gender = gender_from_string(pj.at("gender").get<std::string>());
                if (p.gender && *p.gender == Gender::unknown) p.gender.reset();
            }
            p.weights = pj.at("weights").get<std::map<std::string, double>>();
            spec.profiles.push_back(std::move(p));
        }
    }
    spec.museum_fraction = j.value("museum_fraction", spec.museum_fraction);
    if (j.contains("countries")) {
        spec.countries = j.at("countries").get<std::vector<std::string>>();
    }
    if (j.contains("auction")) {
        const auto& a = j.at("auction");
        spec.auction.intercept = a.value("intercept", spec.auction.intercept);
        spec.auction.coef_exhibitions_per_year =
            a.value("coef_exhibitions_per_year", spec.auction.coef_exhibitions_per_year);
        spec.auction.coef_career_length =
            a.value("coef_career_length", spec.auction.coef_career_length);
        spec.auction.coef_woman = a.value("coef_woman", spec.auction.coef_woman);
        spec.auction.records_mean = a.value("records_mean", spec.auction.records_mean);
        spec.auction.price_log_sigma =
            a.value("price_log_sigma", spec.auction.price_log_sigma);
        spec.auction.price_gender_ratio =
            a.value("price_gender_ratio", spec.auction.price_gender_ratio);
    }
    spec.curated_fraction = j.value("curated_fraction", spec.curated_fraction);
    return spec;
}

WorldSpec load_worldspec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open worldspec: " + path);
    return worldspec_from_json(nlohmann::json::parse(in));
}

} // namespace artequity::synth
