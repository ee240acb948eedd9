#include "artequity/bftest.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "artequity/csv.hpp"

namespace artequity::bf {

double ln_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Continued fraction for I_x(a,b) (modified Lentz), valid for
// x < (a+1)/(a+b+2). Returns the CF factor; the caller applies the
// x^a (1-x)^b / (a B(a,b)) prefactor in log space.
double inc_beta_cf(double x, double a, double b) {
    constexpr int kMaxIter = 2000;
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) return h;
    }
    throw NumericalError("incomplete beta continued fraction failed to converge");
}

// ln I_x(a,b) assuming x is on the convergent side of the CF.
double ln_inc_beta_direct(double x, double a, double b) {
    const double ln_prefactor =
        a * std::log(x) + b * std::log1p(-x) - std::log(a) - ln_beta(a, b);
    return ln_prefactor + std::log(inc_beta_cf(x, a, b));
}

} // namespace

double ln_reg_inc_beta_lower(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw UsageError("incomplete beta requires a,b > 0");
    if (x <= 0.0) return -kInf;
    if (x >= 1.0) return 0.0;
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return ln_inc_beta_direct(x, a, b);
    }
    const double ln_complement = ln_inc_beta_direct(1.0 - x, b, a);
    const double complement = std::exp(ln_complement);
    if (complement >= 1.0) return -kInf;
    return std::log1p(-complement);
}

double ln_reg_inc_beta_upper(double x, double a, double b) {
    return ln_reg_inc_beta_lower(1.0 - x, b, a);
}

namespace {

void check_bf_inputs(long long n, long long k, double p0, const BetaPrior& prior) {
    if (n == 0) throw DataError("insufficient data: n = 0");
    if (n < 0 || k < 0 || k > n) throw UsageError("bayes factor requires 0 <= k <= n, n >= 1");
    if (!(p0 > 0.0 && p0 < 1.0)) throw UsageError("bayes factor requires p0 in (0,1)");
    if (!(prior.a > 0.0 && prior.b > 0.0)) throw UsageError("beta prior requires a,b > 0");
}

double ln_null_likelihood_kernel(long long n, long long k, double p0) {
    return static_cast<double>(k) * std::log(p0) +
           static_cast<double>(n - k) * std::log1p(-p0);
}

} // namespace

double log_bf_two_sided(long long n, long long k, double p0, const BetaPrior& prior) {
    check_bf_inputs(n, k, p0, prior);
    const double a = prior.a, b = prior.b;
    return ln_beta(static_cast<double>(k) + a, static_cast<double>(n - k) + b) - ln_beta(a, b) -
           ln_null_likelihood_kernel(n, k, p0);
}

double log_bf_one_sided(long long n, long long k, double p0, Direction direction,
                        const BetaPrior& prior) {
    check_bf_inputs(n, k, p0, prior);
    const double a = prior.a, b = prior.b;
    const double pa = static_cast<double>(k) + a;
    const double pb = static_cast<double>(n - k) + b;
    double ln_posterior_mass, ln_prior_mass;
    if (direction == Direction::below) {
        ln_posterior_mass = ln_reg_inc_beta_lower(p0, pa, pb);
        ln_prior_mass = ln_reg_inc_beta_lower(p0, a, b);
    } else {
        ln_posterior_mass = ln_reg_inc_beta_upper(p0, pa, pb);
        ln_prior_mass = ln_reg_inc_beta_upper(p0, a, b);
    }
    return ln_beta(pa, pb) - ln_beta(a, b) + ln_posterior_mass - ln_prior_mass -
           ln_null_likelihood_kernel(n, k, p0);
}

std::string_view to_string(CriterionKind k) {
    return k == CriterionKind::gender_neutral ? "neutral" : "balanced";
}

std::string_view to_string(Category c) {
    switch (c) {
    case Category::man_over: return "man_over";
    case Category::woman_over: return "woman_over";
    case Category::null_consistent: return "null_consistent";
    case Category::uncategorised: return "uncategorised";
    }
    return "uncategorised";
}

EquityCriterion EquityCriterion::gender_neutral(double women_fraction) {
    if (!(women_fraction > 0.0 && women_fraction < 1.0)) {
        throw DataError("gender-neutral criterion needs a women fraction in (0,1), got " +
                        format_double(women_fraction));
    }
    return {CriterionKind::gender_neutral, women_fraction};
}

EquityCriterion EquityCriterion::gender_balanced() {
    return {CriterionKind::gender_balanced, 0.5};
}

ClassificationResult classify(const ExhibitionTally& tally, const EquityCriterion& criterion,
                              const ClassifyOptions& options) {
    if (!(options.evidence_threshold > 1.0)) {
        throw UsageError("evidence threshold must exceed 1");
    }
    ClassificationResult res;
    res.unit_id = tally.unit_id;
    res.criterion = criterion.kind;
    res.n = tally.n;
    res.k = tally.k;
    if (tally.n == 0) {
        res.category = Category::uncategorised;
        res.reason = "no exhibitions";
        return res;
    }

    const double ln_t = std::log(options.evidence_threshold);
    const double lbf2 = log_bf_two_sided(tally.n, tally.k, criterion.p0, options.prior);
    res.log_bf_two_sided = lbf2;
    if (lbf2 < -ln_t) {
        res.category = Category::null_consistent;
        return res;
    }
    if (lbf2 <= ln_t) {
        res.category = Category::uncategorised;
        res.reason = "anecdotal evidence";
        return res;
    }

    const double p_hat = tally.p_hat();
    if (p_hat == criterion.p0) {
        // The two-sided BF is minimized near the null; strong evidence with
        // p_hat exactly at p0 cannot arise from this test.
        throw NumericalError("internal error: two-sided BF above threshold at p_hat == p0");
    }
    const Direction dir = p_hat < criterion.p0 ? Direction::below : Direction::above;
    const double lbf1 = log_bf_one_sided(tally.n, tally.k, criterion.p0, dir, options.prior);
    res.log_bf_one_sided = lbf1;
    if (lbf1 > ln_t) {
        res.category = dir == Direction::below ? Category::man_over : Category::woman_over;
    } else {
        res.category = Category::uncategorised;
        res.reason = "directional evidence anecdotal";
    }

    // evidence-consistency invariant
    assert(res.category != Category::man_over || p_hat < criterion.p0);
    assert(res.category != Category::woman_over || p_hat > criterion.p0);
    return res;
}

CorpusClassification classify_corpus(const corpus::CleanCorpus& corpus,
                                     const EquityCriterion& criterion, GroupBy group_by,
                                     const ClassifyOptions& options) {
    std::unordered_map<std::string, Gender> gender_of;
    gender_of.reserve(corpus.artists.size());
    for (const auto& a : corpus.artists) gender_of.emplace(a.artist_id, a.gender);

    std::map<std::string, ExhibitionTally> tallies; // ordered -> deterministic output
    for (const auto& ev : corpus.exhibitions) {
        const std::string& unit =
            group_by == GroupBy::institution ? ev.institution_id : ev.country;
        auto& t = tallies[unit];
        t.unit_id = unit;
        ++t.n;
        if (gender_of.at(ev.artist_id) == Gender::woman) ++t.k;
    }

    CorpusClassification out{criterion, options, group_by, {}, {}};
    out.results.reserve(tallies.size());
    long long total_exhibitions = 0, uncategorised_exhibitions = 0;
    for (const auto& [unit, tally] : tallies) {
        ClassificationResult res = classify(tally, criterion, options);
        total_exhibitions += tally.n;
        if (res.category == Category::uncategorised) {
            uncategorised_exhibitions += tally.n;
            ++out.summary.uncategorised_reasons[res.reason];
        }
        ++out.summary.counts[res.category];
        out.results.push_back(std::move(res));
    }
    out.summary.total_units = out.results.size();
    for (const auto& [cat, count] : out.summary.counts) {
        if (cat != Category::uncategorised) out.summary.categorisable += count;
    }
    if (out.summary.categorisable > 0) {
        for (const auto& [cat, count] : out.summary.counts) {
            if (cat != Category::uncategorised) {
                out.summary.shares[cat] =
                    static_cast<double>(count) / static_cast<double>(out.summary.categorisable);
            }
        }
    }
    if (total_exhibitions > 0) {
        out.summary.uncategorised_exhibition_share =
            static_cast<double>(uncategorised_exhibitions) /
            static_cast<double>(total_exhibitions);
    }
    return out;
}

std::vector<long long> boundary_grid(long long max_n) {
    std::vector<long long> grid;
    for (long long n = 1; n <= std::min<long long>(100, max_n); ++n) grid.push_back(n);
    long long n = 100;
    while (n < max_n) {
        n = std::max(n + 1, static_cast<long long>(static_cast<double>(n) * 1.1));
        grid.push_back(std::min(n, max_n));
    }
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::vector<BoundaryRow> decision_boundary(const EquityCriterion& criterion,
                                           const std::vector<long long>& n_values,
                                           const ClassifyOptions& options) {
    std::vector<BoundaryRow> rows;
    for (long long n : n_values) {
        long long man_max = -1, null_min = -1, null_max = -1, woman_min = -1;
        for (long long k = 0; k <= n; ++k) {
            const auto res = classify({"", n, k}, criterion, options);
            switch (res.category) {
            case Category::man_over:
                man_max = k;
                break;
            case Category::null_consistent:
                if (null_min < 0) null_min = k;
                null_max = k;
                break;
            case Category::woman_over:
                if (woman_min < 0) woman_min = k;
                break;
            default:
                break;
            }
        }
        if (man_max >= 0) rows.push_back({n, "man_over_max_k", man_max});
        if (null_min >= 0) rows.push_back({n, "null_min_k", null_min});
        if (null_max >= 0) rows.push_back({n, "null_max_k", null_max});
        if (woman_min >= 0) rows.push_back({n, "woman_over_min_k", woman_min});
    }
    return rows;
}

namespace {
constexpr double kLog10E = 0.43429448190325176; // 1/ln(10)
}

void write_classification_csv(const std::string& path,
                              const std::vector<ClassificationResult>& results,
                              const std::string& config_digest) {
    // BF columns are serialized as log10(BF); linear BFs reach 1e73 and
    // beyond, which does not survive text round-trips.
    CsvWriter w(path,
                {"unit_id", "criterion", "n", "k", "p_hat", "bf_two_sided", "bf_one_sided",
                 "category"},
                "config_digest=" + config_digest + " bf_scale=log10");
    for (const auto& r : results) {
        w.write_row({r.unit_id, std::string(to_string(r.criterion)), std::to_string(r.n),
                     std::to_string(r.k),
                     r.n > 0 ? format_double(static_cast<double>(r.k) /
                                             static_cast<double>(r.n))
                             : std::string(),
                     r.log_bf_two_sided ? format_double(*r.log_bf_two_sided * kLog10E)
                                        : std::string(),
                     r.log_bf_one_sided ? format_double(*r.log_bf_one_sided * kLog10E)
                                        : std::string(),
                     std::string(to_string(r.category))});
    }
}

std::vector<ClassificationResult> load_classification_csv(const std::string& path) {
    CsvReader r(path);
    r.require_header({"unit_id", "criterion", "n", "k", "p_hat", "bf_two_sided", "bf_one_sided",
                      "category"},
                     path);
    std::vector<ClassificationResult> out;
    std::vector<std::string> fields;
    std::size_t row = 0;
    while (r.next(fields, row)) {
        ClassificationResult res;
        res.unit_id = fields[0];
        res.criterion = fields[1] == "neutral" ? CriterionKind::gender_neutral
                                               : CriterionKind::gender_balanced;
        res.n = std::stoll(fields[2]);
        res.k = std::stoll(fields[3]);
        if (!fields[5].empty()) res.log_bf_two_sided = std::stod(fields[5]) / kLog10E;
        if (!fields[6].empty()) res.log_bf_one_sided = std::stod(fields[6]) / kLog10E;
        if (fields[7] == "man_over") res.category = Category::man_over;
        else if (fields[7] == "woman_over") res.category = Category::woman_over;
        else if (fields[7] == "null_consistent") res.category = Category::null_consistent;
        else res.category = Category::uncategorised;
        out.push_back(std::move(res));
    }
    return out;
}

void write_boundary_csv(const std::string& path, CriterionKind kind,
                        const std::vector<BoundaryRow>& rows, const std::string& config_digest) {
    CsvWriter w(path, {"criterion", "n", "edge", "k"}, "config_digest=" + config_digest);
    for (const auto& row : rows) {
        w.write_row({std::string(to_string(kind)), std::to_string(row.n), row.edge,
                     std::to_string(row.k)});
    }
}

} // namespace artequity::bf
