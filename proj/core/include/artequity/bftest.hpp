#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "artequity/corpus.hpp"

namespace artequity::bf {

// ln B(a,b)
double ln_beta(double a, double b);

// ln I_x(a,b) and ln(1 - I_x(a,b)) where I is the regularized incomplete
// beta function. Evaluated by continued fraction on the convergent side and
// by complement otherwise, so the result stays finite far into the tails
// (I_x itself would underflow double for the Bayes factors seen here).
double ln_reg_inc_beta_lower(double x, double a, double b);
double ln_reg_inc_beta_upper(double x, double a, double b);

// Prior over the alternative's success probability.
struct BetaPrior {
    double a = 1.0;
    double b = 1.0;
};

// ln BF10 of H1: p ~ Beta(a,b) against H0: p = p0, for k successes in n.
// n = 0 throws DataError (insufficient data).
double log_bf_two_sided(long long n, long long k, double p0, const BetaPrior& prior = {});

enum class Direction { below, above };

// ln BF10 with the prior truncated to [0,p0) or (p0,1] and renormalized.
double log_bf_one_sided(long long n, long long k, double p0, Direction direction,
                        const BetaPrior& prior = {});

enum class CriterionKind { gender_neutral, gender_balanced };

std::string_view to_string(CriterionKind k);

struct EquityCriterion {
    CriterionKind kind;
    double p0;

    // p0 = women_fraction of the corpus under audit.
    static EquityCriterion gender_neutral(double women_fraction);
    static EquityCriterion gender_balanced();
};

struct ExhibitionTally {
    std::string unit_id;
    long long n = 0; // total exhibitions
    long long k = 0; // exhibitions by women artists

    double p_hat() const { return static_cast<double>(k) / static_cast<double>(n); }
};

enum class Category { man_over, woman_over, null_consistent, uncategorised };

std::string_view to_string(Category c);

struct ClassificationResult {
    std::string unit_id;
    CriterionKind criterion = CriterionKind::gender_neutral;
    long long n = 0;
    long long k = 0;
    std::optional<double> log_bf_two_sided; // natural log; absent when n = 0
    std::optional<double> log_bf_one_sided; // absent unless the one-sided stage ran
    Category category = Category::uncategorised;
    std::string reason; // set for uncategorised results
};

struct ClassifyOptions {
    BetaPrior prior;
    double evidence_threshold = 3.0; // anecdotal band is (1/t, t)
};

// Two-stage decision: two-sided BF below 1/t -> null-consistent, inside the
// anecdotal band -> uncategorised, above t -> one-sided test in the
// direction of the observed deviation, which must itself clear t.
ClassificationResult classify(const ExhibitionTally& tally, const EquityCriterion& criterion,
                              const ClassifyOptions& options = {});

enum class GroupBy { institution, country };

struct ClassificationSummary {
    std::map<Category, std::size_t> counts;
    // shares among categorisable units (uncategorised excluded)
    std::map<Category, double> shares;
    std::size_t categorisable = 0;
    std::size_t total_units = 0;
    double uncategorised_exhibition_share = 0.0;
    std::map<std::string, std::size_t> uncategorised_reasons;
};

struct CorpusClassification {
    EquityCriterion criterion;
    ClassifyOptions options;
    GroupBy group_by = GroupBy::institution;
    std::vector<ClassificationResult> results; // sorted by unit_id
    ClassificationSummary summary;
};

CorpusClassification classify_corpus(const corpus::CleanCorpus& corpus,
                                     const EquityCriterion& criterion, GroupBy group_by,
                                     const ClassifyOptions& options = {});

// Decision boundary in k for a range of n, one row per category edge
// (used for Fig.-2d-style plots downstream).
struct BoundaryRow {
    long long n;
    std::string edge; // man_over_max_k, null_min_k, null_max_k, woman_over_min_k
    long long k;
};

std::vector<BoundaryRow> decision_boundary(const EquityCriterion& criterion,
                                           const std::vector<long long>& n_values,
                                           const ClassifyOptions& options = {});

// Default n grid: 1..100 dense, then geometric up to max_n.
std::vector<long long> boundary_grid(long long max_n);

void write_classification_csv(const std::string& path,
                              const std::vector<ClassificationResult>& results,
                              const std::string& config_digest);
std::vector<ClassificationResult> load_classification_csv(const std::string& path);

void write_boundary_csv(const std::string& path, CriterionKind kind,
                        const std::vector<BoundaryRow>& rows, const std::string& config_digest);

} // namespace artequity::bf
