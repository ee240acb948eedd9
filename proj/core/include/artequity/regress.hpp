#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "artequity/careers.hpp"
#include "artequity/corpus.hpp"

namespace artequity::regress {

enum class ModelId { m1 = 1, m2 = 2, m3 = 3, m4 = 4 };

// One artist-level observation before encoding.
struct ObsInput {
    std::string artist_id;
    Gender gender = Gender::unknown;
    careers::CoGender co_gender = careers::CoGender::unassigned;
    double exhibitions_per_year = 0.0;
    double career_length = 0.0;
    bool auctioned = false;
};

// ln + min-max transform constants, fixed at encoding time and carried by
// the fit for prediction.
struct Transform {
    double ln_min = 0.0;
    double ln_max = 1.0;

    double apply(double x) const;
    bool in_range(double x) const;
};

struct Design {
    ModelId model = ModelId::m1;
    std::vector<std::string> columns; // first is "intercept"
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    Transform exhibitions_transform;
    Transform career_transform;
    std::size_t excluded_unassigned = 0;  // rows without a co-exhibition gender
    std::size_t excluded_nonpositive = 0; // log-undefined numeric features
    std::vector<std::string> dropped_columns; // degenerate min = max
};

// Builds the design matrix. All models restrict the sample to rows with an
// assigned co-exhibition gender so information criteria stay comparable.
Design encode(const std::vector<ObsInput>& rows, ModelId model);

struct FitOptions {
    double tolerance = 1e-8; // L-inf gradient stopping rule
    int max_iterations = 100;
    double separation_norm = 30.0; // |beta|_inf beyond this means separation
    std::vector<double>* log_likelihood_trace = nullptr; // per-iteration, for tests
};

struct Coefficient {
    std::string name;
    double coef = 0.0;
    double se = 0.0;
    double odds_ratio = 1.0; // exp(coef)
    double z = 0.0;
    double p_value = 1.0; // nominal two-sided Wald
    double ci_low = 0.0;  // coef - 1.96 se
    double ci_high = 0.0; // coef + 1.96 se
};

// Derives odds ratio, z, p, and the 95% Wald interval from (coef, se).
Coefficient wald_coefficient(std::string name, double coef, double se);

struct RegressionFit {
    ModelId model = ModelId::m1;
    std::vector<Coefficient> coefficients;
    std::vector<std::string> columns;
    double log_likelihood = 0.0;
    double bic = 0.0;   // k ln(N) - 2 lnL, k = all estimated parameters
    long long n_obs = 0;
    int df = 0;         // parameters excluding the intercept
    Transform exhibitions_transform;
    Transform career_transform;
    int iterations = 0;
    double gradient_max_abs = 0.0;
};

// Newton-Raphson with step-halving; standard errors from the inverse
// observed information at the optimum. Throws NumericalError on suspected
// perfect separation or non-convergence; DataError on rank deficiency,
// naming the collinear columns.
RegressionFit fit(const Design& design, const FitOptions& options = {});

double log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& beta);
Eigen::VectorXd log_likelihood_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                        const Eigen::VectorXd& beta);

struct Prediction {
    double probability = 0.0;
    bool extrapolated = false; // a raw feature fell outside the training range
};

Prediction predict(const RegressionFit& fit, double exhibitions_per_year, double career_length,
                   Gender gender, careers::CoGender co_gender);

struct ComparisonRow {
    ModelId model;
    long long n_obs;
    int df;
    double log_likelihood;
    double bic;
    double delta_bic; // vs the first fit
};

std::vector<ComparisonRow> compare(const std::vector<RegressionFit>& fits);

void write_fit_json(const std::string& path, const RegressionFit& fit,
                    const std::string& config_digest);
RegressionFit load_fit_json(const std::string& path);
void write_comparison_json(const std::string& path, const std::vector<ComparisonRow>& rows,
                           const std::string& config_digest);

} // namespace artequity::regress
