#include "artequity/regress.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace artequity::regress {

namespace {

constexpr double kWaldZ = 1.96; // 95% interval half-width in SE units

double sigmoid(double eta) {
    if (eta >= 0.0) {
        return 1.0 / (1.0 + std::exp(-eta));
    }
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

double softplus(double eta) {
    return std::max(eta, 0.0) + std::log1p(std::exp(-std::fabs(eta)));
}

double normal_two_sided_p(double z) {
    return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

} // namespace

Coefficient wald_coefficient(std::string name, double coef, double se) {
    Coefficient c;
    c.name = std::move(name);
    c.coef = coef;
    c.se = se;
    c.odds_ratio = std::exp(coef);
    c.z = se > 0.0 ? coef / se : 0.0;
    c.p_value = normal_two_sided_p(c.z);
    c.ci_low = coef - kWaldZ * se;
    c.ci_high = coef + kWaldZ * se;
    return c;
}

double Transform::apply(double x) const {
    if (ln_max == ln_min) return 0.0;
    return (std::log(x) - ln_min) / (ln_max - ln_min);
}

bool Transform::in_range(double x) const {
    const double lx = std::log(x);
    return lx >= ln_min && lx <= ln_max;
}

namespace {

struct DummyBlock {
    std::vector<std::string> names;
    // encodes a row into 0/1 values matching `names`
    std::vector<double> encode(Gender g, careers::CoGender co) const;
    ModelId model;
};

std::vector<double> DummyBlock::encode(Gender g, careers::CoGender co) const {
    std::vector<double> v(names.size(), 0.0);
    auto set = [&](const std::string& name) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) v[i] = 1.0;
        }
    };
    switch (model) {
    case ModelId::m1:
        break;
    case ModelId::m2:
        if (g == Gender::woman) set("woman");
        break;
    case ModelId::m3:
        if (g == Gender::woman) set("woman");
        if (co == careers::CoGender::co_neutral) set("co_neutral");
        if (co == careers::CoGender::co_woman) set("co_woman");
        break;
    case ModelId::m4: {
        const bool woman = g == Gender::woman;
        // baseline: man x co_man -> all zero
        if (woman && co == careers::CoGender::co_neutral) set("woman_co_neutral");
        if (woman && co == careers::CoGender::co_man) set("woman_co_man");
        if (woman && co == careers::CoGender::co_woman) set("woman_co_woman");
        if (!woman && co == careers::CoGender::co_neutral) set("man_co_neutral");
        if (!woman && co == careers::CoGender::co_woman) set("man_co_woman");
        break;
    }
    }
    return v;
}

DummyBlock dummy_block(ModelId model) {
    DummyBlock block;
    block.model = model;
    switch (model) {
    case ModelId::m1: break;
    case ModelId::m2: block.names = {"woman"}; break;
    case ModelId::m3: block.names = {"woman", "co_neutral", "co_woman"}; break;
    case ModelId::m4:
        block.names = {"woman_co_neutral", "woman_co_man", "woman_co_woman", "man_co_neutral",
                       "man_co_woman"};
        break;
    }
    return block;
}

} // namespace

Design encode(const std::vector<ObsInput>& rows, ModelId model) {
    Design design;
    design.model = model;

    std::vector<const ObsInput*> sample;
    sample.reserve(rows.size());
    for (const auto& r : rows) {
        if (r.co_gender == careers::CoGender::unassigned) {
            ++design.excluded_unassigned;
            continue;
        }
        if (!(r.exhibitions_per_year > 0.0) || !(r.career_length > 0.0)) {
            ++design.excluded_nonpositive;
            continue;
        }
        sample.push_back(&r);
    }
    if (sample.empty()) throw DataError("regression sample is empty after restrictions");

    auto make_transform = [&](auto get) {
        Transform t;
        t.ln_min = std::log(get(*sample.front()));
        t.ln_max = t.ln_min;
        for (const auto* r : sample) {
            const double lx = std::log(get(*r));
            t.ln_min = std::min(t.ln_min, lx);
            t.ln_max = std::max(t.ln_max, lx);
        }
        return t;
    };
    design.exhibitions_transform =
        make_transform([](const ObsInput& r) { return r.exhibitions_per_year; });
    design.career_transform = make_transform([](const ObsInput& r) { return r.career_length; });

    const bool exh_degenerate = design.exhibitions_transform.ln_max ==
                                design.exhibitions_transform.ln_min;
    const bool career_degenerate =
        design.career_transform.ln_max == design.career_transform.ln_min;
    if (exh_degenerate) design.dropped_columns.push_back("exhibitions_per_year");
    if (career_degenerate) design.dropped_columns.push_back("career_length");

    const DummyBlock block = dummy_block(model);
    design.columns = {"intercept"};
    if (!exh_degenerate) design.columns.push_back("exhibitions_per_year");
    if (!career_degenerate) design.columns.push_back("career_length");
    design.columns.insert(design.columns.end(), block.names.begin(), block.names.end());

    const auto n = static_cast<Eigen::Index>(sample.size());
    const auto p = static_cast<Eigen::Index>(design.columns.size());
    design.X.resize(n, p);
    design.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const ObsInput& r = *sample[static_cast<std::size_t>(i)];
        Eigen::Index c = 0;
        design.X(i, c++) = 1.0;
        if (!exh_degenerate) {
            design.X(i, c++) = design.exhibitions_transform.apply(r.exhibitions_per_year);
        }
        if (!career_degenerate) {
            design.X(i, c++) = design.career_transform.apply(r.career_length);
        }
        for (const double v : block.encode(r.gender, r.co_gender)) design.X(i, c++) = v;
        design.y(i) = r.auctioned ? 1.0 : 0.0;
    }

    // Dummy levels never observed in the sample leave all-zero columns;
    // drop them (the usual unused-level treatment) rather than failing the
    // rank check meant for genuine collinearity.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < p; ++j) {
        const bool is_dummy =
            std::find(block.names.begin(), block.names.end(),
                      design.columns[static_cast<std::size_t>(j)]) != block.names.end();
        if (is_dummy && design.X.col(j).sum() == 0.0) {
            design.dropped_columns.push_back(design.columns[static_cast<std::size_t>(j)]);
        } else {
            keep.push_back(j);
        }
    }
    if (keep.size() != static_cast<std::size_t>(p)) {
        Eigen::MatrixXd reduced(n, static_cast<Eigen::Index>(keep.size()));
        std::vector<std::string> names;
        for (std::size_t c = 0; c < keep.size(); ++c) {
            reduced.col(static_cast<Eigen::Index>(c)) = design.X.col(keep[c]);
            names.push_back(design.columns[static_cast<std::size_t>(keep[c])]);
        }
        design.X = std::move(reduced);
        design.columns = std::move(names);
    }
    return design;
}

double log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = X * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        ll += y(i) * eta(i) - softplus(eta(i));
    }
    return ll;
}

Eigen::VectorXd log_likelihood_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                        const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd mu(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) mu(i) = sigmoid(eta(i));
    return X.transpose() * (y - mu);
}

RegressionFit fit(const Design& design, const FitOptions& options) {
    const Eigen::MatrixXd& X = design.X;
    const Eigen::VectorXd& y = design.y;
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();

    {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        qr.setThreshold(1e-10);
        if (qr.rank() < p) {
            const auto perm = qr.colsPermutation().indices();
            std::string names;
            for (Eigen::Index i = qr.rank(); i < p; ++i) {
                if (!names.empty()) names += ", ";
                names += design.columns[static_cast<std::size_t>(perm(i))];
            }
            throw DataError("design matrix is rank deficient; collinear columns: " + names);
        }
    }

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    double ll = log_likelihood(X, y, beta);
    if (options.log_likelihood_trace) options.log_likelihood_trace->push_back(ll);
    int iter = 0;
    double grad_norm = 0.0;
    Eigen::MatrixXd hessian(p, p);
    for (; iter < options.max_iterations; ++iter) {
        const Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd mu(n), w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            mu(i) = sigmoid(eta(i));
            w(i) = mu(i) * (1.0 - mu(i));
        }
        const Eigen::VectorXd grad = X.transpose() * (y - mu);
        grad_norm = grad.lpNorm<Eigen::Infinity>();
        if (grad_norm < options.tolerance) break;

        hessian = X.transpose() * w.asDiagonal() * X;
        Eigen::LDLT<Eigen::MatrixXd> solver(hessian);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("logistic fit: Hessian factorization failed");
        }
        const Eigen::VectorXd direction = solver.solve(grad);

        // Step-halving keeps the log-likelihood non-decreasing up to
        // floating-point rounding of the likelihood sum itself.
        const double slack = 1e-12 * (1.0 + std::fabs(ll));
        double step = 1.0;
        Eigen::VectorXd candidate = beta + direction;
        double candidate_ll = log_likelihood(X, y, candidate);
        while (candidate_ll < ll - slack && step > 1e-12) {
            step *= 0.5;
            candidate = beta + step * direction;
            candidate_ll = log_likelihood(X, y, candidate);
        }
        beta = candidate;
        ll = candidate_ll;
        if (options.log_likelihood_trace) options.log_likelihood_trace->push_back(ll);

        if (beta.lpNorm<Eigen::Infinity>() > options.separation_norm) {
            throw NumericalError(
                "logistic fit: coefficients diverged (|beta| > " +
                format_double(options.separation_norm) +
                "), which indicates perfect separation in the data");
        }
    }
    if (grad_norm >= options.tolerance) {
        throw NumericalError("logistic fit did not converge in " +
                             std::to_string(options.max_iterations) + " iterations (|grad| = " +
                             format_double(grad_norm) + ")");
    }
    // A vanishing deviance means the data are perfectly separated and the
    // MLE sits at infinity; the gradient underflows before |beta| grows.
    if (ll > -1e-6) {
        throw NumericalError(
            "logistic fit: zero deviance at the optimum, the outcomes are perfectly "
            "separated and the MLE does not exist");
    }

    // Observed information at the optimum.
    {
        const Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = sigmoid(eta(i));
            w(i) = mu * (1.0 - mu);
        }
        hessian = X.transpose() * w.asDiagonal() * X;
    }
    const Eigen::MatrixXd covariance = hessian.inverse();

    RegressionFit out;
    out.model = design.model;
    out.columns = design.columns;
    out.exhibitions_transform = design.exhibitions_transform;
    out.career_transform = design.career_transform;
    out.n_obs = n;
    out.df = static_cast<int>(p) - 1;
    out.log_likelihood = ll;
    out.bic = static_cast<double>(p) * std::log(static_cast<double>(n)) - 2.0 * ll;
    out.iterations = iter;
    out.gradient_max_abs = grad_norm;
    out.coefficients.reserve(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        out.coefficients.push_back(wald_coefficient(design.columns[static_cast<std::size_t>(j)],
                                                    beta(j), std::sqrt(covariance(j, j))));
    }
    return out;
}

Prediction predict(const RegressionFit& fit, double exhibitions_per_year, double career_length,
                   Gender gender, careers::CoGender co_gender) {
    if (!(exhibitions_per_year > 0.0) || !(career_length > 0.0)) {
        throw UsageError("predict requires positive numeric features");
    }
    Prediction pred;
    pred.extrapolated = !fit.exhibitions_transform.in_range(exhibitions_per_year) ||
                        !fit.career_transform.in_range(career_length);

    const DummyBlock block = dummy_block(fit.model);
    const std::vector<double> dummies = block.encode(gender, co_gender);
    double eta = 0.0;
    for (const auto& c : fit.coefficients) {
        double x = 0.0;
        if (c.name == "intercept") x = 1.0;
        else if (c.name == "exhibitions_per_year") x = fit.exhibitions_transform.apply(exhibitions_per_year);
        else if (c.name == "career_length") x = fit.career_transform.apply(career_length);
        else {
            for (std::size_t i = 0; i < block.names.size(); ++i) {
                if (block.names[i] == c.name) x = dummies[i];
            }
        }
        eta += c.coef * x;
    }
    pred.probability = sigmoid(eta);
    return pred;
}

std::vector<ComparisonRow> compare(const std::vector<RegressionFit>& fits) {
    if (fits.empty()) return {};
    std::vector<ComparisonRow> rows;
    for (const auto& f : fits) {
        if (f.n_obs != fits.front().n_obs) {
            throw DataError("model comparison requires a common observation set (N " +
                            std::to_string(f.n_obs) + " vs " +
                            std::to_string(fits.front().n_obs) + ")");
        }
        rows.push_back({f.model, f.n_obs, f.df, f.log_likelihood, f.bic,
                        f.bic - fits.front().bic});
    }
    return rows;
}

void write_fit_json(const std::string& path, const RegressionFit& fit,
                    const std::string& config_digest) {
    nlohmann::json doc;
    doc["meta"] = {{"config_digest", config_digest}};
    doc["model"] = static_cast<int>(fit.model);
    doc["columns"] = fit.columns;
    doc["n_obs"] = fit.n_obs;
    doc["df"] = fit.df;
    doc["log_likelihood"] = fit.log_likelihood;
    doc["bic"] = fit.bic;
    doc["iterations"] = fit.iterations;
    doc["gradient_max_abs"] = fit.gradient_max_abs;
    doc["transforms"] = {
        {"exhibitions_per_year",
         {{"ln_min", fit.exhibitions_transform.ln_min},
          {"ln_max", fit.exhibitions_transform.ln_max}}},
        {"career_length",
         {{"ln_min", fit.career_transform.ln_min}, {"ln_max", fit.career_transform.ln_max}}}};
    nlohmann::json coefs = nlohmann::json::array();
    for (const auto& c : fit.coefficients) {
        coefs.push_back({{"name", c.name},
                         {"coef", c.coef},
                         {"odds_ratio", c.odds_ratio},
                         {"se", c.se},
                         {"z", c.z},
                         {"p_value", c.p_value},
                         {"ci_low", c.ci_low},
                         {"ci_high", c.ci_high}});
    }
    doc["coefficients"] = coefs;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out << doc.dump(2) << "\n";
}

RegressionFit load_fit_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    RegressionFit fit;
    fit.model = static_cast<ModelId>(doc.at("model").get<int>());
    fit.columns = doc.at("columns").get<std::vector<std::string>>();
    fit.n_obs = doc.at("n_obs").get<long long>();
    fit.df = doc.at("df").get<int>();
    fit.log_likelihood = doc.at("log_likelihood").get<double>();
    fit.bic = doc.at("bic").get<double>();
    fit.iterations = doc.at("iterations").get<int>();
    fit.gradient_max_abs = doc.at("gradient_max_abs").get<double>();
    fit.exhibitions_transform = {
        doc.at("transforms").at("exhibitions_per_year").at("ln_min").get<double>(),
        doc.at("transforms").at("exhibitions_per_year").at("ln_max").get<double>()};
    fit.career_transform = {doc.at("transforms").at("career_length").at("ln_min").get<double>(),
                            doc.at("transforms").at("career_length").at("ln_max").get<double>()};
    for (const auto& j : doc.at("coefficients")) {
        Coefficient c;
        c.name = j.at("name").get<std::string>();
        c.coef = j.at("coef").get<double>();
        c.odds_ratio = j.at("odds_ratio").get<double>();
        c.se = j.at("se").get<double>();
        c.z = j.at("z").get<double>();
        c.p_value = j.at("p_value").get<double>();
        c.ci_low = j.at("ci_low").get<double>();
        c.ci_high = j.at("ci_high").get<double>();
        fit.coefficients.push_back(std::move(c));
    }
    return fit;
}

void write_comparison_json(const std::string& path, const std::vector<ComparisonRow>& rows,
                           const std::string& config_digest) {
    nlohmann::json doc;
    doc["meta"] = {{"config_digest", config_digest}};
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"model", static_cast<int>(r.model)},
                       {"n_obs", r.n_obs},
                       {"df", r.df},
                       {"log_likelihood", r.log_likelihood},
                       {"bic", r.bic},
                       {"delta_bic", r.delta_bic}});
    }
    doc["models"] = arr;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out << doc.dump(2) << "\n";
}

} // namespace artequity::regress
