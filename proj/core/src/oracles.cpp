#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "artequity/synth.hpp"

// Test oracles. These deliberately share no computation with bftest or
// exnet: the Bayes factor comes from adaptive quadrature of the marginal
// likelihood, the centrality from a dense eigendecomposition.

namespace artequity::synth {

namespace {

// c * ln(x) with the 0 * ln(0) = 0 convention.
double power_term(double c, double x) {
    if (c == 0.0) return 0.0;
    return c * std::log(x);
}

struct Kernel {
    double ca; // exponent of p
    double cb; // exponent of (1-p)
    double scale;

    double operator()(double p) const {
        const double g = power_term(ca, p) + power_term(cb, 1.0 - p);
        return std::exp(g - scale);
    }
};

// 15-point Gauss-Kronrod pair (QUADPACK dqk15 abscissae/weights).
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.0};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct GkResult {
    double integral;
    double error;
};

GkResult gauss_kronrod_15(const Kernel& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kronrod = kWgk[7] * f(center);
    double gauss = kWg[3] * f(center);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[i] * sum;
        if (i % 2 == 1) gauss += kWg[i / 2] * sum;
    }
    return {kronrod * half, std::fabs(kronrod - gauss) * half};
}

double integrate(const Kernel& f, double a, double b, double eps, int depth = 50) {
    const GkResult r = gauss_kronrod_15(f, a, b);
    if (r.error <= eps) return r.integral;
    if (depth <= 0) {
        throw NumericalError("oracle quadrature did not converge (local error " +
                             format_double(r.error) + " over budget " + format_double(eps) +
                             ")");
    }
    const double m = 0.5 * (a + b);
    return integrate(f, a, m, 0.5 * eps, depth - 1) +
           integrate(f, m, b, 0.5 * eps, depth - 1);
}

// ln of the integral of p^ca (1-p)^cb over [lo, hi], scaled around the
// kernel mode and split there so each piece is monotone.
double ln_kernel_integral(double ca, double cb, double lo, double hi) {
    if (!(hi > lo)) throw UsageError("oracle quadrature: empty interval");
    double mode;
    if (ca + cb > 0.0) {
        mode = std::clamp(ca / (ca + cb), lo, hi);
    } else {
        mode = 0.5 * (lo + hi);
    }
    const double scale = power_term(ca, mode) + power_term(cb, 1.0 - mode);
    const Kernel f{ca, cb, scale};

    // Rough size first, then refine with an absolute budget tied to it.
    double rough = 0.0;
    {
        const int kProbe = 64;
        double prev = f(lo);
        for (int i = 1; i <= kProbe; ++i) {
            const double x = lo + (hi - lo) * i / kProbe;
            const double fx = f(x);
            rough += 0.5 * (prev + fx) * (hi - lo) / kProbe;
            prev = fx;
        }
        rough = std::max(rough, std::numeric_limits<double>::min());
    }
    const double eps = rough * 1e-12;
    double total = 0.0;
    if (mode > lo) total += integrate(f, lo, mode, eps * 0.5);
    if (mode < hi) total += integrate(f, mode, hi, eps * 0.5);
    if (!(total > 0.0)) {
        throw NumericalError("oracle quadrature returned a nonpositive integral");
    }
    return scale + std::log(total);
}

} // namespace

double oracle_bf(long long n, long long k, double p0, const bf::BetaPrior& prior, Sided sided) {
    if (n < 1 || n > 2000) throw UsageError("oracle_bf requires 1 <= n <= 2000");
    if (k < 0 || k > n) throw UsageError("oracle_bf requires 0 <= k <= n");
    if (!(p0 > 0.0 && p0 < 1.0)) throw UsageError("oracle_bf requires p0 in (0,1)");
    if (!(prior.a >= 1.0 && prior.b >= 1.0)) {
        throw UsageError("oracle_bf quadrature supports priors with a,b >= 1");
    }
    double lo = 0.0, hi = 1.0;
    if (sided == Sided::below) hi = p0;
    if (sided == Sided::above) lo = p0;

    const double ca = static_cast<double>(k) + prior.a - 1.0;
    const double cb = static_cast<double>(n - k) + prior.b - 1.0;
    const double ln_numerator = ln_kernel_integral(ca, cb, lo, hi);
    const double ln_prior_mass = ln_kernel_integral(prior.a - 1.0, prior.b - 1.0, lo, hi);
    const double ln_null = power_term(static_cast<double>(k), p0) +
                           power_term(static_cast<double>(n - k), 1.0 - p0);
    return ln_numerator - ln_prior_mass - ln_null;
}

std::vector<double> oracle_centrality(const net::CoExhibitionNetwork& network, double damping) {
    const std::size_t n = network.nodes.size();
    if (n == 0 || n > 50) throw UsageError("oracle_centrality requires 1..50 nodes");
    if (!(damping > 0.0 && damping <= 1.0)) throw UsageError("damping must lie in (0,1]");
    const auto ni = static_cast<Eigen::Index>(n);

    Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(ni, ni);
    for (const auto& e : network.edges) {
        adjacency(static_cast<Eigen::Index>(e.source), static_cast<Eigen::Index>(e.target)) +=
            static_cast<double>(e.weight);
    }
    // Row-stochastic transitions; dangling rows spread uniformly.
    Eigen::MatrixXd transition(ni, ni);
    for (Eigen::Index i = 0; i < ni; ++i) {
        const double row_sum = adjacency.row(i).sum();
        if (row_sum > 0.0) {
            transition.row(i) = adjacency.row(i) / row_sum;
        } else {
            transition.row(i).setConstant(1.0 / static_cast<double>(n));
        }
    }
    const Eigen::MatrixXd teleported =
        damping * transition.transpose() +
        Eigen::MatrixXd::Constant(ni, ni, (1.0 - damping) / static_cast<double>(n));

    Eigen::EigenSolver<Eigen::MatrixXd> solver(teleported);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("oracle_centrality eigendecomposition failed");
    }
    Eigen::Index dominant = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < ni; ++i) {
        const double magnitude = std::abs(solver.eigenvalues()(i));
        if (magnitude > best) {
            best = magnitude;
            dominant = i;
        }
    }
    Eigen::VectorXd v = solver.eigenvectors().col(dominant).real();
    // Perron vector: orient nonnegative, scale to max 1.
    double max_abs = 0.0;
    Eigen::Index arg_max = 0;
    for (Eigen::Index i = 0; i < ni; ++i) {
        if (std::fabs(v(i)) > max_abs) {
            max_abs = std::fabs(v(i));
            arg_max = i;
        }
    }
    if (v(arg_max) < 0.0) v = -v;
    v /= v.maxCoeff();
    return {v.data(), v.data() + v.size()};
}

} // namespace artequity::synth
