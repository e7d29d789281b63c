#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cvbft {

struct ScaledSample {
    std::vector<double> values;  // all strictly inside (0, 1)
    double lower = 0.0;
    double upper = 1.0;
};

/// Maps samples into (0,1) using bounds padded by half a unit on each side.
ScaledSample min_max_scale(std::span<const double> samples);

struct BetaShape {
    double alpha = 1.0;
    double beta = 1.0;
};

/// Beta shape with the given mean and variance. Throws DegenerateVarianceError
/// for zero variance and MomentInfeasibleError when variance >= mean (1 - mean).
BetaShape beta_from_moments(double mean, double variance);

/// Method-of-moments beta fit on samples inside (0,1); unbiased sample variance.
BetaShape fit_beta_mom(std::span<const double> scaled);

/// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double x, double a, double b);

/// Inverse of regularized_incomplete_beta in x, by bisection.
double beta_quantile(double probability, double a, double b);

/// Beta probability density at x.
double beta_pdf(double x, double a, double b);

/// Two-sided Kolmogorov-Smirnov distance against Beta(a, b). Descriptive only.
double ks_statistic(std::span<const double> scaled, double a, double b);

struct BetaFit {
    double alpha = 1.0;
    double beta = 1.0;
    double lower = 0.0;
    double upper = 1.0;
    double ks_stat = 0.0;
    std::size_t n_samples = 0;

    /// Density of the fit mapped back to the unscaled axis.
    double pdf(double x) const;
};

/// Scale, fit and score in one step.
BetaFit fit_beta(std::span<const double> samples);

struct Histogram {
    std::vector<double> bin_edges;
    std::vector<std::int64_t> counts;

    std::int64_t total() const;
};

/// Equal-width bins over [min, max], last bin right-closed. All-equal input
/// yields one unit-width bin centered on the value.
Histogram make_histogram(std::span<const double> samples, std::size_t bins);

/// Writes the header `scenario,alpha,beta,lower,upper,ks_stat,n_samples`.
void write_fit_header(std::ostream& out);
void write_fit_row(std::ostream& out, const std::string& scenario, const BetaFit& fit);

}  // namespace cvbft
