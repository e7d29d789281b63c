#include "cvbft/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "cvbft/csv.hpp"
#include "cvbft/error.hpp"

namespace cvbft {

namespace {

void check_shape(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("beta shape parameters must be positive and finite");
    }
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Continued fraction for I_x(a,b), modified Lentz. Converges fast for
// x < (a + 1) / (a + b + 2).
double incomplete_beta_cf(double x, double a, double b) {
    constexpr int kMaxIter = 10'000;
    constexpr double kEps = 1e-16;
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
        if (std::fabs(del - 1.0) < kEps) {
            return h;
        }
    }
    return h;
}

double mean_of(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

ScaledSample min_max_scale(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw InsufficientDataError("scaling needs at least two samples");
    }
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    if (*lo == *hi) {
        throw DegenerateVarianceError("all samples are equal");
    }
    ScaledSample out;
    out.lower = *lo - 0.5;
    out.upper = *hi + 0.5;
    const double width = out.upper - out.lower;
    out.values.reserve(samples.size());
    for (double x : samples) {
        out.values.push_back((x - out.lower) / width);
    }
    return out;
}

BetaShape beta_from_moments(double mean, double variance) {
    if (!(mean > 0.0 && mean < 1.0)) {
        throw DomainError("beta mean must lie strictly inside (0, 1)");
    }
    if (variance == 0.0) {
        throw DegenerateVarianceError("sample variance is zero");
    }
    const double bound = mean * (1.0 - mean);
    if (!(variance < bound)) {
        throw MomentInfeasibleError("sample variance is not below mean * (1 - mean)");
    }
    const double common = bound / variance - 1.0;
    return {mean * common, (1.0 - mean) * common};
}

BetaShape fit_beta_mom(std::span<const double> scaled) {
    if (scaled.size() < 2) {
        throw InsufficientDataError("beta fit needs at least two samples");
    }
    for (double x : scaled) {
        if (!(x > 0.0 && x < 1.0)) {
            throw DomainError("beta fit samples must lie strictly inside (0, 1)");
        }
    }
    const double m = mean_of(scaled);
    double ss = 0.0;
    for (double x : scaled) {
        ss += (x - m) * (x - m);
    }
    return beta_from_moments(m, ss / static_cast<double>(scaled.size() - 1));
}

double regularized_incomplete_beta(double x, double a, double b) {
    check_shape(a, b);
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("incomplete beta argument must lie in [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    double result = 0.0;
    if (x < (a + 1.0) / (a + b + 2.0)) {
        result = front * incomplete_beta_cf(x, a, b) / a;
    } else {
        result = 1.0 - front * incomplete_beta_cf(1.0 - x, b, a) / b;
    }
    return std::clamp(result, 0.0, 1.0);
}

double beta_quantile(double probability, double a, double b) {
    check_shape(a, b);
    if (!(probability >= 0.0 && probability <= 1.0)) {
        throw DomainError("probability must lie in [0, 1]");
    }
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (regularized_incomplete_beta(mid, a, b) < probability ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double beta_pdf(double x, double a, double b) {
    check_shape(a, b);
    if (!(x >= 0.0 && x <= 1.0)) {
        return 0.0;
    }
    const double inf = std::numeric_limits<double>::infinity();
    if (x == 0.0) {
        if (a < 1.0) return inf;
        return a == 1.0 ? std::exp(-log_beta(a, b)) : 0.0;
    }
    if (x == 1.0) {
        if (b < 1.0) return inf;
        return b == 1.0 ? std::exp(-log_beta(a, b)) : 0.0;
    }
    return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b));
}

double ks_statistic(std::span<const double> scaled, double a, double b) {
    if (scaled.empty()) {
        throw InsufficientDataError("KS statistic needs at least one sample");
    }
    check_shape(a, b);
    std::vector<double> sorted(scaled.begin(), scaled.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    double d = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double cdf = regularized_incomplete_beta(sorted[i], a, b);
        const double below = static_cast<double>(i) / n;  // F_n(x-)
        const double at = static_cast<double>(j) / n;     // F_n(x)
        d = std::max({d, std::fabs(below - cdf), std::fabs(at - cdf)});
        i = j;
    }
    return d;
}

double BetaFit::pdf(double x) const {
    const double width = upper - lower;
    return beta_pdf((x - lower) / width, alpha, beta) / width;
}

BetaFit fit_beta(std::span<const double> samples) {
    const auto scaled = min_max_scale(samples);
    const auto shape = fit_beta_mom(scaled.values);
    BetaFit fit;
    fit.alpha = shape.alpha;
    fit.beta = shape.beta;
    fit.lower = scaled.lower;
    fit.upper = scaled.upper;
    fit.ks_stat = ks_statistic(scaled.values, shape.alpha, shape.beta);
    fit.n_samples = samples.size();
    return fit;
}

std::int64_t Histogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

Histogram make_histogram(std::span<const double> samples, std::size_t bins) {
    if (bins == 0) {
        throw DomainError("histogram needs at least one bin");
    }
    if (samples.empty()) {
        throw InsufficientDataError("histogram needs at least one sample");
    }
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it;
    const double hi = *hi_it;

    Histogram h;
    if (lo == hi) {
        h.bin_edges = {lo - 0.5, lo + 0.5};
        h.counts = {static_cast<std::int64_t>(samples.size())};
        return h;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    h.bin_edges.reserve(bins + 1);
    for (std::size_t i = 0; i < bins; ++i) {
        h.bin_edges.push_back(lo + width * static_cast<double>(i));
    }
    h.bin_edges.push_back(hi);
    h.counts.assign(bins, 0);
    for (double x : samples) {
        auto idx = static_cast<std::size_t>((x - lo) / width);
        h.counts[std::min(idx, bins - 1)] += 1;
    }
    return h;
}

void write_fit_header(std::ostream& out) {
    out << "scenario,alpha,beta,lower,upper,ks_stat,n_samples\n";
}

void write_fit_row(std::ostream& out, const std::string& scenario, const BetaFit& fit) {
    out << scenario << ',' << csv::format_double(fit.alpha) << ',' << csv::format_double(fit.beta)
        << ',' << csv::format_double(fit.lower) << ',' << csv::format_double(fit.upper) << ','
        << csv::format_double(fit.ks_stat) << ',' << fit.n_samples << '\n';
}

}  // namespace cvbft
