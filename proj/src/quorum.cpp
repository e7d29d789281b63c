#include "cvbft/quorum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "cvbft/error.hpp"

namespace cvbft {

QuorumRequirement required_nodes(const QuorumInput& input) {
    if (input.faulty < 0) {
        throw DomainError("faulty count must be >= 0");
    }
    const auto raw = 3 * input.faulty - input.delta_legit + input.delta_faulty + 1;
    return {std::max<std::int64_t>(1, raw)};
}

bool is_bft_feasible(std::int64_t total, std::int64_t faulty) {
    if (total < 0 || faulty < 0) {
        throw DomainError("node counts must be >= 0");
    }
    if (faulty > total) {
        throw DomainError("faulty count exceeds total count");
    }
    return total >= 3 * faulty + 1;
}

std::vector<QuorumDraw> sample_required_nodes(double faulty_mean, const ChurnMeans& legit_churn,
                                              const ChurnMeans& faulty_churn, std::int64_t trials,
                                              Rng& rng) {
    if (trials < 1) {
        throw DomainError("trials must be >= 1");
    }
    if (!(faulty_mean >= 0.0) || !std::isfinite(faulty_mean)) {
        throw DomainError("faulty mean must be finite and >= 0");
    }
    legit_churn.validate();
    faulty_churn.validate();

    std::vector<QuorumDraw> draws;
    draws.reserve(static_cast<std::size_t>(trials));
    for (std::int64_t i = 0; i < trials; ++i) {
        QuorumDraw d;
        d.faulty = draw_poisson(faulty_mean, rng);
        d.delta_legit = sample_churn_delta(legit_churn, rng).net;
        d.delta_faulty = sample_churn_delta(faulty_churn, rng).net;
        d.n_min = required_nodes({d.faulty, d.delta_legit, d.delta_faulty}).n_min;
        draws.push_back(d);
    }
    return draws;
}

double expected_required_nodes(double faulty_mean, const ChurnMeans& legit_churn,
                               const ChurnMeans& faulty_churn) {
    return 3.0 * faulty_mean - legit_churn.net_mean() + faulty_churn.net_mean() + 1.0;
}

std::vector<std::int64_t> n_min_values(std::span<const QuorumDraw> draws) {
    std::vector<std::int64_t> out;
    out.reserve(draws.size());
    for (const auto& d : draws) {
        out.push_back(d.n_min);
    }
    return out;
}

Dispersion dispersion_diagnostic(std::span<const std::int64_t> samples) {
    if (samples.size() < 2) {
        throw InsufficientDataError("dispersion needs at least two samples");
    }
    // Two-pass for a stable variance.
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (auto s : samples) {
        sum += static_cast<double>(s);
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (auto s : samples) {
        const double d = static_cast<double>(s) - mean;
        ss += d * d;
    }
    const double variance = ss / (n - 1.0);
    const double index =
        mean == 0.0 ? std::numeric_limits<double>::quiet_NaN() : variance / mean;
    return {mean, variance, index};
}

void write_quorum_csv(std::ostream& out, std::span<const QuorumDraw> draws) {
    out << "trial,f,delta_N,delta_f,n_min\n";
    std::int64_t trial = 0;
    for (const auto& d : draws) {
        out << trial++ << ',' << d.faulty << ',' << d.delta_legit << ',' << d.delta_faulty << ','
            << d.n_min << '\n';
    }
}

}  // namespace cvbft
