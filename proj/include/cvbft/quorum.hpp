#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cvbft/churn.hpp"
#include "cvbft/random.hpp"

namespace cvbft {

struct QuorumInput {
    std::int64_t faulty = 0;
    std::int64_t delta_legit = 0;   // net legitimate inflow over the window
    std::int64_t delta_faulty = 0;  // net faulty inflow over the window
};

struct QuorumRequirement {
    std::int64_t n_min = 1;
};

/// Minimum node count keeping BFT under churn:
/// max(1, 3f - delta_legit + delta_faulty + 1). Reduces to 3f + 1 without churn.
QuorumRequirement required_nodes(const QuorumInput& input);

/// True iff total >= 3 * faulty + 1. Throws DomainError if faulty > total.
bool is_bft_feasible(std::int64_t total, std::int64_t faulty);

struct QuorumDraw {
    std::int64_t faulty = 0;
    std::int64_t delta_legit = 0;
    std::int64_t delta_faulty = 0;
    std::int64_t n_min = 1;
};

/// Monte Carlo law of the required node count: f ~ Poisson(faulty_mean) and
/// both deltas drawn as exact Skellam variables via sample_churn_delta.
std::vector<QuorumDraw> sample_required_nodes(double faulty_mean, const ChurnMeans& legit_churn,
                                              const ChurnMeans& faulty_churn, std::int64_t trials,
                                              Rng& rng);

/// Mean of n_min under the sampling law above (ignoring the clamp at 1).
double expected_required_nodes(double faulty_mean, const ChurnMeans& legit_churn,
                               const ChurnMeans& faulty_churn);

std::vector<std::int64_t> n_min_values(std::span<const QuorumDraw> draws);

struct Dispersion {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double index = 0.0;     // variance / mean; NaN when mean == 0
};

/// Throws InsufficientDataError for fewer than two samples.
Dispersion dispersion_diagnostic(std::span<const std::int64_t> samples);

/// Writes `trial,f,delta_N,delta_f,n_min`.
void write_quorum_csv(std::ostream& out, std::span<const QuorumDraw> draws);

}  // namespace cvbft
