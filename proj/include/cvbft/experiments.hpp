#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvbft/churn.hpp"
#include "cvbft/gossip.hpp"

namespace cvbft {

struct Scenario {
    std::string name = "scenario";
    double base_intensity = 0.0;
    std::int64_t base_faulty = 0;
    ChurnMeans legit_churn;
    ChurnMeans faulty_churn;
    double epsilon = kDefaultEpsilon;
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    std::int64_t max_slots = kDefaultMaxSlots;
    /// Replaces the Poisson baseline draw with a fixed N (regression mode).
    std::optional<std::int64_t> fixed_n;

    void validate() const;
};

enum class TrialStatus { Converged, Infeasible, NonConvergent };

struct TrialRecord {
    std::int64_t trial = 0;
    std::int64_t n = 0;
    std::int64_t f = 0;
    std::int64_t delta_legit = 0;
    std::int64_t delta_faulty = 0;
    std::int64_t n_eff = 0;
    std::int64_t f_eff = 0;
    TrialStatus status = TrialStatus::Converged;
    std::int64_t latency_slots = 0;  // meaningful only when Converged
    std::int64_t resamples = 0;      // rejected baseline draws

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct ScenarioOutcome {
    std::vector<std::int64_t> latencies;  // converged trials, in trial order
    std::int64_t infeasible_trials = 0;
    std::int64_t nonconvergent_trials = 0;
    std::vector<TrialRecord> per_trial_log;

    std::int64_t converged_trials() const { return static_cast<std::int64_t>(latencies.size()); }
    std::int64_t trials() const { return static_cast<std::int64_t>(per_trial_log.size()); }
    /// Median of converged latencies (mean of the middle pair for even counts).
    std::optional<double> median_latency() const;
    std::optional<double> mean_latency() const;
};

/// Runs one trial of the latency pipeline. Trial `index` uses its own
/// stream derived from the scenario seed.
TrialRecord run_latency_trial(const Scenario& scenario, std::int64_t index);

/// Monte Carlo latency distribution; `workers` > 1 fans trials out to threads.
/// The outcome is identical for every worker count.
ScenarioOutcome run_latency_mc(const Scenario& scenario, unsigned workers = 1);

/// Recomputes the closed-form latency of a logged trial.
Latency replay_latency(const TrialRecord& record, double epsilon,
                       std::int64_t max_slots = kDefaultMaxSlots);

/// P(Poisson(mean) >= threshold).
double poisson_upper_tail(double mean, std::int64_t threshold);

/// One mean-field trace per N, each run to its own convergence slot.
std::vector<GossipTrace> dissemination_curves(std::span<const std::int64_t> n_values,
                                              double fault_prob, double epsilon = kDefaultEpsilon);

enum class SlotProfile { CV2X_50, CV2X_100, CV2X_200, DSRC_100 };

inline constexpr std::array<SlotProfile, 4> kAllSlotProfiles{
    SlotProfile::CV2X_50, SlotProfile::CV2X_100, SlotProfile::CV2X_200, SlotProfile::DSRC_100};

double slot_duration_ms(SlotProfile profile);
double slots_to_ms(std::int64_t latency_slots, SlotProfile profile);
std::string to_string(SlotProfile profile);
/// Accepts the enumerator spelling, e.g. "CV2X_100". Throws DomainError otherwise.
SlotProfile parse_slot_profile(const std::string& text);

/// Writes `trial,N,f,delta_N,delta_f,N_eff,f_eff,latency_slots`; latency is
/// left empty for infeasible and nonconvergent trials.
void write_trial_log_csv(std::ostream& out, const ScenarioOutcome& outcome);

/// Writes the header `scenario,trials,converged,infeasible,nonconvergent,median_latency,mean_latency`.
void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const std::string& scenario,
                       const ScenarioOutcome& outcome);

}  // namespace cvbft
