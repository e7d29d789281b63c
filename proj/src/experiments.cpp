#include "cvbft/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

#include "cvbft/csv.hpp"
#include "cvbft/error.hpp"
#include "cvbft/random.hpp"

namespace cvbft {

namespace {

// Below this acceptance probability the baseline draw switches from
// rejection sampling to inverse-CDF sampling of the Poisson tail.
constexpr double kRejectionFloor = 1e-3;
// Tail probabilities below this are not representable with useful precision.
constexpr double kDegenerateTail = 1e-300;

double log_poisson_pmf(double mean, std::int64_t k) {
    const double kd = static_cast<double>(k);
    return -mean + kd * std::log(mean) - std::lgamma(kd + 1.0);
}

std::int64_t feasibility_threshold(std::int64_t faulty) { return 3 * faulty + 1; }

// Baseline N conditioned on N >= threshold.
struct BaselineDraw {
    std::int64_t n = 0;
    std::int64_t resamples = 0;
};

BaselineDraw draw_baseline(const Scenario& s, double acceptance, Rng& rng) {
    const auto threshold = feasibility_threshold(s.base_faulty);
    if (s.fixed_n) {
        return {*s.fixed_n, 0};
    }
    if (acceptance >= kRejectionFloor) {
        BaselineDraw d;
        while ((d.n = draw_poisson(s.base_intensity, rng)) < threshold) {
            ++d.resamples;
        }
        return d;
    }
    std::uniform_real_distribution<double> unit{0.0, 1.0};
    const double target = unit(rng) * acceptance;
    double cumulative = 0.0;
    std::int64_t k = threshold;
    while (true) {
        cumulative += std::exp(log_poisson_pmf(s.base_intensity, k));
        if (cumulative >= target) {
            return {k, 0};
        }
        const double next = std::exp(log_poisson_pmf(s.base_intensity, k + 1));
        if (next == 0.0 && static_cast<double>(k) > s.base_intensity) {
            return {k, 0};
        }
        ++k;
    }
}

double baseline_acceptance(const Scenario& s) {
    if (s.fixed_n) {
        return 1.0;
    }
    return poisson_upper_tail(s.base_intensity, feasibility_threshold(s.base_faulty));
}

}  // namespace

void Scenario::validate() const {
    if (!(base_intensity >= 0.0) || !std::isfinite(base_intensity)) {
        throw DomainError("base intensity must be finite and >= 0");
    }
    if (base_faulty < 0) {
        throw DomainError("base faulty count must be >= 0");
    }
    legit_churn.validate();
    faulty_churn.validate();
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("epsilon must lie in (0, 1)");
    }
    if (trials < 1) {
        throw DomainError("trials must be >= 1");
    }
    if (max_slots < 1) {
        throw DomainError("max_slots must be >= 1");
    }
    if (fixed_n && *fixed_n < feasibility_threshold(base_faulty)) {
        throw ScenarioDegenerateError("fixed N " + std::to_string(*fixed_n) +
                                      " is below the baseline BFT threshold 3f+1");
    }
    if (baseline_acceptance(*this) < kDegenerateTail) {
        throw ScenarioDegenerateError(
            "baseline feasibility P(N >= 3f+1) is numerically zero for this scenario");
    }
}

double poisson_upper_tail(double mean, std::int64_t threshold) {
    if (threshold <= 0) {
        return 1.0;
    }
    if (mean <= 0.0) {
        return 0.0;
    }
    if (static_cast<double>(threshold) <= mean) {
        double cdf = 0.0;
        for (std::int64_t k = 0; k < threshold; ++k) {
            cdf += std::exp(log_poisson_pmf(mean, k));
        }
        return std::max(0.0, 1.0 - cdf);
    }
    // Terms decrease monotonically beyond the mode; sum until negligible.
    double tail = 0.0;
    for (std::int64_t k = threshold;; ++k) {
        const double term = std::exp(log_poisson_pmf(mean, k));
        tail += term;
        if (term <= tail * 1e-17 || term == 0.0) {
            break;
        }
    }
    return tail;
}

TrialRecord run_latency_trial(const Scenario& s, std::int64_t index) {
    auto rng = stream_rng(s.seed, static_cast<std::uint64_t>(index));
    const auto baseline = draw_baseline(s, baseline_acceptance(s), rng);
    const auto legit = sample_churn_delta(s.legit_churn, rng);
    const auto faulty = sample_churn_delta(s.faulty_churn, rng);

    TrialRecord r;
    r.trial = index;
    r.n = baseline.n;
    r.f = s.base_faulty;
    r.resamples = baseline.resamples;
    r.delta_legit = legit.net;
    r.delta_faulty = faulty.net;
    r.n_eff = r.n + r.delta_legit + r.delta_faulty;
    r.f_eff = std::max<std::int64_t>(0, r.f + r.delta_faulty);

    if (r.n_eff <= r.f_eff || r.n_eff < 3 * r.f_eff + 1) {
        r.status = TrialStatus::Infeasible;
        return r;
    }
    if (const auto latency = replay_latency(r, s.epsilon, s.max_slots)) {
        r.status = TrialStatus::Converged;
        r.latency_slots = *latency;
    } else {
        r.status = TrialStatus::NonConvergent;
    }
    return r;
}

ScenarioOutcome run_latency_mc(const Scenario& scenario, unsigned workers) {
    scenario.validate();
    const auto trials = scenario.trials;
    std::vector<TrialRecord> log(static_cast<std::size_t>(trials));

    workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::min<std::int64_t>(trials, 256)));
    if (workers == 1) {
        for (std::int64_t i = 0; i < trials; ++i) {
            log[static_cast<std::size_t>(i)] = run_latency_trial(scenario, i);
        }
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::int64_t i = w; i < trials; i += workers) {
                    log[static_cast<std::size_t>(i)] = run_latency_trial(scenario, i);
                }
            });
        }
    }

    ScenarioOutcome outcome;
    for (const auto& r : log) {
        switch (r.status) {
            case TrialStatus::Converged: outcome.latencies.push_back(r.latency_slots); break;
            case TrialStatus::Infeasible: ++outcome.infeasible_trials; break;
            case TrialStatus::NonConvergent: ++outcome.nonconvergent_trials; break;
        }
    }
    outcome.per_trial_log = std::move(log);
    return outcome;
}

Latency replay_latency(const TrialRecord& record, double epsilon, std::int64_t max_slots) {
    const double p_eff = static_cast<double>(record.f_eff) / static_cast<double>(record.n_eff);
    return latency_closed_form({record.n_eff, p_eff, epsilon, max_slots});
}

std::optional<double> ScenarioOutcome::median_latency() const {
    if (latencies.empty()) {
        return std::nullopt;
    }
    std::vector<std::int64_t> sorted = latencies;
    std::sort(sorted.begin(), sorted.end());
    const auto n = sorted.size();
    if (n % 2 == 1) {
        return static_cast<double>(sorted[n / 2]);
    }
    return 0.5 * static_cast<double>(sorted[n / 2 - 1] + sorted[n / 2]);
}

std::optional<double> ScenarioOutcome::mean_latency() const {
    if (latencies.empty()) {
        return std::nullopt;
    }
    const auto sum = std::accumulate(latencies.begin(), latencies.end(), std::int64_t{0});
    return static_cast<double>(sum) / static_cast<double>(latencies.size());
}

std::vector<GossipTrace> dissemination_curves(std::span<const std::int64_t> n_values,
                                              double fault_prob, double epsilon) {
    std::vector<GossipTrace> traces;
    traces.reserve(n_values.size());
    for (auto n : n_values) {
        traces.push_back(mean_field_trace({n, fault_prob, epsilon, kDefaultMaxSlots}));
    }
    return traces;
}

double slot_duration_ms(SlotProfile profile) {
    switch (profile) {
        case SlotProfile::CV2X_50: return 50.0;
        case SlotProfile::CV2X_100: return 100.0;
        case SlotProfile::CV2X_200: return 200.0;
        case SlotProfile::DSRC_100: return 100.0;
    }
    return 0.0;
}

double slots_to_ms(std::int64_t latency_slots, SlotProfile profile) {
    if (latency_slots < 0) {
        throw DomainError("latency must be >= 0 slots");
    }
    return static_cast<double>(latency_slots) * slot_duration_ms(profile);
}

std::string to_string(SlotProfile profile) {
    switch (profile) {
        case SlotProfile::CV2X_50: return "CV2X_50";
        case SlotProfile::CV2X_100: return "CV2X_100";
        case SlotProfile::CV2X_200: return "CV2X_200";
        case SlotProfile::DSRC_100: return "DSRC_100";
    }
    return "unknown";
}

SlotProfile parse_slot_profile(const std::string& text) {
    for (auto p : kAllSlotProfiles) {
        if (to_string(p) == text) {
            return p;
        }
    }
    throw DomainError("unknown slot profile '" + text + "'");
}

void write_trial_log_csv(std::ostream& out, const ScenarioOutcome& outcome) {
    out << "trial,N,f,delta_N,delta_f,N_eff,f_eff,latency_slots\n";
    for (const auto& r : outcome.per_trial_log) {
        out << r.trial << ',' << r.n << ',' << r.f << ',' << r.delta_legit << ','
            << r.delta_faulty << ',' << r.n_eff << ',' << r.f_eff << ',';
        if (r.status == TrialStatus::Converged) {
            out << r.latency_slots;
        }
        out << '\n';
    }
}

void write_summary_header(std::ostream& out) {
    out << "scenario,trials,converged,infeasible,nonconvergent,median_latency,mean_latency\n";
}

void write_summary_row(std::ostream& out, const std::string& scenario,
                       const ScenarioOutcome& outcome) {
    auto opt = [](std::optional<double> v) { return v ? csv::format_double(*v) : std::string{}; };
    out << scenario << ',' << outcome.trials() << ',' << outcome.converged_trials() << ','
        << outcome.infeasible_trials << ',' << outcome.nonconvergent_trials << ','
        << opt(outcome.median_latency()) << ',' << opt(outcome.mean_latency()) << '\n';
}

}  // namespace cvbft
