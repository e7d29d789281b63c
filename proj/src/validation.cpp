#include "cvbft/validation.hpp"

#include <cmath>
#include <sstream>

#include "cvbft/churn.hpp"
#include "cvbft/experiments.hpp"
#include "cvbft/gossip.hpp"
#include "cvbft/quorum.hpp"
#include "cvbft/spatial.hpp"
#include "cvbft/stats.hpp"

namespace cvbft {

namespace {

struct Moments {
    double n = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        n += 1.0;
        sum += x;
        sum_sq += x * x;
    }
    double mean() const { return sum / n; }
    double variance() const { return (sum_sq - sum * sum / n) / (n - 1.0); }
    double std_error() const { return std::sqrt(variance() / n); }
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

class Suite {
public:
    explicit Suite(const std::function<void(const CheckResult&)>& cb) : cb_(cb) {}

    void check(std::string name, bool passed, std::string detail) {
        results_.push_back({std::move(name), passed, std::move(detail)});
        if (cb_) cb_(results_.back());
    }

    /// |observed - expected| <= 3 * se
    void within_3se(std::string name, double observed, double expected, double se) {
        const bool ok = std::fabs(observed - expected) <= 3.0 * se;
        check(std::move(name), ok,
              "observed " + fmt(observed) + ", expected " + fmt(expected) + ", 3se " + fmt(3 * se));
    }

    std::vector<CheckResult> take() { return std::move(results_); }

private:
    const std::function<void(const CheckResult&)>& cb_;
    std::vector<CheckResult> results_;
};

void spatial_checks(Suite& suite, std::uint64_t seed) {
    constexpr int kSeeds = 10'000;
    Moments counts;
    Moments xs;
    double faulty = 0.0;
    for (int i = 0; i < kSeeds; ++i) {
        auto rng = stream_rng(seed, i);
        const auto snap = sample_snapshot(100.0, 0.25, Region{1.0}, rng);
        const auto c = snapshot_counts(snap);
        counts.add(static_cast<double>(c.total));
        faulty += static_cast<double>(c.faulty);
        for (const auto& node : snap.nodes) xs.add(node.x_m);
    }
    const double frac = faulty / counts.sum;
    suite.within_3se("spatial.thinning_fraction", frac, 0.25,
                     std::sqrt(0.25 * 0.75 / counts.sum));
    const double index = counts.variance() / counts.mean();
    suite.check("spatial.count_dispersion", index >= 0.95 && index <= 1.05,
                "dispersion index " + fmt(index));
    suite.within_3se("spatial.uniform_x", xs.mean(), 0.5, std::sqrt(1.0 / 12.0 / xs.n));

    auto a = stream_rng(seed, 99);
    auto b = stream_rng(seed, 99);
    const auto sa = sample_snapshot(50.0, 0.3, Region{20.0}, a);
    const auto sb = sample_snapshot(50.0, 0.3, Region{20.0}, b);
    suite.check("spatial.determinism", sa.nodes == sb.nodes, "equal seeds");
}

void churn_checks(Suite& suite, std::uint64_t seed) {
    constexpr int kSeeds = 10'000;
    const std::pair<double, double> pairs[] = {{4, 4}, {5, 0}, {2, 7}, {10, 3}};
    int pair_index = 0;
    for (auto [lam_in, lam_out] : pairs) {
        Moments net;
        auto rng = stream_rng(seed, 1000 + pair_index++);
        for (int i = 0; i < kSeeds; ++i) {
            net.add(static_cast<double>(sample_churn_delta(lam_in, lam_out, rng).net));
        }
        const std::string tag = "(" + fmt(lam_in) + "," + fmt(lam_out) + ")";
        suite.within_3se("churn.skellam_mean" + tag, net.mean(), lam_in - lam_out, net.std_error());
        const double var = lam_in + lam_out;
        suite.check("churn.skellam_variance" + tag, std::fabs(net.variance() - var) <= 0.1 * var,
                    "variance " + fmt(net.variance()) + " vs " + fmt(var));
    }

    const auto config = ChurnConfig::with_default_warmup(4.0, 8.0, 1.0);
    Moments departures;
    Moments mm1_net;
    for (int i = 0; i < kSeeds; ++i) {
        auto rng = stream_rng(seed, 20'000 + i);
        const auto d = simulate_mm1_window(config, rng);
        departures.add(static_cast<double>(d.departures));
        mm1_net.add(static_cast<double>(d.net));
    }
    suite.within_3se("churn.burke_departure_mean", departures.mean(), 4.0, departures.std_error());
    const double index = departures.variance() / departures.mean();
    suite.check("churn.burke_departure_dispersion", index >= 0.9 && index <= 1.1,
                "dispersion index " + fmt(index));

    Moments count_net;
    auto rng = stream_rng(seed, 30'000);
    for (int i = 0; i < kSeeds; ++i) {
        count_net.add(static_cast<double>(sample_churn_delta(4.0, 4.0, rng).net));
    }
    const double se = std::hypot(mm1_net.std_error(), count_net.std_error());
    suite.within_3se("churn.mode_agreement", mm1_net.mean() - count_net.mean(), 0.0, se);
}

void quorum_checks(Suite& suite, std::uint64_t seed) {
    bool classic = true;
    for (std::int64_t f = 0; f <= 100; ++f) {
        classic = classic && required_nodes({f, 0, 0}).n_min == 3 * f + 1;
    }
    suite.check("quorum.classic_reduction", classic, "f in [0, 100]");

    bool monotone = true;
    for (std::int64_t f = 0; f < 20; ++f) {
        for (std::int64_t dn = -10; dn < 10; ++dn) {
            for (std::int64_t df = -10; df < 10; ++df) {
                const auto base = required_nodes({f, dn, df}).n_min;
                monotone = monotone && required_nodes({f + 1, dn, df}).n_min >= base &&
                           required_nodes({f, dn, df + 1}).n_min >= base &&
                           required_nodes({f, dn + 1, df}).n_min <= base;
            }
        }
    }
    suite.check("quorum.monotonicity", monotone, "grid f<20, |delta|<=10");

    const ChurnMeans legit{3.0, 1.0};
    const ChurnMeans faulty{2.0, 1.0};
    auto rng = stream_rng(seed, 40'000);
    const auto draws = sample_required_nodes(25.0, legit, faulty, 100'000, rng);
    std::vector<std::int64_t> shifted;
    shifted.reserve(draws.size());
    for (const auto& d : draws) shifted.push_back(d.n_min - 1);
    const auto disp = dispersion_diagnostic(shifted);
    const double expected = expected_required_nodes(25.0, legit, faulty) - 1.0;
    suite.within_3se("quorum.mean_law", disp.mean, expected,
                     std::sqrt(disp.variance / static_cast<double>(shifted.size())));
    // Index of dispersion has standard error ~ sqrt(2 / (n - 1)) under Poisson.
    const double noise = 3.0 * std::sqrt(2.0 / static_cast<double>(shifted.size() - 1));
    suite.check("quorum.overdispersion", disp.index > 1.05 && disp.index > 1.0 + noise,
                "dispersion index " + fmt(disp.index));
}

// Beyond the horizon counts as infinitely slow.
double slots_or_inf(Latency latency) {
    return latency ? static_cast<double>(*latency) : HUGE_VAL;
}

void gossip_checks(Suite& suite, std::uint64_t seed) {
    const std::int64_t ns[] = {1, 5, 45, 85, 125};
    const double ps[] = {0.1, 0.25, 0.5, 0.75, 0.9};
    bool equal = true;
    bool sane = true;
    for (auto n : ns) {
        for (auto p : ps) {
            const GossipParams params{n, p};
            const auto trace = mean_field_trace(params);
            equal = equal && trace.latency_slots == latency_closed_form(params);
            const double decay = params.decay();
            for (std::size_t t = 0; t < trace.uninformed.size(); ++t) {
                const double r = trace.informed_at(t);
                sane = sane && r >= 0.0 && r <= 1.0;
                if (t > 0) sane = sane && r >= trace.informed_at(t - 1);
                if (t + 1 < trace.uninformed.size()) {
                    sane = sane && trace.uninformed[t] * decay == trace.uninformed[t + 1];
                }
            }
        }
    }
    suite.check("gossip.closed_form_equivalence", equal, "5x5 grid at eps=1e-5");
    suite.check("gossip.trace_sanity", sane, "bounds, monotone r_t, exact recurrence");

    bool mono_n = true;
    bool mono_p = true;
    for (int pi = 1; pi < 100; ++pi) {
        const double p = pi / 100.0;
        for (std::int64_t n = 1; n < 200; ++n) {
            const double here = slots_or_inf(latency_closed_form({n, p}));
            mono_n = mono_n && slots_or_inf(latency_closed_form({n + 1, p})) <= here;
            if (pi < 99) {
                mono_p = mono_p && slots_or_inf(latency_closed_form({n, (pi + 1) / 100.0})) >= here;
            }
        }
    }
    suite.check("gossip.monotone_in_n", mono_n, "N in [1,200], p_f in (0,1)");
    suite.check("gossip.monotone_in_p", mono_p, "N in [1,200], p_f in (0,1)");

    const GossipParams params{100, 0.25};
    const auto mean_field = mean_field_trace(params);
    const auto slots = mean_field.uninformed.size();
    std::vector<double> sums(slots, 0.0);
    constexpr int kSeeds = 10'000;
    for (int i = 0; i < kSeeds; ++i) {
        auto rng = stream_rng(seed, 50'000 + i);
        const auto trace = agent_based_trace(params, SenderPolicy::AllCapable, rng);
        for (std::size_t t = 0; t < slots; ++t) {
            sums[t] += t < trace.uninformed.size() ? trace.uninformed[t] : 0.0;
        }
    }
    bool agree = true;
    std::string detail;
    for (std::size_t t = 0; t < slots; ++t) {
        const double expected = mean_field.uninformed[t];
        const double observed = sums[t] / kSeeds;
        const double se = std::sqrt(expected * (1.0 - expected) / (100.0 * kSeeds));
        agree = agree && std::fabs(observed - expected) <= 3.0 * se;
        detail += "t=" + std::to_string(t) + ": " + fmt(observed) + " vs " + fmt(expected) + "; ";
    }
    suite.check("gossip.agent_mean_field_agreement", agree, detail);
}

void experiment_checks(Suite& suite, std::uint64_t seed) {
    Scenario s;
    s.name = "validate";
    s.base_intensity = 25.0;
    s.base_faulty = 2;
    s.legit_churn = {3.0, 2.0};
    s.faulty_churn = {2.0, 1.0};
    s.trials = 5'000;
    s.seed = seed;
    const auto serial = run_latency_mc(s, 1);
    const auto parallel = run_latency_mc(s, 4);

    bool replay = true;
    for (const auto& r : serial.per_trial_log) {
        if (r.status == TrialStatus::Converged) {
            replay = replay && replay_latency(r, s.epsilon, s.max_slots) == r.latency_slots;
        }
    }
    suite.check("experiments.replay_integrity", replay, "closed form on every logged trial");
    suite.check("experiments.seed_determinism",
                serial.per_trial_log == parallel.per_trial_log && serial.latencies == parallel.latencies,
                "1 worker vs 4 workers");
    suite.check("experiments.accounting",
                serial.converged_trials() + serial.infeasible_trials + serial.nonconvergent_trials ==
                    s.trials,
                "converged + infeasible + nonconvergent = trials");
}

void stats_checks(Suite& suite) {
    bool round_trip = true;
    for (double a : {0.5, 1.0, 2.0, 5.0, 13.0}) {
        for (double b : {0.5, 1.0, 2.0, 5.0, 13.0}) {
            const double m = a / (a + b);
            const double v = a * b / ((a + b) * (a + b) * (a + b + 1.0));
            const auto shape = beta_from_moments(m, v);
            round_trip = round_trip && std::fabs(shape.alpha - a) <= 1e-9 * a &&
                         std::fabs(shape.beta - b) <= 1e-9 * b;
        }
    }
    suite.check("stats.moment_round_trip", round_trip, "exact moments recover shape");

    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = i / 1000.0;
        worst = std::max(worst, std::fabs(regularized_incomplete_beta(x, 1.0, 1.0) - x));
        worst = std::max(worst, std::fabs(regularized_incomplete_beta(x, 2.5, 1.0) - std::pow(x, 2.5)));
        worst = std::max(worst,
                         std::fabs(regularized_incomplete_beta(x, 1.0, 3.5) - (1.0 - std::pow(1.0 - x, 3.5))));
    }
    suite.check("stats.ibeta_closed_forms", worst <= 1e-8, "max abs error " + fmt(worst));

    bool monotone = true;
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
        for (double b : {0.5, 1.0, 2.0, 5.0}) {
            double prev = 0.0;
            for (int i = 0; i <= 1000; ++i) {
                const double v = regularized_incomplete_beta(i / 1000.0, a, b);
                monotone = monotone && v >= prev;
                prev = v;
            }
        }
    }
    suite.check("stats.ibeta_monotone", monotone, "1000-point grid, shapes {0.5,1,2,5}^2");

    constexpr int n = 1000;
    std::vector<double> grid;
    for (int i = 1; i <= n; ++i) grid.push_back(beta_quantile((i - 0.5) / n, 2.0, 5.0));
    const double d = ks_statistic(grid, 2.0, 5.0);
    suite.check("stats.ks_quantile_bound", d <= 0.5 / n + 1e-6, "D = " + fmt(d));
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed,
                                             const std::function<void(const CheckResult&)>& on_result) {
    Suite suite(on_result);
    spatial_checks(suite, seed);
    churn_checks(suite, seed);
    quorum_checks(suite, seed);
    gossip_checks(suite, seed);
    experiment_checks(suite, seed);
    stats_checks(suite);
    return suite.take();
}

}  // namespace cvbft
