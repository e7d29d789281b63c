#include <doctest.h>

#include <sstream>

#include "cvbft/csv.hpp"
#include "cvbft/error.hpp"
#include "cvbft/experiments.hpp"

using namespace cvbft;

namespace {

Scenario base(double intensity, std::int64_t faulty, std::int64_t trials) {
    Scenario s;
    s.base_intensity = intensity;
    s.base_faulty = faulty;
    s.trials = trials;
    s.seed = 7;
    return s;
}

}  // namespace

TEST_CASE("deterministic N without churn gives one latency") {
    auto s = base(0.0, 18, 200);
    s.fixed_n = 55;
    const auto outcome = run_latency_mc(s);
    const auto expected = latency_closed_form({55, 18.0 / 55.0});
    REQUIRE(expected);
    REQUIRE(outcome.converged_trials() == 200);
    for (auto l : outcome.latencies) CHECK(l == *expected);
}

TEST_CASE("accounting, replay and determinism") {
    auto s = base(25.0, 6, 3000);
    s.legit_churn = {1.0, 3.0};
    s.faulty_churn = {4.0, 1.0};
    const auto a = run_latency_mc(s, 1);
    const auto b = run_latency_mc(s, 3);
    CHECK(a.converged_trials() + a.infeasible_trials + a.nonconvergent_trials == s.trials);
    CHECK(a.infeasible_trials > 0);
    CHECK(a.per_trial_log == b.per_trial_log);
    CHECK(a.latencies == b.latencies);
    for (const auto& r : a.per_trial_log) {
        CHECK(r.n >= 3 * s.base_faulty + 1);
        CHECK(r.n_eff == r.n + r.delta_legit + r.delta_faulty);
        CHECK(r.f_eff == std::max<std::int64_t>(0, r.f + r.delta_faulty));
        if (r.status == TrialStatus::Converged) {
            CHECK(replay_latency(r, s.epsilon) == Latency{r.latency_slots});
        } else {
            CHECK(r.status == TrialStatus::Infeasible);
            CHECK(r.n_eff < 3 * r.f_eff + 1);
        }
    }
}

TEST_CASE("different seeds differ") {
    auto s = base(25.0, 2, 200);
    s.legit_churn = {3.0, 3.0};
    const auto a = run_latency_mc(s);
    s.seed = 8;
    const auto b = run_latency_mc(s);
    CHECK_FALSE(a.per_trial_log == b.per_trial_log);
}

TEST_CASE("rejection sampling logs resample counts") {
    auto s = base(25.0, 6, 2000);  // P(N >= 19) ~ 0.91
    const auto outcome = run_latency_mc(s);
    std::int64_t resamples = 0;
    for (const auto& r : outcome.per_trial_log) resamples += r.resamples;
    CHECK(resamples > 0);
    CHECK(resamples < 1000);
}

TEST_CASE("rare feasibility uses the conditional tail") {
    // P(Poisson(25) >= 55) is about 1.5e-7.
    CHECK(poisson_upper_tail(25.0, 55) == doctest::Approx(1.506234070609415e-07).epsilon(1e-9));
    CHECK(poisson_upper_tail(25.0, 19) == doctest::Approx(0.9079591408011427).epsilon(1e-12));
    CHECK(poisson_upper_tail(25.0, 0) == 1.0);
    CHECK(poisson_upper_tail(0.0, 1) == 0.0);

    const auto outcome = run_latency_mc(base(25.0, 18, 2000));
    for (const auto& r : outcome.per_trial_log) CHECK(r.n >= 55);
    // The conditional law concentrates just above the threshold.
    std::int64_t at_threshold = 0;
    for (const auto& r : outcome.per_trial_log) at_threshold += r.n == 55 ? 1 : 0;
    CHECK(at_threshold > 600);
}

TEST_CASE("degenerate scenarios") {
    CHECK_THROWS_AS(run_latency_mc(base(0.0, 1, 10)), ScenarioDegenerateError);
    auto s = base(10.0, 5, 10);
    s.fixed_n = 10;
    CHECK_THROWS_AS(run_latency_mc(s), ScenarioDegenerateError);
    CHECK_THROWS_AS(run_latency_mc(base(10.0, 1, 0)), DomainError);
}

TEST_CASE("dissemination curves") {
    const std::vector<std::int64_t> ns{5, 45, 85, 125};
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const auto traces = dissemination_curves(ns, p);
        REQUIRE(traces.size() == 4);
        for (std::size_t i = 1; i < traces.size(); ++i) {
            CHECK(*traces[i].latency_slots <= *traces[i - 1].latency_slots);
        }
    }
    const std::vector<std::int64_t> five{5};
    CHECK(dissemination_curves(five, 0.5).front().latency_slots == Latency{7});
    CHECK(dissemination_curves({}, 0.5).empty());
}

TEST_CASE("slots to milliseconds") {
    CHECK(slots_to_ms(5, SlotProfile::CV2X_50) == 250.0);
    CHECK(slots_to_ms(5, SlotProfile::CV2X_100) == 500.0);
    CHECK(slots_to_ms(5, SlotProfile::CV2X_200) == 1000.0);
    CHECK(slots_to_ms(5, SlotProfile::DSRC_100) == 500.0);
    for (auto p : kAllSlotProfiles) {
        CHECK(slots_to_ms(0, p) == 0.0);
        CHECK(parse_slot_profile(to_string(p)) == p);
    }
    CHECK_THROWS_AS(parse_slot_profile("LTE"), DomainError);
}

TEST_CASE("median and mean") {
    ScenarioOutcome o;
    CHECK_FALSE(o.median_latency());
    o.latencies = {3, 1, 2, 10};
    CHECK(*o.median_latency() == 2.5);
    CHECK(*o.mean_latency() == 4.0);
    o.latencies = {3, 1, 2};
    CHECK(*o.median_latency() == 2.0);
}

TEST_CASE("trial log and summary CSV") {
    ScenarioOutcome o;
    TrialRecord ok{0, 20, 6, 1, 0, 21, 6, TrialStatus::Converged, 1, 0};
    TrialRecord bad{1, 19, 6, -3, 2, 18, 8, TrialStatus::Infeasible, 0, 0};
    o.per_trial_log = {ok, bad};
    o.latencies = {1};
    o.infeasible_trials = 1;
    std::ostringstream log;
    write_trial_log_csv(log, o);
    CHECK(log.str() ==
          "trial,N,f,delta_N,delta_f,N_eff,f_eff,latency_slots\n0,20,6,1,0,21,6,1\n1,19,6,-3,2,18,8,\n");
    std::ostringstream summary;
    write_summary_header(summary);
    write_summary_row(summary, "s", o);
    CHECK(summary.str() ==
          "scenario,trials,converged,infeasible,nonconvergent,median_latency,mean_latency\n"
          "s,2,1,1,0,1,1\n");
}

TEST_CASE("CSV doubles round-trip exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, 0.0013810679320049757}) {
        CHECK(std::stod(csv::format_double(v)) == v);
    }
}
