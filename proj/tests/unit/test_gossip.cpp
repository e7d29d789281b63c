#include <doctest.h>

#include <array>
#include <cmath>
#include <sstream>

#include "cvbft/error.hpp"
#include "cvbft/gossip.hpp"

using namespace cvbft;

namespace {

constexpr std::array<std::int64_t, 5> kNs{1, 5, 45, 85, 125};
constexpr std::array<double, 5> kPs{0.1, 0.25, 0.5, 0.75, 0.9};

// Latencies on the grid above at eps = 1e-5, by enumerating t until
// p^(1 + t N (1-p)) <= eps in 40-digit arithmetic. Row per N, column per p.
constexpr std::array<std::array<std::int64_t, 5>, 5> kGridLatency{{
    {5, 10, 32, 157, 1083},
    {1, 2, 7, 32, 217},
    {1, 1, 1, 4, 25},
    {1, 1, 1, 2, 13},
    {1, 1, 1, 2, 9},
}};

// Independent route: r_bar_t = p^(1 + t N (1 - p)) in extended precision.
std::int64_t enumerate_latency(std::int64_t n, double p, double eps) {
    const long double lp = std::log(static_cast<long double>(p));
    const long double le = std::log(static_cast<long double>(eps));
    for (std::int64_t t = 0;; ++t) {
        if (lp * (1.0L + t * n * (1.0L - p)) <= le) return t;
    }
}

}  // namespace

TEST_CASE("mean-field trace at N=5, p_f=0.25") {
    const auto trace = mean_field_trace({5, 0.25});
    REQUIRE(trace.uninformed.size() == 3);
    CHECK(trace.uninformed[0] == 0.25);
    CHECK(trace.informed_at(0) == 0.75);
    CHECK(trace.uninformed[1] == doctest::Approx(1.381067932004975e-3).epsilon(1e-12));
    REQUIRE(trace.latency_slots);
    CHECK(*trace.latency_slots == 2);
}

TEST_CASE("no faults means immediate convergence") {
    for (auto n : kNs) {
        const auto trace = mean_field_trace({n, 0.0});
        CHECK(trace.informed_at(0) == 1.0);
        CHECK(trace.latency_slots == Latency{0});
        CHECK(latency_closed_form({n, 0.0}) == Latency{0});
    }
}

TEST_CASE("r_bar_0 equals p_f") {
    for (auto n : kNs) {
        for (auto p : kPs) {
            CHECK(mean_field_trace({n, p}).uninformed.front() == p);
        }
    }
}

TEST_CASE("closed-form spot values") {
    CHECK(latency_closed_form({5, 0.5}) == Latency{7});
    CHECK(latency_closed_form({5, 0.25}) == Latency{2});
    CHECK(latency_closed_form({7, 1e-6}) == Latency{0});
}

TEST_CASE("closed form, iteration and enumeration agree on the grid") {
    for (std::size_t i = 0; i < kNs.size(); ++i) {
        for (std::size_t j = 0; j < kPs.size(); ++j) {
            const GossipParams params{kNs[i], kPs[j]};
            CAPTURE(params.n_total);
            CAPTURE(params.fault_prob);
            const auto closed = latency_closed_form(params);
            REQUIRE(closed);
            CHECK(*closed == kGridLatency[i][j]);
            CHECK(enumerate_latency(kNs[i], kPs[j], 1e-5) == kGridLatency[i][j]);
            CHECK(mean_field_trace(params).latency_slots == closed);
        }
    }
}

TEST_CASE("trace sanity") {
    for (auto n : kNs) {
        for (auto p : kPs) {
            const GossipParams params{n, p};
            const auto trace = mean_field_trace(params);
            const double decay = params.decay();
            for (std::size_t t = 0; t < trace.uninformed.size(); ++t) {
                CHECK(trace.informed_at(t) >= 0.0);
                CHECK(trace.informed_at(t) <= 1.0);
                if (t > 0) CHECK(trace.informed_at(t) >= trace.informed_at(t - 1));
                if (t + 1 < trace.uninformed.size()) {
                    CHECK(trace.uninformed[t] * decay == trace.uninformed[t + 1]);
                }
            }
        }
    }
}

TEST_CASE("closed-form latency is monotone in N and p_f") {
    for (int pi = 1; pi <= 95; ++pi) {
        const double p = pi / 100.0;
        for (std::int64_t n = 1; n < 150; ++n) {
            const auto here = latency_closed_form({n, p});
            REQUIRE(here);
            CHECK(*latency_closed_form({n + 1, p}) <= *here);
            CHECK(*latency_closed_form({n, (pi + 1) / 100.0}) >= *here);
        }
    }
}

TEST_CASE("p_f = 1 never converges and is flagged") {
    const GossipParams params{10, 1.0, 1e-5, 50};
    const auto trace = mean_field_trace(params);
    CHECK_FALSE(trace.converged());
    CHECK(trace.uninformed.size() == 51);
    CHECK_FALSE(latency_closed_form(params));
}

TEST_CASE("horizon shorter than the latency reports not-converged") {
    const GossipParams params{1, 0.9, 1e-5, 100};
    CHECK_FALSE(mean_field_trace(params).converged());
    CHECK_FALSE(latency_closed_form(params));
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(mean_field_trace({0, 0.5}), DomainError);
    CHECK_THROWS_AS(mean_field_trace({5, 1.5}), DomainError);
    CHECK_THROWS_AS(latency_closed_form({5, 0.5, 0.0}), DomainError);
    CHECK_THROWS_AS(latency_closed_form({5, 0.5, 1.0}), DomainError);
}

TEST_CASE("capable sender count rounds half up") {
    CHECK(capable_senders({1, 0.5}) == 1);
    CHECK(capable_senders({100, 0.25}) == 75);
    CHECK(capable_senders({3, 0.5}) == 2);
    CHECK(capable_senders({5, 0.9}) == 1);  // 0.5 rounds up
}

TEST_CASE("agent engine without faults converges at slot 0") {
    for (auto policy : {SenderPolicy::AllCapable, SenderPolicy::InformedOnly}) {
        Rng rng{4};
        const auto trace = agent_based_trace({20, 0.0}, policy, rng);
        CHECK(trace.latency_slots == Latency{0});
        CHECK(trace.uninformed == std::vector<double>{0.0});
    }
}

TEST_CASE("agent engine matches the mean-field recurrence at N=100, p_f=0.25") {
    const GossipParams params{100, 0.25};
    const auto mean_field = mean_field_trace(params);
    constexpr int kSeeds = 10'000;
    std::vector<double> sums(mean_field.uninformed.size(), 0.0);
    for (int s = 0; s < kSeeds; ++s) {
        auto rng = stream_rng(21, s);
        const auto trace = agent_based_trace(params, SenderPolicy::AllCapable, rng);
        for (std::size_t t = 0; t < sums.size(); ++t) {
            sums[t] += t < trace.uninformed.size() ? trace.uninformed[t] : 0.0;
        }
    }
    for (std::size_t t = 0; t < sums.size(); ++t) {
        const double expected = mean_field.uninformed[t];
        const double se = std::sqrt(expected * (1 - expected) / (100.0 * kSeeds));
        CHECK(std::fabs(sums[t] / kSeeds - expected) <= 3 * se);
    }
}

TEST_CASE("single node with p_f=0.5 has a geometric latency") {
    // S = round(0.5) = 1, so P(L > t) = 0.5 * 0.5^t.
    const GossipParams params{1, 0.5};
    constexpr int kSeeds = 20'000;
    std::array<int, 6> survivors{};
    for (int s = 0; s < kSeeds; ++s) {
        auto rng = stream_rng(33, s);
        const auto trace = agent_based_trace(params, SenderPolicy::AllCapable, rng);
        REQUIRE(trace.latency_slots);
        for (std::size_t t = 0; t < survivors.size(); ++t) {
            survivors[t] += *trace.latency_slots > static_cast<std::int64_t>(t) ? 1 : 0;
        }
    }
    for (std::size_t t = 0; t < survivors.size(); ++t) {
        const double p = std::pow(0.5, static_cast<double>(t) + 1.0);
        const double se = std::sqrt(p * (1 - p) / kSeeds);
        CHECK(std::fabs(survivors[t] / static_cast<double>(kSeeds) - p) <= 3 * se);
    }
    // The survival law is the mean-field trace with exponent S = 1 in place of 0.5.
    CHECK(mean_field_trace({2, 0.5}).latency_slots == Latency{16});
}

TEST_CASE("informed-only policy is slower than all-capable") {
    const GossipParams params{30, 0.6};
    double all = 0.0;
    double informed = 0.0;
    for (int s = 0; s < 500; ++s) {
        auto a = stream_rng(5, s);
        auto b = stream_rng(5, s);
        all += static_cast<double>(*agent_based_trace(params, SenderPolicy::AllCapable, a).latency_slots);
        informed +=
            static_cast<double>(*agent_based_trace(params, SenderPolicy::InformedOnly, b).latency_slots);
    }
    CHECK(informed >= all);
}

TEST_CASE("trace CSV") {
    GossipTrace trace;
    trace.uninformed = {0.25, 0.0625};
    std::ostringstream out;
    write_trace_csv(out, trace);
    CHECK(out.str() == "t,r,r_bar\n0,0.75,0.25\n1,0.9375,0.0625\n");
}
