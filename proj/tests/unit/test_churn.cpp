#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "cvbft/churn.hpp"
#include "cvbft/error.hpp"

using namespace cvbft;

namespace {

struct Summary {
    double mean;
    double variance;
    double se;
};

Summary summarize(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double n = static_cast<double>(xs.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = ss / (n - 1.0);
    return {mean, var, std::sqrt(var / n)};
}

}  // namespace

TEST_CASE("zero arrival rate yields no churn") {
    Rng rng{1};
    const auto d = simulate_mm1_window(ChurnConfig::with_default_warmup(0.0, 8.0, 1.0), rng);
    CHECK(d == ChurnDelta{0, 0, 0});
}

TEST_CASE("unstable queue is rejected") {
    Rng rng{1};
    CHECK_THROWS_AS(simulate_mm1_window(ChurnConfig::with_default_warmup(8.0, 4.0, 1.0), rng),
                    UnstableQueueError);
    CHECK_THROWS_AS(simulate_mm1_window(ChurnConfig::with_default_warmup(4.0, 4.0, 1.0), rng),
                    UnstableQueueError);
}

TEST_CASE("default warm-up is 100 mean service times") {
    CHECK(ChurnConfig::with_default_warmup(4.0, 8.0, 1.0).warmup_s == doctest::Approx(12.5));
}

TEST_CASE("M/M/1 departures after warm-up are Poisson at the arrival rate") {
    const auto config = ChurnConfig::with_default_warmup(4.0, 8.0, 1.0);
    std::vector<double> arrivals;
    std::vector<double> departures;
    for (int s = 0; s < 10'000; ++s) {
        auto rng = stream_rng(3, s);
        const auto d = simulate_mm1_window(config, rng);
        CHECK(d.net == d.arrivals - d.departures);
        arrivals.push_back(static_cast<double>(d.arrivals));
        departures.push_back(static_cast<double>(d.departures));
    }
    const auto a = summarize(arrivals);
    const auto dep = summarize(departures);
    CHECK(std::fabs(a.mean - 4.0) <= 3 * a.se);
    CHECK(std::fabs(dep.mean - 4.0) <= 3 * dep.se);
    const double index = dep.variance / dep.mean;
    CHECK(index >= 0.9);
    CHECK(index <= 1.1);
}

TEST_CASE("count mode: trivial cases") {
    Rng rng{5};
    CHECK(sample_churn_delta(0.0, 0.0, rng) == ChurnDelta{0, 0, 0});
    std::vector<double> net;
    for (int i = 0; i < 10'000; ++i) {
        const auto d = sample_churn_delta(5.0, 0.0, rng);
        CHECK(d.departures == 0);
        CHECK(d.net >= 0);
        net.push_back(static_cast<double>(d.net));
    }
    const auto s = summarize(net);
    CHECK(std::fabs(s.mean - 5.0) <= 3 * s.se);
}

TEST_CASE("count mode: Skellam moments") {
    const std::pair<double, double> pairs[] = {{4, 4}, {2, 7}, {10, 3}};
    std::uint64_t stream = 0;
    for (auto [in, out] : pairs) {
        CAPTURE(in);
        CAPTURE(out);
        auto rng = stream_rng(9, stream++);
        std::vector<double> net;
        for (int i = 0; i < 10'000; ++i) {
            net.push_back(static_cast<double>(sample_churn_delta(in, out, rng).net));
        }
        const auto s = summarize(net);
        CHECK(std::fabs(s.mean - (in - out)) <= 3 * s.se);
        CHECK(std::fabs(s.variance - (in + out)) <= 0.1 * (in + out));
    }
}

TEST_CASE("M/M/1 and count modes agree on the net mean at matched means") {
    const auto config = ChurnConfig::with_default_warmup(4.0, 8.0, 1.0);
    std::vector<double> mm1;
    std::vector<double> counts;
    auto rng = stream_rng(17, 0);
    for (int s = 0; s < 10'000; ++s) {
        mm1.push_back(static_cast<double>(simulate_mm1_window(config, rng).net));
        counts.push_back(static_cast<double>(sample_churn_delta(4.0, 4.0, rng).net));
    }
    const auto a = summarize(mm1);
    const auto b = summarize(counts);
    CHECK(std::fabs(a.mean - b.mean) <= 3 * std::hypot(a.se, b.se));
}

TEST_CASE("negative means are rejected") {
    Rng rng{1};
    CHECK_THROWS_AS(sample_churn_delta(-1.0, 1.0, rng), DomainError);
    CHECK_THROWS_AS(sample_churn_delta(1.0, -1.0, rng), DomainError);
}

TEST_CASE("churn CSV") {
    const std::vector<ChurnRecord> records{{0, Population::Legit, ChurnDelta::from_counts(3, 1)},
                                           {0, Population::Faulty, ChurnDelta::from_counts(0, 2)}};
    std::ostringstream out;
    write_churn_csv(out, records);
    CHECK(out.str() ==
          "trial,population,arrivals,departures,net\n0,legit,3,1,2\n0,faulty,0,2,-2\n");
}
