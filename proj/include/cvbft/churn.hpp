#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>

#include "cvbft/random.hpp"

namespace cvbft {

/// Parameters of a single-server FIFO queue observed over a window.
struct ChurnConfig {
    double arrival_rate_hz = 0.0;
    double service_rate_hz = 1.0;
    double window_s = 1.0;
    double warmup_s = 100.0;

    /// Config with the default warm-up of 100 mean service times.
    static ChurnConfig with_default_warmup(double arrival_rate_hz, double service_rate_hz,
                                           double window_s);

    double utilization() const { return arrival_rate_hz / service_rate_hz; }

    /// Throws DomainError on bad rates or times, UnstableQueueError if utilization >= 1.
    void validate() const;
};

/// Arrivals and departures of one population over one window.
struct ChurnDelta {
    std::int64_t arrivals = 0;
    std::int64_t departures = 0;
    std::int64_t net = 0;

    static ChurnDelta from_counts(std::int64_t arrivals, std::int64_t departures) {
        return {arrivals, departures, arrivals - departures};
    }

    friend bool operator==(const ChurnDelta&, const ChurnDelta&) = default;
};

/// Expected arrivals and departures over the window (rate times window).
struct ChurnMeans {
    double arrival_mean = 0.0;
    double departure_mean = 0.0;

    double net_mean() const { return arrival_mean - departure_mean; }
    void validate() const;
};

/// Event-driven M/M/1 run; counts arrival and service-completion events
/// inside [warmup_s, warmup_s + window_s).
ChurnDelta simulate_mm1_window(const ChurnConfig& config, Rng& rng);

/// Independent Poisson arrivals and departures. `net` is Skellam distributed.
ChurnDelta sample_churn_delta(double arrival_mean, double departure_mean, Rng& rng);

inline ChurnDelta sample_churn_delta(const ChurnMeans& means, Rng& rng) {
    return sample_churn_delta(means.arrival_mean, means.departure_mean, rng);
}

enum class Population { Legit, Faulty };

std::string_view to_string(Population population);

struct ChurnRecord {
    std::int64_t trial = 0;
    Population population = Population::Legit;
    ChurnDelta delta;
};

/// Writes `trial,population,arrivals,departures,net`.
void write_churn_csv(std::ostream& out, std::span<const ChurnRecord> records);

}  // namespace cvbft
