#include "cvbft/churn.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "cvbft/error.hpp"

namespace cvbft {

namespace {

bool finite_nonneg(double v) { return v >= 0.0 && std::isfinite(v); }

}  // namespace

ChurnConfig ChurnConfig::with_default_warmup(double arrival_rate_hz, double service_rate_hz,
                                             double window_s) {
    return {arrival_rate_hz, service_rate_hz, window_s, 100.0 / service_rate_hz};
}

void ChurnConfig::validate() const {
    if (!finite_nonneg(arrival_rate_hz)) {
        throw DomainError("arrival rate must be finite and >= 0");
    }
    if (!(service_rate_hz > 0.0) || !std::isfinite(service_rate_hz)) {
        throw DomainError("service rate must be positive");
    }
    if (!(window_s > 0.0) || !std::isfinite(window_s)) {
        throw DomainError("observation window must be positive");
    }
    if (!finite_nonneg(warmup_s)) {
        throw DomainError("warm-up must be finite and >= 0");
    }
    if (utilization() >= 1.0) {
        throw UnstableQueueError("M/M/1 utilization " + std::to_string(utilization()) +
                                 " is not below 1");
    }
}

void ChurnMeans::validate() const {
    if (!finite_nonneg(arrival_mean) || !finite_nonneg(departure_mean)) {
        throw DomainError("churn means must be finite and >= 0");
    }
}

ChurnDelta simulate_mm1_window(const ChurnConfig& config, Rng& rng) {
    config.validate();
    if (config.arrival_rate_hz == 0.0) {
        return {};
    }

    constexpr double kNever = std::numeric_limits<double>::infinity();
    std::exponential_distribution<double> interarrival{config.arrival_rate_hz};
    std::exponential_distribution<double> service{config.service_rate_hz};

    const double window_start = config.warmup_s;
    const double window_end = config.warmup_s + config.window_s;

    std::int64_t in_system = 0;
    std::int64_t arrivals = 0;
    std::int64_t departures = 0;
    double next_arrival = interarrival(rng);
    double next_departure = kNever;

    while (true) {
        if (next_arrival <= next_departure) {
            const double now = next_arrival;
            if (now >= window_end) {
                break;
            }
            if (now >= window_start) {
                ++arrivals;
            }
            if (in_system++ == 0) {
                next_departure = now + service(rng);
            }
            next_arrival = now + interarrival(rng);
        } else {
            const double now = next_departure;
            if (now >= window_end) {
                break;
            }
            if (now >= window_start) {
                ++departures;
            }
            next_departure = --in_system > 0 ? now + service(rng) : kNever;
        }
    }
    return ChurnDelta::from_counts(arrivals, departures);
}

ChurnDelta sample_churn_delta(double arrival_mean, double departure_mean, Rng& rng) {
    ChurnMeans{arrival_mean, departure_mean}.validate();
    const auto arrivals = draw_poisson(arrival_mean, rng);
    const auto departures = draw_poisson(departure_mean, rng);
    return ChurnDelta::from_counts(arrivals, departures);
}

std::string_view to_string(Population population) {
    return population == Population::Legit ? "legit" : "faulty";
}

void write_churn_csv(std::ostream& out, std::span<const ChurnRecord> records) {
    out << "trial,population,arrivals,departures,net\n";
    for (const auto& r : records) {
        out << r.trial << ',' << to_string(r.population) << ',' << r.delta.arrivals << ','
            << r.delta.departures << ',' << r.delta.net << '\n';
    }
}

}  // namespace cvbft
