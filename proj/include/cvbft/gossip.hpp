#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cvbft/random.hpp"

namespace cvbft {

inline constexpr double kDefaultEpsilon = 1e-5;
inline constexpr std::int64_t kDefaultMaxSlots = 10'000;

struct GossipParams {
    std::int64_t n_total = 1;
    double fault_prob = 0.0;
    double epsilon = kDefaultEpsilon;
    std::int64_t max_slots = kDefaultMaxSlots;

    /// Throws DomainError unless n_total >= 1, fault_prob in [0,1],
    /// epsilon in (0,1) and max_slots >= 1.
    void validate() const;

    /// Per-slot non-reception factor p_f^(N(1-p_f)), real exponent.
    double decay() const;
};

/// Latency in slots, or nullopt when the horizon is reached first.
using Latency = std::optional<std::int64_t>;

/// Uninformed fraction per slot, starting at t = 0.
struct GossipTrace {
    std::vector<double> uninformed;
    Latency latency_slots;

    double informed_at(std::size_t t) const { return 1.0 - uninformed.at(t); }
    std::vector<double> informed() const;
    bool converged() const { return latency_slots.has_value(); }
};

/// Iterates r_bar_t = r_bar_{t-1} * p_f^(N(1-p_f)) from r_bar_0 = p_f until
/// r_bar_t <= epsilon or max_slots. fault_prob == 1 never converges.
GossipTrace mean_field_trace(const GossipParams& params);

/// First t with p_f^(1 + t N (1-p_f)) <= epsilon, computed directly.
Latency latency_closed_form(const GossipParams& params);

enum class SenderPolicy {
    AllCapable,    // every capable node relays in every slot
    InformedOnly,  // only informed capable nodes relay
};

/// Sender count used by the agent engine: round-half-up of N(1 - p_f).
std::int64_t capable_senders(const GossipParams& params);

/// Node-level simulation of the same dissemination process. The trace holds
/// the realized uninformed fraction; it stops at latency or max_slots.
GossipTrace agent_based_trace(const GossipParams& params, SenderPolicy policy, Rng& rng);

/// Writes `t,r,r_bar`.
void write_trace_csv(std::ostream& out, const GossipTrace& trace);

}  // namespace cvbft
