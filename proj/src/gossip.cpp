#include "cvbft/gossip.hpp"

#include <cmath>
#include <ostream>

#include "cvbft/csv.hpp"
#include "cvbft/error.hpp"

namespace cvbft {

void GossipParams::validate() const {
    if (n_total < 1) {
        throw DomainError("node count must be >= 1");
    }
    if (!(fault_prob >= 0.0 && fault_prob <= 1.0)) {
        throw DomainError("fault probability must lie in [0, 1]");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("epsilon must lie in (0, 1)");
    }
    if (max_slots < 1) {
        throw DomainError("max_slots must be >= 1");
    }
}

double GossipParams::decay() const {
    return std::pow(fault_prob, static_cast<double>(n_total) * (1.0 - fault_prob));
}

std::vector<double> GossipTrace::informed() const {
    std::vector<double> r;
    r.reserve(uninformed.size());
    for (double u : uninformed) {
        r.push_back(1.0 - u);
    }
    return r;
}

GossipTrace mean_field_trace(const GossipParams& params) {
    params.validate();
    GossipTrace trace;
    double r_bar = params.fault_prob;
    trace.uninformed.push_back(r_bar);
    if (r_bar <= params.epsilon) {
        trace.latency_slots = 0;
        return trace;
    }
    const double decay = params.decay();
    for (std::int64_t t = 1; t <= params.max_slots; ++t) {
        r_bar *= decay;
        trace.uninformed.push_back(r_bar);
        if (r_bar <= params.epsilon) {
            trace.latency_slots = t;
            return trace;
        }
    }
    return trace;
}

Latency latency_closed_form(const GossipParams& params) {
    params.validate();
    const double p = params.fault_prob;
    if (p <= params.epsilon) {
        return 0;
    }
    if (p >= 1.0) {
        return std::nullopt;
    }
    const double exponent = static_cast<double>(params.n_total) * (1.0 - p);
    const double slots = std::ceil((std::log(params.epsilon) / std::log(p) - 1.0) / exponent);
    if (slots > static_cast<double>(params.max_slots)) {
        return std::nullopt;
    }
    return static_cast<std::int64_t>(slots);
}

std::int64_t capable_senders(const GossipParams& params) {
    const double n = static_cast<double>(params.n_total);
    const double expected = n - n * params.fault_prob;
    return static_cast<std::int64_t>(std::floor(expected + 0.5));
}

GossipTrace agent_based_trace(const GossipParams& params, SenderPolicy policy, Rng& rng) {
    params.validate();
    const auto n = params.n_total;
    const double nd = static_cast<double>(n);
    const auto capable = capable_senders(params);

    std::bernoulli_distribution starts_informed{1.0 - params.fault_prob};
    std::vector<char> informed(static_cast<std::size_t>(n));
    std::int64_t informed_count = 0;
    for (auto& node : informed) {
        node = starts_informed(rng) ? 1 : 0;
        informed_count += node;
    }

    GossipTrace trace;
    auto record = [&](std::int64_t t) {
        const double u = static_cast<double>(n - informed_count) / nd;
        trace.uninformed.push_back(u);
        if (u <= params.epsilon || informed_count == n) {
            trace.latency_slots = t;
            return true;
        }
        return false;
    };

    if (record(0)) {
        return trace;
    }
    for (std::int64_t t = 1; t <= params.max_slots; ++t) {
        const auto senders =
            policy == SenderPolicy::AllCapable ? capable : std::min(informed_count, capable);
        const double survive = std::pow(params.fault_prob, static_cast<double>(senders));
        std::bernoulli_distribution stays_uninformed{survive};
        std::int64_t newly = 0;
        for (auto& node : informed) {
            if (!node && !stays_uninformed(rng)) {
                node = 1;
                ++newly;
            }
        }
        informed_count += newly;
        if (record(t)) {
            return trace;
        }
    }
    return trace;
}

void write_trace_csv(std::ostream& out, const GossipTrace& trace) {
    out << "t,r,r_bar\n";
    for (std::size_t t = 0; t < trace.uninformed.size(); ++t) {
        out << t << ',' << csv::format_double(trace.informed_at(t)) << ','
            << csv::format_double(trace.uninformed[t]) << '\n';
    }
}

}  // namespace cvbft
