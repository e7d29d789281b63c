#include "cvbft/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cvbft/csv.hpp"
#include "cvbft/error.hpp"

namespace cvbft {

void Region::validate() const {
    if (!(side_m > 0.0) || !std::isfinite(side_m)) {
        throw DomainError("region side must be a positive finite length");
    }
}

NetworkSnapshot sample_snapshot(double intensity, double fault_prob, Region region, Rng& rng) {
    region.validate();
    if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
        throw DomainError("intensity must be finite and >= 0");
    }
    if (!(fault_prob >= 0.0 && fault_prob <= 1.0)) {
        throw DomainError("fault probability must lie in [0, 1]");
    }

    const auto count = draw_poisson(intensity, rng);
    std::uniform_real_distribution<double> coord{0.0, region.side_m};
    std::bernoulli_distribution faulty{fault_prob};

    NetworkSnapshot snapshot{region, {}};
    snapshot.nodes.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        Node node;
        node.x_m = coord(rng);
        node.y_m = coord(rng);
        node.role = faulty(rng) ? Role::Faulty : Role::Legitimate;
        snapshot.nodes.push_back(node);
    }
    return snapshot;
}

SnapshotCounts snapshot_counts(const NetworkSnapshot& snapshot) {
    const auto faulty = std::count_if(snapshot.nodes.begin(), snapshot.nodes.end(),
                                      [](const Node& n) { return n.role == Role::Faulty; });
    return {snapshot.nodes.size(), static_cast<std::size_t>(faulty)};
}

void write_snapshot_csv(std::ostream& out, const NetworkSnapshot& snapshot) {
    out << "x,y,role\n";
    for (const auto& node : snapshot.nodes) {
        out << csv::format_double(node.x_m) << ',' << csv::format_double(node.y_m) << ','
            << (node.role == Role::Faulty ? "faulty" : "legit") << '\n';
    }
}

}  // namespace cvbft
