#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "cvbft/random.hpp"

namespace cvbft {

/// Square deployment area of side D meters.
struct Region {
    double side_m = 1.0;

    /// Throws DomainError unless side_m > 0.
    void validate() const;
};

enum class Role { Legitimate, Faulty };

struct Node {
    double x_m = 0.0;
    double y_m = 0.0;
    Role role = Role::Legitimate;

    friend bool operator==(const Node&, const Node&) = default;
};

/// One realized drop of nodes. Nodes are kept in generation order.
struct NetworkSnapshot {
    Region region;
    std::vector<Node> nodes;
};

struct SnapshotCounts {
    std::size_t total = 0;
    std::size_t faulty = 0;
};

/// Draws a homogeneous PPP over the region and thins it into roles.
///
/// `intensity` is the expected number of nodes in the whole region, so the
/// region side only scales positions. Each node is faulty independently with
/// probability `fault_prob`.
NetworkSnapshot sample_snapshot(double intensity, double fault_prob, Region region, Rng& rng);

SnapshotCounts snapshot_counts(const NetworkSnapshot& snapshot);

/// Writes `x,y,role` rows with role `legit` or `faulty`.
void write_snapshot_csv(std::ostream& out, const NetworkSnapshot& snapshot);

}  // namespace cvbft
