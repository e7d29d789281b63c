#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cvbft {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Statistical and exact invariants of every module, at the sample sizes
/// they are specified with. `seed` drives all Monte Carlo checks.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed,
                                             const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace cvbft
