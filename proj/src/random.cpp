#include "cvbft/random.hpp"

#include <cmath>

#include "cvbft/error.hpp"

namespace cvbft {

std::int64_t draw_poisson(double mean, Rng& rng) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw DomainError("Poisson mean must be finite and >= 0");
    }
    if (mean == 0.0) {
        return 0;
    }
    return std::poisson_distribution<std::int64_t>{mean}(rng);
}

}  // namespace cvbft
