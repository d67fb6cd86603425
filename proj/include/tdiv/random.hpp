#pragma once

#include <cstdint>
#include <random>

#include "tdiv/distributions.hpp"

namespace tdiv {

// Deterministic uniform source. std::mt19937_64's output sequence is fixed by the
// standard; the (0,1) mapping is done explicitly because the library distributions
// are implementation-defined.
class rng64 {
public:
    explicit rng64(std::uint64_t seed) : eng_(seed) {}

    // strictly inside (0,1): (k + 1/2) * 2^-53 with k the top 53 bits
    double uniform_open() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_open(); }

    // standard normal by inverse-CDF sampling
    double gaussian() { return gaussian_quantile_unit(uniform_open()); }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

// smooth strictly positive random QDF on a uniform u-grid: exp of a short,
// bounded trigonometric series, so ratios between two draws stay moderate at
// every alpha in the test set
qdf_grid random_smooth_qdf_grid(rng64& rng, int n_nodes = 257);

} // namespace tdiv
