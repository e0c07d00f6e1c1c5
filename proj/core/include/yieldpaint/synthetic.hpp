#pragma once

#include <cstdint>

#include "yieldpaint/surface.hpp"

namespace yieldpaint {

// Nelson-Siegel-style generator standing in for market data. Each surface
// draws curve parameters from the configured ranges, adds a per-rating
// spread (weakly increasing in rating ordinal, so the result is weakly
// monotonic in rating), and a smooth per-tenor noise term shared across
// ratings so monotonicity survives the noise.
struct SyntheticConfig {
    struct Range {
        double min, max;
    };

    Range level{0.020, 0.045};
    Range slope{-0.020, -0.006};  // negative slope => upward sloping curve
    Range curvature{-0.008, 0.010};
    Range tau{1.0, 3.0};  // NS decay, years

    // mean spread over the base curve per rating ordinal; scaled per surface
    // by a draw from spread_scale. Must be non-negative and weakly increasing.
    std::vector<double> spread_schedule;
    Range spread_scale{0.7, 1.3};

    double noise_scale = 0.0010;  // stddev of the common per-tenor noise
    std::uint64_t seed = 0;

    // reproduce the long-tenor backfill used for sub-BB indices: yields at
    // 20/25/30y are rebuilt as the 15y yield plus the spread observed on a
    // generic coarse bucket at those tenors
    bool backfill_long_tenors = false;

    static SyntheticConfig defaults(std::size_t n_ratings = 13);
};

SurfaceDataset generate_synthetic(const SyntheticConfig& config, std::size_t n);
SurfaceDataset generate_synthetic(const SyntheticConfig& config, std::size_t n,
                                  const RatingGrid& ratings, const TenorGrid& tenors);

}  // namespace yieldpaint
