#include "yieldpaint/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "yieldpaint/rng.hpp"

namespace yieldpaint {

namespace {

void check_range(const SyntheticConfig::Range& r, const char* name) {
    if (r.min > r.max)
        throw std::invalid_argument(std::string("SyntheticConfig: degenerate range for ") + name);
}

double ns_curve(double t, double level, double slope, double curvature, double tau) {
    const double x = t / tau;
    const double decay = std::exp(-x);
    const double phi1 = (1.0 - decay) / x;
    return level + slope * phi1 + curvature * (phi1 - decay);
}

std::string synthetic_date(std::size_t k) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "d%06zu", k);
    return buf;
}

}  // namespace

SyntheticConfig SyntheticConfig::defaults(std::size_t n_ratings) {
    SyntheticConfig cfg;
    cfg.spread_schedule.resize(n_ratings);
    // gently convex ramp, AAA at 0 up to ~400 bps for the worst rating
    for (std::size_t i = 0; i < n_ratings; ++i) {
        const double x = n_ratings > 1 ? static_cast<double>(i) / (n_ratings - 1) : 0.0;
        cfg.spread_schedule[i] = 0.040 * std::pow(x, 1.3);
    }
    return cfg;
}

SurfaceDataset generate_synthetic(const SyntheticConfig& config, std::size_t n) {
    return generate_synthetic(config, n, default_rating_grid(), default_tenor_grid());
}

SurfaceDataset generate_synthetic(const SyntheticConfig& config, std::size_t n,
                                  const RatingGrid& ratings, const TenorGrid& tenors) {
    if (n < 1) throw std::invalid_argument("generate_synthetic: n must be >= 1");
    check_range(config.level, "level");
    check_range(config.slope, "slope");
    check_range(config.curvature, "curvature");
    check_range(config.tau, "tau");
    check_range(config.spread_scale, "spread_scale");
    if (config.tau.min <= 0.0)
        throw std::invalid_argument("generate_synthetic: tau must be positive");
    if (config.noise_scale < 0.0)
        throw std::invalid_argument("generate_synthetic: negative noise scale");

    const std::size_t R = ratings.size();
    const std::size_t T = tenors.size();
    if (config.spread_schedule.size() != R)
        throw std::invalid_argument("generate_synthetic: spread schedule length != rating count");
    for (std::size_t i = 0; i < R; ++i) {
        if (config.spread_schedule[i] < 0.0)
            throw std::invalid_argument("generate_synthetic: negative spread");
        if (i > 0 && config.spread_schedule[i] < config.spread_schedule[i - 1])
            throw std::invalid_argument("generate_synthetic: spread schedule must be increasing");
    }

    Rng rng(config.seed);
    SurfaceDataset dataset;
    dataset.ratings = ratings;
    dataset.tenors = tenors;
    dataset.surfaces.reserve(n);

    for (std::size_t k = 0; k < n; ++k) {
        const double level = rng.uniform(config.level.min, config.level.max);
        const double slope = rng.uniform(config.slope.min, config.slope.max);
        const double curvature = rng.uniform(config.curvature.min, config.curvature.max);
        const double tau = rng.uniform(config.tau.min, config.tau.max);
        const double spread_scale = rng.uniform(config.spread_scale.min, config.spread_scale.max);

        // per-tenor noise shared across ratings: shifts whole columns, so the
        // rating ordering of the spread schedule is preserved
        Eigen::VectorXd noise = Eigen::VectorXd::Zero(T);
        for (std::size_t j = 0; j < T; ++j)
            noise[j] = config.noise_scale * rng.normal();

        Matrix values(R, T);
        for (std::size_t j = 0; j < T; ++j) {
            const double base = ns_curve(tenors.tenor(j), level, slope, curvature, tau);
            for (std::size_t i = 0; i < R; ++i) {
                double y = base + spread_scale * config.spread_schedule[i] + noise[j];
                values(i, j) = std::clamp(y, 1e-4, 0.2499);
            }
        }

        if (config.backfill_long_tenors) {
            // sub-BB+ rows at 20/25/30y rebuilt from the 15y point plus the
            // generic double/single-B bucket spread at those tenors
            const int j15 = tenors.index_of(15.0);
            if (j15 >= 0) {
                for (std::size_t j = j15 + 1; j < T; ++j) {
                    for (std::size_t i = 8; i < R; ++i) {
                        // bucket spread: mean over the sub-BB+ rows
                        double bucket = 0.0;
                        for (std::size_t b = 8; b < R; ++b)
                            bucket += values(b, j) - values(b, j15);
                        bucket /= static_cast<double>(R - 8);
                        values(i, j) = values(i, j15) + bucket;
                    }
                }
            }
        }

        dataset.surfaces.emplace_back(synthetic_date(k), std::move(values));
    }
    return dataset;
}

}  // namespace yieldpaint
