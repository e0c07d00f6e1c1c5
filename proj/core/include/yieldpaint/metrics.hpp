#pragma once

#include <vector>

#include "yieldpaint/surface.hpp"

namespace yieldpaint {

struct MetricsReport {
    double mae_bps = 0.0;
    double mae_pct = 0.0;
    double rmse_bps = 0.0;
    double rmse_pct = 0.0;
    double mono_violation_pct = 0.0;
    std::size_t n_surfaces = 0;
    std::size_t n_cells = 0;
    bool pct_defined = true;  // false when a zero truth cell blocks percent metrics
};

// MAE/RMSE over all cells of all surfaces. bps = decimal error x 1e4;
// percent = elementwise |error| / truth x 100, averaged (MAE) or
// root-mean-squared (RMSE). A zero truth cell flags the percent metrics as
// undefined; bps metrics are still computed.
MetricsReport error_metrics(const std::vector<YieldSurface>& truth,
                            const std::vector<YieldSurface>& recon);

// restrict the error aggregation to cells the mask marks unobserved
// (diagnostic variant; the default scores every cell)
MetricsReport error_metrics_masked_only(const std::vector<YieldSurface>& truth,
                                        const std::vector<YieldSurface>& recon,
                                        const std::vector<MaskArray>& observed);

// Percentage of adjacent rating pairs (per tenor, per surface) where the
// worse-rated yield sits below the better-rated one by more than 1e-12.
double monotonicity_violations(const std::vector<YieldSurface>& surfaces);

}  // namespace yieldpaint
