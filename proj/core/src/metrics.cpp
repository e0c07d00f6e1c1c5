#include "yieldpaint/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace yieldpaint {

namespace {

MetricsReport aggregate(const std::vector<YieldSurface>& truth,
                        const std::vector<YieldSurface>& recon,
                        const std::vector<MaskArray>* observed) {
    if (truth.size() != recon.size())
        throw std::invalid_argument("error_metrics: list length mismatch");
    if (truth.empty()) throw std::invalid_argument("error_metrics: empty input");
    if (observed && observed->size() != truth.size())
        throw std::invalid_argument("error_metrics: mask list length mismatch");

    MetricsReport report;
    double abs_sum = 0.0, sq_sum = 0.0, pct_sum = 0.0, pct_sq_sum = 0.0;
    for (std::size_t s = 0; s < truth.size(); ++s) {
        const auto& t = truth[s].values;
        const auto& r = recon[s].values;
        if (t.rows() != r.rows() || t.cols() != r.cols())
            throw std::invalid_argument("error_metrics: grid mismatch at surface " +
                                        std::to_string(s));
        for (Eigen::Index i = 0; i < t.rows(); ++i)
            for (Eigen::Index j = 0; j < t.cols(); ++j) {
                if (observed && (*observed)[s](i, j)) continue;
                const double e = r(i, j) - t(i, j);
                abs_sum += std::abs(e);
                sq_sum += e * e;
                if (t(i, j) > 0.0) {
                    const double p = std::abs(e) / t(i, j) * 100.0;
                    pct_sum += p;
                    pct_sq_sum += p * p;
                } else {
                    report.pct_defined = false;
                }
                ++report.n_cells;
            }
    }
    report.n_surfaces = truth.size();
    if (report.n_cells == 0) throw std::invalid_argument("error_metrics: no cells scored");
    const double n = static_cast<double>(report.n_cells);
    report.mae_bps = abs_sum / n * 1e4;
    report.rmse_bps = std::sqrt(sq_sum / n) * 1e4;
    if (report.pct_defined) {
        report.mae_pct = pct_sum / n;
        report.rmse_pct = std::sqrt(pct_sq_sum / n);
    }
    report.mono_violation_pct = monotonicity_violations(recon);
    return report;
}

}  // namespace

MetricsReport error_metrics(const std::vector<YieldSurface>& truth,
                            const std::vector<YieldSurface>& recon) {
    return aggregate(truth, recon, nullptr);
}

MetricsReport error_metrics_masked_only(const std::vector<YieldSurface>& truth,
                                        const std::vector<YieldSurface>& recon,
                                        const std::vector<MaskArray>& observed) {
    return aggregate(truth, recon, &observed);
}

double monotonicity_violations(const std::vector<YieldSurface>& surfaces) {
    if (surfaces.empty())
        throw std::invalid_argument("monotonicity_violations: empty input");
    std::size_t violations = 0, pairs = 0;
    for (const auto& s : surfaces) {
        if (s.values.rows() < 2)
            throw std::invalid_argument("monotonicity_violations: need at least 2 ratings");
        for (Eigen::Index j = 0; j < s.values.cols(); ++j)
            for (Eigen::Index i = 0; i + 1 < s.values.rows(); ++i) {
                // worse rating minus better rating; negative slope = violation
                if (s.values(i + 1, j) - s.values(i, j) < -1e-12) ++violations;
                ++pairs;
            }
    }
    return 100.0 * static_cast<double>(violations) / static_cast<double>(pairs);
}

}  // namespace yieldpaint
