#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "yieldpaint/surface.hpp"

namespace yieldpaint {

// Thin plate spline f(x) = sum_i a_i u(|x - X_i|) + b0 + b1 x1 + b2 x2 with
// u(r) = r^2 log r. Coefficients satisfy N^T a = 0 where N rows are [1, X_i^T].
struct TpsModel {
    Eigen::Matrix<double, Eigen::Dynamic, 2> knots;
    Eigen::VectorXd kernel_coeffs;  // a
    Eigen::Vector3d affine_coeffs;  // b0, b1, b2
    double lambda = 0.0;
};

struct TpsFitReport {
    double residual_norm = 0.0;  // ||f(X_i) - y_i||_2 over the fit points
    double condition_estimate = 0.0;
    double lambda = 0.0;
};

struct TpsPoint {
    double x1, x2, y;
};

// r^2 ln r, continued by 0 at r = 0.
double tps_kernel(double r);

// Smoothing fit: solves Y = (M + lambda I) a + N b under N^T a = 0 via the
// two-step closed form. lambda = 0 interpolates exactly.
// Throws on < 3 points, duplicate knots, or collinear knots.
std::pair<TpsModel, TpsFitReport> tps_fit(const std::vector<TpsPoint>& points, double lambda);

double tps_eval(const TpsModel& model, double x1, double x2);

// Fit on the observed cells (knot coordinates are grid indices normalized to
// [0,1] per axis) and evaluate on the full grid.
YieldSurface tps_inpaint(const MaskedSurface& masked, double lambda);

// k-fold CV over a lambda grid; minimizes mean held-out squared error, ties
// broken toward the larger (smoother) lambda.
double tps_cross_validate(const MaskedSurface& masked, const std::vector<double>& lambda_grid,
                          std::size_t folds, std::uint64_t seed = 0);

}  // namespace yieldpaint
