#include "yieldpaint/tps.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "yieldpaint/rng.hpp"

namespace yieldpaint {

double tps_kernel(double r) {
    if (r <= 0.0) return 0.0;
    return r * r * std::log(r);
}

namespace {

std::vector<TpsPoint> observed_points(const MaskedSurface& masked) {
    const double ri = masked.rows() > 1 ? 1.0 / (masked.rows() - 1) : 1.0;
    const double ci = masked.cols() > 1 ? 1.0 / (masked.cols() - 1) : 1.0;
    std::vector<TpsPoint> points;
    for (std::size_t i = 0; i < masked.rows(); ++i)
        for (std::size_t j = 0; j < masked.cols(); ++j)
            if (masked.observed(i, j))
                points.push_back({i * ri, j * ci, masked.values(i, j)});
    return points;
}

}  // namespace

std::pair<TpsModel, TpsFitReport> tps_fit(const std::vector<TpsPoint>& points, double lambda) {
    const std::size_t m = points.size();
    if (m < 3) throw std::invalid_argument("tps_fit: need at least 3 points");
    if (lambda < 0.0) throw std::invalid_argument("tps_fit: negative lambda");

    Eigen::Matrix<double, Eigen::Dynamic, 2> knots(m, 2);
    Eigen::VectorXd y(m);
    for (std::size_t i = 0; i < m; ++i) {
        knots(i, 0) = points[i].x1;
        knots(i, 1) = points[i].x2;
        y[i] = points[i].y;
    }

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (knots.row(i) == knots.row(j))
                throw std::invalid_argument("tps_fit: duplicate knot locations");

    Eigen::MatrixXd N(m, 3);
    N.col(0).setOnes();
    N.rightCols<2>() = knots;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> nqr(N);
    if (nqr.rank() < 3) throw std::invalid_argument("tps_fit: collinear knots");

    Eigen::MatrixXd M(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        M(i, i) = lambda;
        for (std::size_t j = i + 1; j < m; ++j) {
            const double r = (knots.row(i) - knots.row(j)).norm();
            M(i, j) = M(j, i) = tps_kernel(r);
        }
    }
    // note: diagonal kernel value is 0, so M(i,i) = lambda covers M + lambda I

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const double rcond = lu.rcond();
    if (!(rcond > 0.0) || !std::isfinite(rcond))
        throw std::runtime_error("tps_fit: singular kernel system (rcond " +
                                 std::to_string(rcond) + ")");

    const Eigen::VectorXd Minv_y = lu.solve(y);
    const Eigen::MatrixXd Minv_N = lu.solve(N);
    const Eigen::Matrix3d S = N.transpose() * Minv_N;
    const Eigen::Vector3d b = S.fullPivLu().solve(N.transpose() * Minv_y);
    const Eigen::VectorXd a = lu.solve(y - N * b);

    TpsModel model;
    model.knots = knots;
    model.kernel_coeffs = a;
    model.affine_coeffs = b;
    model.lambda = lambda;

    TpsFitReport report;
    report.lambda = lambda;
    report.condition_estimate = 1.0 / rcond;
    Eigen::VectorXd fitted(m);
    for (std::size_t i = 0; i < m; ++i) fitted[i] = tps_eval(model, knots(i, 0), knots(i, 1));
    report.residual_norm = (fitted - y).norm();
    return {std::move(model), report};
}

double tps_eval(const TpsModel& model, double x1, double x2) {
    double acc = model.affine_coeffs[0] + model.affine_coeffs[1] * x1 +
                 model.affine_coeffs[2] * x2;
    for (Eigen::Index i = 0; i < model.knots.rows(); ++i) {
        const double dx1 = x1 - model.knots(i, 0);
        const double dx2 = x2 - model.knots(i, 1);
        acc += model.kernel_coeffs[i] * tps_kernel(std::sqrt(dx1 * dx1 + dx2 * dx2));
    }
    return acc;
}

YieldSurface tps_inpaint(const MaskedSurface& masked, double lambda) {
    auto points = observed_points(masked);
    if (points.size() < 3)
        throw std::invalid_argument(
            "tps_inpaint: fewer than 3 observed cells; fall back to another method");

    TpsModel model;
    try {
        model = tps_fit(points, lambda).first;
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(e.what()) + "; fall back to another method");
    }

    const double ri = masked.rows() > 1 ? 1.0 / (masked.rows() - 1) : 1.0;
    const double ci = masked.cols() > 1 ? 1.0 / (masked.cols() - 1) : 1.0;
    Matrix out(masked.rows(), masked.cols());
    for (std::size_t i = 0; i < masked.rows(); ++i)
        for (std::size_t j = 0; j < masked.cols(); ++j)
            out(i, j) = std::max(0.0, tps_eval(model, i * ri, j * ci));
    return YieldSurface("", std::move(out));
}

double tps_cross_validate(const MaskedSurface& masked, const std::vector<double>& lambda_grid,
                          std::size_t folds, std::uint64_t seed) {
    if (lambda_grid.empty()) throw std::invalid_argument("tps_cross_validate: empty grid");
    if (folds < 2) throw std::invalid_argument("tps_cross_validate: need at least 2 folds");

    auto points = observed_points(masked);
    if (points.size() < folds + 3)
        throw std::invalid_argument("tps_cross_validate: too few observed points for the folds");

    Rng rng(seed);
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    std::vector<double> grid = lambda_grid;
    std::sort(grid.begin(), grid.end());

    double best_lambda = grid.front();
    double best_err = std::numeric_limits<double>::infinity();
    for (double lambda : grid) {
        double err_sum = 0.0;
        std::size_t err_count = 0;
        for (std::size_t f = 0; f < folds; ++f) {
            std::vector<TpsPoint> train;
            std::vector<TpsPoint> held;
            for (std::size_t idx = 0; idx < order.size(); ++idx) {
                (idx % folds == f ? held : train).push_back(points[order[idx]]);
            }
            auto model = tps_fit(train, lambda).first;  // throws if a fold is degenerate
            for (const auto& p : held) {
                const double e = tps_eval(model, p.x1, p.x2) - p.y;
                err_sum += e * e;
                ++err_count;
            }
        }
        const double err = err_sum / static_cast<double>(err_count);
        // tie tolerance keeps the plane case deterministic: grid is ascending,
        // so <= plus slack prefers the larger (smoother) lambda
        if (err <= best_err + 1e-10 * (1.0 + best_err)) {
            best_err = std::min(best_err, err);
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

}  // namespace yieldpaint
