#include "yieldpaint/tv.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace yieldpaint {

namespace {

struct EdgeSet {
    // rows of D: one forward difference per edge over the flattened grid
    std::vector<std::pair<int, int>> edges;  // (from, to) flat indices
    // companion edge index for isotropic grouping: horizontal edge k pairs
    // with the vertical edge at the same pixel, -1 when absent
    std::vector<int> partner;
};

int flat(std::size_t i, std::size_t j, std::size_t cols) {
    return static_cast<int>(i * cols + j);
}

EdgeSet build_edges(std::size_t rows, std::size_t cols) {
    EdgeSet es;
    std::vector<std::vector<int>> h_at(rows, std::vector<int>(cols, -1));
    std::vector<std::vector<int>> v_at(rows, std::vector<int>(cols, -1));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            h_at[i][j] = static_cast<int>(es.edges.size());
            es.edges.emplace_back(flat(i, j, cols), flat(i, j + 1, cols));
        }
    for (std::size_t i = 0; i + 1 < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            v_at[i][j] = static_cast<int>(es.edges.size());
            es.edges.emplace_back(flat(i, j, cols), flat(i + 1, j, cols));
        }
    es.partner.assign(es.edges.size(), -1);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const int h = h_at[i][j];
            const int v = v_at[i][j];
            if (h >= 0 && v >= 0) {
                es.partner[h] = v;
                es.partner[v] = h;
            }
        }
    return es;
}

Eigen::VectorXd apply_D(const EdgeSet& es, const Eigen::VectorXd& x) {
    Eigen::VectorXd out(es.edges.size());
    for (std::size_t k = 0; k < es.edges.size(); ++k)
        out[k] = x[es.edges[k].second] - x[es.edges[k].first];
    return out;
}

Eigen::VectorXd apply_Dt(const EdgeSet& es, std::size_t n, const Eigen::VectorXd& w) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < es.edges.size(); ++k) {
        out[es.edges[k].second] += w[k];
        out[es.edges[k].first] -= w[k];
    }
    return out;
}

double tv_of(const EdgeSet& es, const Eigen::VectorXd& g, TvVariant variant) {
    if (variant == TvVariant::Anisotropic) return g.cwiseAbs().sum();
    double acc = 0.0;
    for (std::size_t k = 0; k < es.edges.size(); ++k) {
        const int p = es.partner[k];
        if (p < 0) {
            acc += std::abs(g[k]);
        } else if (static_cast<int>(k) < p) {  // count each pair once
            acc += std::hypot(g[k], g[p]);
        }
    }
    return acc;
}

void shrink(Eigen::VectorXd& z, const EdgeSet& es, double kappa, TvVariant variant) {
    if (variant == TvVariant::Anisotropic) {
        for (Eigen::Index k = 0; k < z.size(); ++k)
            z[k] = std::copysign(std::max(std::abs(z[k]) - kappa, 0.0), z[k]);
        return;
    }
    Eigen::VectorXd out = z;
    for (std::size_t k = 0; k < es.edges.size(); ++k) {
        const int p = es.partner[k];
        if (p < 0) {
            out[k] = std::copysign(std::max(std::abs(z[k]) - kappa, 0.0), z[k]);
        } else if (static_cast<int>(k) < p) {
            const double norm = std::hypot(z[k], z[p]);
            const double scale = norm > kappa ? (norm - kappa) / norm : 0.0;
            out[k] = scale * z[k];
            out[p] = scale * z[p];
        }
    }
    z = out;
}

}  // namespace

double tv_objective(const Matrix& candidate, const MaskedSurface& masked, double lambda,
                    TvVariant variant) {
    if (candidate.rows() != masked.values.rows() || candidate.cols() != masked.values.cols())
        throw std::invalid_argument("tv_objective: shape mismatch");
    double fidelity = 0.0;
    for (Eigen::Index i = 0; i < candidate.rows(); ++i)
        for (Eigen::Index j = 0; j < candidate.cols(); ++j)
            if (masked.observed(i, j)) {
                const double e = candidate(i, j) - masked.values(i, j);
                fidelity += e * e;
            }

    const auto rows = static_cast<std::size_t>(candidate.rows());
    const auto cols = static_cast<std::size_t>(candidate.cols());
    EdgeSet es = build_edges(rows, cols);
    Eigen::VectorXd x(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) x[flat(i, j, cols)] = candidate(i, j);
    return fidelity + lambda * tv_of(es, apply_D(es, x), variant);
}

TvResult tv_inpaint(const MaskedSurface& masked, const TvConfig& config) {
    if (config.lambda <= 0.0 || config.rho <= 0.0 || config.tol <= 0.0 ||
        config.max_iters < 1)
        throw std::invalid_argument("tv_inpaint: invalid config");

    const auto rows = static_cast<std::size_t>(masked.values.rows());
    const auto cols = static_cast<std::size_t>(masked.values.cols());
    const std::size_t n = rows * cols;
    EdgeSet es = build_edges(rows, cols);
    const std::size_t n_edges = es.edges.size();

    Eigen::VectorXd y(n), mask(n);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            y[flat(i, j, cols)] = masked.values(i, j);
            mask[flat(i, j, cols)] = masked.observed(i, j) ? 1.0 : 0.0;
        }
    const double mean_observed = y.sum() / mask.sum();

    // data update system: (2 diag(mask) + rho D^T D) x = 2 mask.*y + rho D^T(z - u)
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < n_edges; ++k) {
        const auto [from, to] = es.edges[k];
        A(from, from) += config.rho;
        A(to, to) += config.rho;
        A(from, to) -= config.rho;
        A(to, from) -= config.rho;
    }
    for (std::size_t i = 0; i < n; ++i) A(i, i) += 2.0 * mask[i];
    Eigen::LDLT<Eigen::MatrixXd> solver(A);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("tv_inpaint: data-update factorization failed");

    Eigen::VectorXd x = y;
    for (std::size_t i = 0; i < n; ++i)
        if (mask[i] == 0.0) x[i] = mean_observed;
    Eigen::VectorXd z = apply_D(es, x);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n_edges);

    auto objective_at = [&](const Eigen::VectorXd& v) {
        double fidelity = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask[i] == 1.0) {
                const double e = v[i] - y[i];
                fidelity += e * e;
            }
        return fidelity + config.lambda * tv_of(es, apply_D(es, v), config.variant);
    };

    TvResult result;
    Eigen::VectorXd best_x = x;
    double best_obj = objective_at(x);
    const double tol_scale = std::sqrt(static_cast<double>(n_edges));

    std::size_t iter = 0;
    for (; iter < config.max_iters; ++iter) {
        x = solver.solve(2.0 * mask.cwiseProduct(y) + apply_Dt(es, n, config.rho * (z - u)));
        const Eigen::VectorXd Dx = apply_D(es, x);
        const Eigen::VectorXd z_old = z;
        z = Dx + u;
        shrink(z, es, config.lambda / config.rho, config.variant);
        u += Dx - z;

        const double obj = objective_at(x);
        if (obj < best_obj) {
            best_obj = obj;
            best_x = x;
        }
        result.objective_history.push_back(best_obj);

        result.primal_residual = (Dx - z).norm();
        result.dual_residual = config.rho * apply_Dt(es, n, z - z_old).norm();
        if (result.primal_residual < config.tol * tol_scale &&
            result.dual_residual < config.tol * tol_scale) {
            result.converged = true;
            ++iter;
            break;
        }
    }

    result.iterations = iter;
    result.objective = best_obj;
    result.surface = Matrix(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            result.surface(i, j) = best_x[flat(i, j, cols)];
    return result;
}

}  // namespace yieldpaint
