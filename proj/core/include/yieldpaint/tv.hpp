#pragma once

#include <vector>

#include "yieldpaint/surface.hpp"

namespace yieldpaint {

enum class TvVariant { Anisotropic, Isotropic };

struct TvConfig {
    double lambda = 1e-3;  // TV weight
    double rho = 1.0;      // ADMM penalty
    std::size_t max_iters = 5000;
    double tol = 1e-6;  // primal/dual residual tolerance
    TvVariant variant = TvVariant::Anisotropic;
};

struct TvResult {
    Matrix surface;
    std::size_t iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double objective = 0.0;
    bool converged = false;
    std::vector<double> objective_history;  // accepted iterate per outer iteration
};

// sum_observed (f - y)^2 + lambda * sum |forward differences|, zero gradient
// past the last row/column.
double tv_objective(const Matrix& candidate, const MaskedSurface& masked, double lambda,
                    TvVariant variant = TvVariant::Anisotropic);

// ADMM with splitting on the gradient: soft-threshold update for the edge
// variable, prefactored linear solve for the data update. Missing cells start
// at the mean of the observed ones.
TvResult tv_inpaint(const MaskedSurface& masked, const TvConfig& config);

}  // namespace yieldpaint
