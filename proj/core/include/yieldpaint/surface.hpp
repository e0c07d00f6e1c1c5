#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "yieldpaint/grid.hpp"

namespace yieldpaint {

using Matrix = Eigen::MatrixXd;
using MaskArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// One dated R x T matrix of yields in decimal units (0.05 = 5% = 500 bps).
struct YieldSurface {
    std::string date;  // ISO yyyy-mm-dd
    Matrix values;     // ratings x tenors

    YieldSurface() = default;
    YieldSurface(std::string d, Matrix v);

    std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

// A surface with an observation mask. Unobserved entries carry value 0.
struct MaskedSurface {
    Matrix values;
    MaskArray observed;

    MaskedSurface() = default;
    MaskedSurface(Matrix v, MaskArray obs);

    std::size_t n_observed() const { return static_cast<std::size_t>(observed.count()); }
    std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

// Ordered collection of surfaces on one grid pair.
// scale_factor is 1/max_yield after scale_to_unit, 1 when unscaled.
struct SurfaceDataset {
    RatingGrid ratings;
    TenorGrid tenors;
    std::vector<YieldSurface> surfaces;
    double scale_factor = 1.0;
};

// Divide every entry by the dataset-wide maximum so max == 1; records the
// factor for descale. Throws on an all-zero dataset.
SurfaceDataset scale_to_unit(const SurfaceDataset& dataset);

// Undo scale_to_unit.
SurfaceDataset descale(const SurfaceDataset& dataset);

// Grow a matrix to target_rows x target_cols, replicating the nearest edge
// value into the new rows/columns. Throws if the target is smaller.
Matrix pad_surface(const Matrix& values, std::size_t target_rows, std::size_t target_cols);

// Take back the top-left rows x cols block; exact inverse of pad_surface.
Matrix crop_surface(const Matrix& padded, std::size_t rows, std::size_t cols);

}  // namespace yieldpaint
