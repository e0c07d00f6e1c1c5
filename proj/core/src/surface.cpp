#include "yieldpaint/surface.hpp"

#include <stdexcept>

namespace yieldpaint {

YieldSurface::YieldSurface(std::string d, Matrix v) : date(std::move(d)), values(std::move(v)) {
    if (!values.allFinite()) throw std::invalid_argument("YieldSurface: non-finite yield");
    if ((values.array() < 0.0).any())
        throw std::invalid_argument("YieldSurface: negative yield");
}

MaskedSurface::MaskedSurface(Matrix v, MaskArray obs)
    : values(std::move(v)), observed(std::move(obs)) {
    if (values.rows() != observed.rows() || values.cols() != observed.cols())
        throw std::invalid_argument("MaskedSurface: mask shape mismatch");
    if (!observed.any()) throw std::invalid_argument("MaskedSurface: no observed entry");
    if ((!observed && values.array() != 0.0).any())
        throw std::invalid_argument("MaskedSurface: unobserved entry must be 0");
}

SurfaceDataset scale_to_unit(const SurfaceDataset& dataset) {
    double max_yield = 0.0;
    for (const auto& s : dataset.surfaces)
        max_yield = std::max(max_yield, s.values.maxCoeff());
    if (max_yield <= 0.0) throw std::invalid_argument("scale_to_unit: all-zero dataset");

    SurfaceDataset out = dataset;
    for (auto& s : out.surfaces) s.values /= max_yield;
    out.scale_factor = dataset.scale_factor / max_yield;
    return out;
}

SurfaceDataset descale(const SurfaceDataset& dataset) {
    SurfaceDataset out = dataset;
    for (auto& s : out.surfaces) s.values /= dataset.scale_factor;
    out.scale_factor = 1.0;
    return out;
}

Matrix pad_surface(const Matrix& values, std::size_t target_rows, std::size_t target_cols) {
    const auto r = static_cast<std::size_t>(values.rows());
    const auto c = static_cast<std::size_t>(values.cols());
    if (target_rows < r || target_cols < c)
        throw std::invalid_argument("pad_surface: target smaller than source");

    Matrix out(target_rows, target_cols);
    for (std::size_t i = 0; i < target_rows; ++i) {
        const std::size_t si = std::min(i, r - 1);
        for (std::size_t j = 0; j < target_cols; ++j) {
            out(i, j) = values(si, std::min(j, c - 1));
        }
    }
    return out;
}

Matrix crop_surface(const Matrix& padded, std::size_t rows, std::size_t cols) {
    if (static_cast<std::size_t>(padded.rows()) < rows ||
        static_cast<std::size_t>(padded.cols()) < cols)
        throw std::invalid_argument("crop_surface: source smaller than crop");
    return padded.topLeftCorner(rows, cols);
}

}  // namespace yieldpaint
