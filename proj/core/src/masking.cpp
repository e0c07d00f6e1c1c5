#include "yieldpaint/masking.hpp"

#include <cmath>
#include <stdexcept>

#include "yieldpaint/rng.hpp"

namespace yieldpaint {

namespace {

MaskedSurface mask_uniform_impl(const Matrix& values, double nu, Rng& rng) {
    if (nu < 0.0 || nu > 1.0) throw std::invalid_argument("mask_uniform: nu outside [0,1]");
    const std::size_t cells = static_cast<std::size_t>(values.size());
    const std::size_t n_masked =
        static_cast<std::size_t>(std::llround(nu * static_cast<double>(cells)));

    Matrix out = values;
    MaskArray observed = MaskArray::Constant(values.rows(), values.cols(), true);
    for (std::size_t flat : rng.sample_without_replacement(cells, n_masked)) {
        const auto i = static_cast<Eigen::Index>(flat / values.cols());
        const auto j = static_cast<Eigen::Index>(flat % values.cols());
        out(i, j) = 0.0;
        observed(i, j) = false;
    }
    // MaskedSurface ctor rejects the nu=1 everything-masked case
    return MaskedSurface(std::move(out), std::move(observed));
}

}  // namespace

MaskedSurface mask_uniform(const YieldSurface& surface, double nu, std::uint64_t seed) {
    Rng rng(seed);
    return mask_uniform_impl(surface.values, nu, rng);
}

MaskedSurface mask_block(const YieldSurface& surface, const BlockMasking& spec,
                         std::uint64_t seed) {
    const std::size_t R = surface.rows();
    const std::size_t T = surface.cols();
    if (spec.keep_rows > R || spec.keep_cols > T)
        throw std::invalid_argument("mask_block: kept block exceeds the grid");
    if (spec.keep_rows == 0 || spec.keep_cols == 0)
        throw std::invalid_argument("mask_block: empty kept block");

    Rng rng(seed);
    // uniform masking inside the block, then zero everything outside
    Matrix block = surface.values.topLeftCorner(spec.keep_rows, spec.keep_cols);
    YieldSurface block_surface(surface.date, block);
    MaskedSurface inner = mask_uniform_impl(block_surface.values, spec.nu_inside, rng);

    Matrix out = Matrix::Zero(R, T);
    MaskArray observed = MaskArray::Constant(R, T, false);
    out.topLeftCorner(spec.keep_rows, spec.keep_cols) = inner.values;
    observed.topLeftCorner(spec.keep_rows, spec.keep_cols) = inner.observed;
    return MaskedSurface(std::move(out), std::move(observed));
}

MaskedSurface corrupt(const YieldSurface& surface, const CorruptionSpec& spec) {
    if (const auto* u = std::get_if<UniformMasking>(&spec.kind))
        return mask_uniform(surface, u->nu, spec.seed);
    return mask_block(surface, std::get<BlockMasking>(spec.kind), spec.seed);
}

std::vector<std::pair<MaskedSurface, YieldSurface>> replicate_and_corrupt(
    const SurfaceDataset& dataset, const CorruptionSpec& spec, std::size_t k) {
    if (k < 1) throw std::invalid_argument("replicate_and_corrupt: k must be >= 1");
    Rng rng(spec.seed);
    std::vector<std::pair<MaskedSurface, YieldSurface>> pairs;
    pairs.reserve(dataset.surfaces.size() * k);
    for (const auto& surface : dataset.surfaces) {
        for (std::size_t r = 0; r < k; ++r) {
            CorruptionSpec replica = spec;
            replica.seed = rng.next_u64();
            pairs.emplace_back(corrupt(surface, replica), surface);
        }
    }
    return pairs;
}

}  // namespace yieldpaint
