#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "yieldpaint/surface.hpp"

namespace yieldpaint {

// Corruption process: entries are forced to 0, the observation mask keeps
// track of the survivors.
struct UniformMasking {
    double nu = 0.75;  // masked fraction
};

struct BlockMasking {
    std::size_t keep_rows;  // top-left block retained
    std::size_t keep_cols;
    double nu_inside = 0.0;  // uniform masking applied inside the kept block
};

struct CorruptionSpec {
    std::variant<UniformMasking, BlockMasking> kind;
    std::uint64_t seed = 0;
};

// Zero exactly round(nu * R * T) cells chosen uniformly without replacement.
MaskedSurface mask_uniform(const YieldSurface& surface, double nu, std::uint64_t seed);

// Keep the top-left keep_rows x keep_cols block (subject to nu_inside uniform
// masking inside it); zero everything else.
MaskedSurface mask_block(const YieldSurface& surface, const BlockMasking& spec,
                         std::uint64_t seed);

MaskedSurface corrupt(const YieldSurface& surface, const CorruptionSpec& spec);

// k independently corrupted copies per surface, each paired with its clean
// target. Output order: surface-major, replica-minor.
std::vector<std::pair<MaskedSurface, YieldSurface>> replicate_and_corrupt(
    const SurfaceDataset& dataset, const CorruptionSpec& spec, std::size_t k);

}  // namespace yieldpaint
