#pragma once

#include <string>

#include "yieldpaint/surface.hpp"

namespace yieldpaint {

// Long-format surface CSV: header `date,rating,tenor_years,yield`, one row
// per (date, rating, tenor) cell, yields in decimal with 9 digits.
// Every cell of the grid must be present for every date; missing cells,
// unknown ratings and non-finite yields are rejected with the offending
// coordinates in the message.
SurfaceDataset load_csv(const std::string& path);
SurfaceDataset load_csv(const std::string& path, const RatingGrid& ratings,
                        const TenorGrid& tenors);

void save_csv(const SurfaceDataset& dataset, const std::string& path);

// Masked variant with an extra `observed` 0/1 column; unobserved rows keep
// yield 0. One surface per file.
void save_masked_csv(const MaskedSurface& masked, const RatingGrid& ratings,
                     const TenorGrid& tenors, const std::string& date,
                     const std::string& path);
MaskedSurface load_masked_csv(const std::string& path, const RatingGrid& ratings,
                              const TenorGrid& tenors);

}  // namespace yieldpaint
