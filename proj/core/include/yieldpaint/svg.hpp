#pragma once

#include <string>

#include "yieldpaint/surface.hpp"

namespace yieldpaint {

// Three-panel SVG (truth / masked / reconstruction), one yield-vs-tenor
// polyline per rating in each panel. Unobserved points are omitted from the
// masked panel. Output bytes are deterministic for fixed input.
void plot_reconstruction(const YieldSurface& truth, const MaskedSurface& masked,
                         const YieldSurface& recon, const TenorGrid& tenors,
                         const std::string& path);

}  // namespace yieldpaint
