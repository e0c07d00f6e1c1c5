#pragma once

#include <string>

#include "yieldpaint/network.hpp"

#include <json.hpp>

namespace yieldpaint {

// Layer-stack descriptor, e.g.
//   [{"kind":"dense","in":195,"out":256}, {"kind":"relu"},
//    {"kind":"batch_norm","features":256}, ...]
// Kinds: dense, conv2d, max_pool, upsample, batch_norm, relu, sigmoid.
// Weights are left zeroed; callers initialize or load them.
Network build_network(const nlohmann::json& architecture);
nlohmann::json describe_network(const Network& net);

// Checkpoint = JSON manifest at `path` plus a flat little-endian float64
// array at `path` with extension swapped to .bin. Parameters are written in
// declaration order; batch-norm running statistics follow the layer's
// trainable parameters.
void save_checkpoint(Network& net, const nlohmann::json& manifest_extra,
                     const std::string& path);

// returns (network with loaded weights, full manifest)
std::pair<Network, nlohmann::json> load_checkpoint(const std::string& path);

}  // namespace yieldpaint
