#pragma once

#include <string>

#include <json.hpp>

namespace yieldpaint {

// Reads a config file into a JSON tree. Files ending in .json parse as JSON;
// anything else goes through a TOML subset: [section] / [a.b] headers,
// key = value with strings, integers, floats, booleans and flat arrays,
// # comments.
nlohmann::json load_config(const std::string& path);

nlohmann::json parse_toml(const std::string& text);

// stable 64-bit FNV-1a over the canonical (sorted-key) dump, as a hex string
std::string config_hash(const nlohmann::json& config);

}  // namespace yieldpaint
