#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "wsbm/graph.hpp"

namespace wsbm {

// JSON forms used in sidecars, configs and CLI output.
void to_json(nlohmann::json& j, const LabelDistribution& d);
void from_json(const nlohmann::json& j, LabelDistribution& d);
void to_json(nlohmann::json& j, const ModelSpec& spec);
void from_json(const nlohmann::json& j, ModelSpec& spec);

// Graph container, little-endian:
//   magic "WSBM" | version u16 | N u32 | K u16 | kind u8 (0 discrete,
//   1 gaussian) | strict upper triangle row-major (u16 labels / f64 weights)
// A sidecar at <path>.json records {"spec": ..., "seed": ...} so a loaded
// graph can be re-scored or regenerated.
void save_graph(const std::string& path, const WeightedGraph& g,
                const ModelSpec& spec, std::uint64_t seed);

struct LoadedGraph {
  WeightedGraph graph;
  ModelSpec spec;
  std::uint64_t seed = 0;
};

LoadedGraph load_graph(const std::string& path);

}  // namespace wsbm
