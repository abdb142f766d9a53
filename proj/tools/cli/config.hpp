#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "voidinspect/pipeline.hpp"
#include "voidinspect/synth_bench.hpp"

namespace voidinspect::cli {

/// Bad flags, bad config, or nothing to do. Maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  SegmentationParams segmentation;
  InspectParams inspect;
  BaselineParams baseline;
  SynthSpec synth;
  std::vector<Method> methods{Method::proposed};
  std::filesystem::path out = ".";
  bool overlay = false;
  bool dump_edges = false;
  int jobs = 1;

  void validate() const;
};

/// Config file layout (every section and key optional):
///   { "method": "proposed|baseline|both", "out": dir, "jobs": n,
///     "overlay": bool, "dump_edges": bool,
///     "segmentation": {...}, "edges": {...}, "scan": {...},
///     "assembly": {...}, "inspect": {"rim_margin": n},
///     "baseline": {...}, "synth": {...} }
/// Keys mirror the parameter struct fields. Unknown keys throw UsageError
/// naming the dotted key path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

std::vector<Method> parse_methods(const std::string& s);

/// Detection parameters only, in a fixed key order.
nlohmann::ordered_json params_json(const RunConfig& cfg);
/// 64-bit FNV-1a of the compact params_json, as 16 hex digits.
std::string params_hash(const RunConfig& cfg);

}  // namespace voidinspect::cli
