#include "cli/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>

namespace voidinspect::cli {

namespace {

using nlohmann::json;

class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw UsageError("config key '" + name() + "' must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw UsageError("config key '" + path_ + key + "' has the wrong type");
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out) {
    if (!j_.contains(key)) return;
    if (j_.at(key).is_null()) {
      seen_.insert(key);
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }
  std::string key_path(const char* key) const { return path_ + key; }

  Section sub(const char* key) {
    seen_.insert(key);
    return Section(j_.at(key), path_ + key + ".");
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw UsageError("unknown config key '" + path_ + k + "'");
  }

 private:
  std::string name() const { return path_.empty() ? "<root>" : path_.substr(0, path_.size() - 1); }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_segmentation(Section s, SegmentationParams& p) {
  s.get("slice_height", p.slice_height);
  s.get("slice_width", p.slice_width);
  s.get("threshold_window", p.threshold_window);
  s.get("threshold_offset", p.threshold_offset);
  s.get("radius_bin_width", p.radius_bin_width);
  s.get("gap_factor", p.gap_factor);
  s.get("row_tolerance", p.row_tolerance);
  s.get("min_radius", p.min_radius);
  s.get("max_radius", p.max_radius);
  s.finish();
}

void read_scan(Section s, ScanParams& p) {
  s.get("thr_1d", p.thr_1d);
  s.get("max_span_fraction", p.max_span_fraction);
  s.get("order_sigma", p.order_sigma);
  if (s.has("acceptance_rule")) {
    std::string rule;
    s.get("acceptance_rule", rule);
    try {
      p.acceptance_rule = parse_acceptance_rule(rule);
    } catch (const Error&) {
      throw UsageError("config key '" + s.key_path("acceptance_rule") + "' must be relative or literal");
    }
  }
  s.finish();
}

void read_synth(Section s, SynthSpec& p) {
  s.get("grid_rows", p.grid_rows);
  s.get("grid_cols", p.grid_cols);
  s.get("ball_radius", p.ball_radius);
  s.get("pitch", p.pitch);
  s.get("ball_intensity", p.ball_intensity);
  s.get("background_intensity", p.background_intensity);
  s.get("void_contrast", p.void_contrast);
  s.get("noise_sigma", p.noise_sigma);
  s.get("seed", p.seed);
  if (s.has("voids")) {
    const json& v = s.raw("voids");
    p.voids.clear();
    try {
      for (const json& ball : v) {
        auto& list = p.voids.emplace_back();
        for (const json& d : ball) {
          for (const auto& [k, _] : d.items())
            if (k != "dx" && k != "dy" && k != "r") throw UsageError("unknown config key '" + s.key_path("voids") + "[]." + k + "'");
          list.push_back({d.value("dx", 0.0), d.value("dy", 0.0), d.at("r").get<double>()});
        }
      }
    } catch (const json::exception&) {
      throw UsageError("config key '" + s.key_path("voids") + "' must be a list of lists of {dx, dy, r}");
    }
  }
  if (s.has("erased_balls")) {
    const json& v = s.raw("erased_balls");
    p.erased_balls.clear();
    try {
      for (const json& g : v) p.erased_balls.push_back({g.at(0).get<int>(), g.at(1).get<int>()});
    } catch (const json::exception&) {
      throw UsageError("config key '" + s.key_path("erased_balls") + "' must be a list of [row, col]");
    }
  }
  s.finish();
}

}  // namespace

std::vector<Method> parse_methods(const std::string& s) {
  if (s == "both") return {Method::proposed, Method::baseline};
  try {
    return {parse_method(s)};
  } catch (const Error&) {
    throw UsageError("method must be proposed, baseline or both, got '" + s + "'");
  }
}

void RunConfig::validate() const {
  try {
    segmentation.validate();
    inspect.validate();
    baseline.validate();
    synth.validate();
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(std::string("invalid config: ") + e.what());
  }
  if (methods.empty()) throw UsageError("no method selected");
  if (jobs < 1) throw UsageError("jobs must be >= 1");
}

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  Section root(j, "");
  if (root.has("method")) {
    std::string m;
    root.get("method", m);
    cfg.methods = parse_methods(m);
  }
  if (root.has("out")) {
    std::string out;
    root.get("out", out);
    cfg.out = out;
  }
  root.get("jobs", cfg.jobs);
  root.get("overlay", cfg.overlay);
  root.get("dump_edges", cfg.dump_edges);
  if (root.has("segmentation")) read_segmentation(root.sub("segmentation"), cfg.segmentation);
  if (root.has("edges")) {
    Section s = root.sub("edges");
    s.get("sigma", cfg.inspect.edges.sigma);
    s.get("min_slope", cfg.inspect.edges.min_slope);
    s.finish();
  }
  if (root.has("scan")) read_scan(root.sub("scan"), cfg.inspect.scan);
  if (root.has("assembly")) {
    Section s = root.sub("assembly");
    s.get("intensity_tol", cfg.inspect.assembly.intensity_tol);
    s.get("a_min", cfg.inspect.assembly.a_min);
    s.finish();
  }
  if (root.has("inspect")) {
    Section s = root.sub("inspect");
    s.get("rim_margin", cfg.inspect.rim_margin);
    s.finish();
  }
  if (root.has("baseline")) {
    Section s = root.sub("baseline");
    s.get("max_join_distance", cfg.baseline.max_join_distance);
    s.finish();
  }
  if (root.has("synth")) read_synth(root.sub("synth"), cfg.synth);
  root.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("malformed config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::ordered_json params_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  const SegmentationParams& s = cfg.segmentation;
  j["segmentation"] = {{"slice_height", s.slice_height},         {"slice_width", s.slice_width},
                       {"threshold_window", s.threshold_window}, {"threshold_offset", s.threshold_offset},
                       {"radius_bin_width", s.radius_bin_width}, {"gap_factor", s.gap_factor},
                       {"min_radius", s.min_radius},             {"max_radius", s.max_radius}};
  j["segmentation"]["row_tolerance"] = s.row_tolerance ? nlohmann::ordered_json(*s.row_tolerance) : nlohmann::ordered_json(nullptr);
  const InspectParams& p = cfg.inspect;
  j["edges"] = {{"sigma", p.edges.sigma}, {"min_slope", p.edges.min_slope}};
  j["scan"] = {{"thr_1d", p.scan.thr_1d},
               {"max_span_fraction", p.scan.max_span_fraction},
               {"acceptance_rule", to_string(p.scan.acceptance_rule)},
               {"order_sigma", p.scan.order_sigma}};
  j["assembly"] = {{"intensity_tol", p.assembly.intensity_tol}, {"a_min", p.assembly.a_min}};
  j["inspect"] = {{"rim_margin", p.rim_margin}};
  j["baseline"] = {{"max_join_distance", cfg.baseline.max_join_distance}};
  return j;
}

std::string params_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : params_json(cfg).dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace voidinspect::cli
