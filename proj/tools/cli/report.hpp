#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "voidinspect/pipeline.hpp"
#include "voidinspect/synth_bench.hpp"

namespace voidinspect::cli {

using ordered_json = nlohmann::ordered_json;

/// Three decimals, so reports do not depend on last-bit float noise.
double round3(double v);

ordered_json report_json(const std::string& image, const std::string& params_hash, Method method,
                         const std::string& void_mask_file, const ImageInspection& result);

/// Union of all region pixels of every ball.
BinaryMask void_mask(int width, int height, const ImageInspection& result);

/// Void pixels tinted red, ball circles drawn (green detected, yellow
/// interpolated) and the void percentage printed above each ball.
RgbImage make_overlay(const GrayImage& img, const ImageInspection& result);

struct CsvRow {
  std::string image;
  std::size_t ball_index = 0;
  Provenance provenance = Provenance::detected;
  double void_pct = 0.0;
  std::size_t region_count = 0;
  Method method = Method::proposed;
};

std::string summary_csv(const std::vector<CsvRow>& rows);

ordered_json truth_json(const std::string& image, const std::string& mask_file, const SynthSpec& spec,
                        const GroundTruth& truth);
/// Reads a truth JSON and the void mask it points to (relative to the JSON).
GroundTruth load_truth(const std::filesystem::path& path);

ordered_json score_json(const ScoreCard& card);

std::string dump(const ordered_json& j);
void write_text(const std::filesystem::path& path, const std::string& text);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace voidinspect::cli
