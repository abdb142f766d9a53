#include "cli/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli/config.hpp"
#include "voidinspect/image_io.hpp"

namespace voidinspect::cli {

double round3(double v) {
  const double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

namespace {

ordered_json point_json(PointF p) { return {{"x", round3(p.x)}, {"y", round3(p.y)}}; }

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(round3(*v)) : ordered_json(nullptr);
}

// 3x5 glyphs, one row per nibble, bit 2 is the left column.
const std::array<std::array<std::uint8_t, 5>, 12> kGlyphs = {{
    {7, 5, 5, 5, 7},  // 0
    {2, 6, 2, 2, 7},  // 1
    {7, 1, 7, 4, 7},  // 2
    {7, 1, 7, 1, 7},  // 3
    {5, 5, 7, 1, 1},  // 4
    {7, 4, 7, 1, 7},  // 5
    {7, 4, 7, 5, 7},  // 6
    {7, 1, 1, 1, 1},  // 7
    {7, 5, 7, 5, 7},  // 8
    {7, 5, 7, 1, 7},  // 9
    {0, 0, 0, 0, 2},  // .
    {5, 1, 2, 4, 5},  // %
}};

void draw_text(RgbImage& img, int x, int y, const std::string& text, Rgb color) {
  for (const char c : text) {
    int g = -1;
    if (c >= '0' && c <= '9') g = c - '0';
    if (c == '.') g = 10;
    if (c == '%') g = 11;
    if (g >= 0)
      for (int row = 0; row < 5; ++row)
        for (int col = 0; col < 3; ++col)
          if (kGlyphs[g][row] & (4 >> col) && img.contains(x + col, y + row)) img.at(x + col, y + row) = color;
    x += 4;
  }
}

std::string format_pct(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", round_percentage(pct));
  return buf;
}

}  // namespace

ordered_json report_json(const std::string& image, const std::string& params_hash, Method method,
                         const std::string& void_mask_file, const ImageInspection& result) {
  ordered_json j;
  j["image"] = image;
  j["params_hash"] = params_hash;
  j["method"] = to_string(method);
  j["void_mask"] = void_mask_file;
  j["balls"] = ordered_json::array();
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const InspectionReport& r = result.reports[i];
    ordered_json b;
    b["index"] = i;
    b["center"] = point_json(r.ball.center);
    b["radius"] = round3(r.ball.radius);
    b["provenance"] = to_string(r.ball.provenance);
    b["ball_area"] = r.ball_area;
    b["regions"] = ordered_json::array();
    for (const VoidRegion& reg : r.regions)
      b["regions"].push_back({{"label", reg.label},
                              {"area", reg.area},
                              {"centroid", point_json(reg.centroid)},
                              {"bbox", {{"x0", reg.bbox.x0}, {"y0", reg.bbox.y0}, {"x1", reg.bbox.x1}, {"y1", reg.bbox.y1}}}});
    b["void_area"] = r.total_void_area;
    b["void_pct"] = round_percentage(r.void_percentage);
    j["balls"].push_back(std::move(b));
  }
  return j;
}

BinaryMask void_mask(int width, int height, const ImageInspection& result) {
  BinaryMask mask(width, height);
  for (const InspectionReport& r : result.reports)
    for (const VoidRegion& reg : r.regions)
      for (const Point& p : reg.pixels)
        if (mask.contains(p)) mask.at(p) = 1;
  return mask;
}

RgbImage make_overlay(const GrayImage& img, const ImageInspection& result) {
  RgbImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const std::uint8_t v = img.at(x, y);
      out.at(x, y) = {v, v, v};
    }
  const BinaryMask voids = void_mask(img.width(), img.height(), result);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (voids.at(x, y)) {
        Rgb& p = out.at(x, y);
        p = {static_cast<std::uint8_t>((p.r + 255) / 2), static_cast<std::uint8_t>(p.g / 2),
             static_cast<std::uint8_t>(p.b / 2)};
      }
  for (const InspectionReport& r : result.reports) {
    const Point c{static_cast<int>(std::lround(r.ball.center.x)), static_cast<int>(std::lround(r.ball.center.y))};
    const int radius = static_cast<int>(std::lround(r.ball.radius));
    const Rgb color = r.ball.provenance == Provenance::detected ? Rgb{0, 220, 0} : Rgb{230, 210, 0};
    for (const Point& p : ring_pixels(c, radius, img.width(), img.height()).coords) out.at(p) = color;
    const std::string label = format_pct(r.void_percentage);
    const int text_w = static_cast<int>(label.size()) * 4 - 1;
    draw_text(out, c.x - text_w / 2, c.y - radius - 7, label, Rgb{255, 255, 255});
  }
  return out;
}

std::string summary_csv(const std::vector<CsvRow>& rows) {
  std::ostringstream out;
  out << "image,ball_index,provenance,void_pct,region_count,method\n";
  char pct[32];
  for (const CsvRow& r : rows) {
    std::snprintf(pct, sizeof pct, "%.2f", round_percentage(r.void_pct));
    out << r.image << ',' << r.ball_index << ',' << to_string(r.provenance) << ',' << pct << ',' << r.region_count
        << ',' << to_string(r.method) << '\n';
  }
  return out.str();
}

ordered_json truth_json(const std::string& image, const std::string& mask_file, const SynthSpec& spec,
                        const GroundTruth& truth) {
  ordered_json j;
  j["image"] = image;
  j["void_mask"] = mask_file;
  j["width"] = truth.width;
  j["height"] = truth.height;
  j["grid_rows"] = truth.grid_rows;
  j["grid_cols"] = truth.grid_cols;
  j["seed"] = spec.seed;
  j["noise_sigma"] = spec.noise_sigma;
  j["void_contrast"] = spec.void_contrast;
  j["balls"] = ordered_json::array();
  for (const BallTruth& b : truth.balls)
    j["balls"].push_back({{"row", b.index.row},
                          {"col", b.index.col},
                          {"center", point_json(b.center)},
                          {"radius", round3(b.radius)},
                          {"erased", b.erased},
                          {"ball_area", b.ball_area},
                          {"void_area", b.void_area},
                          {"void_pct", round_percentage(b.void_percentage)},
                          {"region_count", b.region_count}});
  return j;
}

GroundTruth load_truth(const std::filesystem::path& path) {
  const nlohmann::json j = read_json(path);
  GroundTruth t;
  try {
    t.width = j.at("width").get<int>();
    t.height = j.at("height").get<int>();
    t.grid_rows = j.at("grid_rows").get<int>();
    t.grid_cols = j.at("grid_cols").get<int>();
    t.void_mask = image_to_mask(load_image(path.parent_path() / j.at("void_mask").get<std::string>()));
    if (!t.void_mask.same_shape(t.width, t.height)) throw Error("truth mask size does not match " + path.string());
    for (const auto& b : j.at("balls")) {
      BallTruth ball;
      ball.index = {b.at("row").get<int>(), b.at("col").get<int>()};
      ball.center = {b.at("center").at("x").get<double>(), b.at("center").at("y").get<double>()};
      ball.radius = b.at("radius").get<double>();
      ball.erased = b.at("erased").get<bool>();
      ball.ball_area = b.at("ball_area").get<int>();
      ball.region_count = b.at("region_count").get<int>();
      for (int y = 0; y < t.height; ++y)
        for (int x = 0; x < t.width; ++x)
          if (t.void_mask.at(x, y) && in_disk(x - ball.center.x, y - ball.center.y, ball.radius))
            ball.void_pixels.push_back({x, y});
      ball.void_area = static_cast<int>(ball.void_pixels.size());
      ball.void_percentage = void_percentage(ball.void_area, ball.ball_area);
      t.balls.push_back(std::move(ball));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed truth file " + path.string() + ": " + e.what());
  }
  return t;
}

ordered_json score_json(const ScoreCard& card) {
  return {{"tp", card.tp},
          {"fp", card.fp},
          {"fn", card.fn},
          {"iou", optional_json(card.iou)},
          {"precision", optional_json(card.precision)},
          {"recall", optional_json(card.recall)},
          {"area_pct_error", round3(card.area_pct_error)},
          {"region_count_error", card.region_count_error}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("malformed JSON " + path.string() + ": " + e.what());
  }
}

}  // namespace voidinspect::cli
