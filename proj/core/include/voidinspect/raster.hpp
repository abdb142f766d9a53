#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace voidinspect {

/// Thrown for contract violations and unrecoverable processing failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
};

struct PointF {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PointF&, const PointF&) = default;
};

/// Inclusive pixel bounding box.
struct Box {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Row-major 2D grid. The tag parameter keeps semantically different
/// rasters with the same element type (intensities vs. masks) apart.
template <typename T, typename Tag>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw Error("raster dimensions must be non-negative");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Raster(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0 ||
        data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error("raster data size does not match " + std::to_string(width) + "x" +
                  std::to_string(height));
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool contains(Point p) const { return contains(p.x, p.y); }

  T at(int x, int y) const { return data_[index(x, y)]; }
  T& at(int x, int y) { return data_[index(x, y)]; }
  T at(Point p) const { return at(p.x, p.y); }
  T& at(Point p) { return at(p.x, p.y); }

  std::span<const T> data() const { return data_; }
  std::span<T> data() { return data_; }
  std::span<const T> row(int y) const {
    return std::span<const T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  bool same_shape(int width, int height) const { return width_ == width && height_ == height; }
  template <typename U, typename OtherTag>
  bool same_shape(const Raster<U, OtherTag>& other) const {
    return same_shape(other.width(), other.height());
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct GrayTag;
struct MaskTag;
struct LabelTag;
struct RealTag;
struct RgbTag;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

using GrayImage = Raster<std::uint8_t, GrayTag>;
/// Nonzero means set.
using BinaryMask = Raster<std::uint8_t, MaskTag>;
/// 0 is background; components are numbered 1..K.
using LabelMap = Raster<std::int32_t, LabelTag>;
using RealImage = Raster<double, RealTag>;
using RgbImage = Raster<Rgb, RgbTag>;

std::size_t count_set(const BinaryMask& mask);
std::vector<Point> set_pixels(const BinaryMask& mask);
BinaryMask mask_from_pixels(int width, int height, std::span<const Point> pixels);

enum class Connectivity { four = 4, eight = 8 };

/// Two-pass union-find labeling. Labels are numbered in raster order of each
/// component's first pixel.
LabelMap label_components(const BinaryMask& mask, Connectivity connectivity);
int max_label(const LabelMap& labels);

/// Pixels of one ring, ordered by increasing angle atan2(dy, dx) in [0, 2pi)
/// (image axes, so angle 0 points along +x and pi/2 along +y).
struct RingSample {
  int radius = 0;
  Point center;
  std::vector<Point> coords;

  std::size_t size() const { return coords.size(); }
  std::size_t wrap(std::ptrdiff_t beta) const {
    const auto n = static_cast<std::ptrdiff_t>(coords.size());
    return static_cast<std::size_t>(((beta % n) + n) % n);
  }
};

/// Integer ring: every pixel whose rounded Euclidean distance to `center`
/// equals `radius`, clipped to [0,width) x [0,height).
RingSample ring_pixels(Point center, int radius, int width, int height);

/// Rounded Euclidean distance, computed exactly in integers.
int ring_index(int dx, int dy);

/// Disk membership used for ball and void areas: dx^2 + dy^2 <= r^2.
bool in_disk(double dx, double dy, double radius);
/// Number of integer offsets inside a disk of `radius` centred on a pixel.
int disk_area(double radius);

enum class Provenance { detected, interpolated };

struct BallRegion {
  PointF center;
  double radius = 0.0;
  Provenance provenance = Provenance::detected;

  friend bool operator==(const BallRegion&, const BallRegion&) = default;
};

std::string to_string(Provenance p);

/// Square window around one ball. `center` is in crop coordinates;
/// `origin` is the crop's top-left corner in source image coordinates.
struct BallCrop {
  GrayImage image;
  Point origin;
  Point center;
  int radius = 0;

  Point to_image(Point local) const { return {local.x + origin.x, local.y + origin.y}; }
};

/// Side 2*round(radius)+1, centred on the rounded ball centre. Pixels that
/// fall outside the source take the median of the crop's in-bounds border.
BallCrop crop_ball(const GrayImage& img, const BallRegion& ball);

/// Lower median (element (n-1)/2 of the sorted values). Empty input returns 0.
std::uint8_t lower_median(std::vector<std::uint8_t> values);

/// Separable Gaussian blur with edge replication; sigma <= 0 copies the input.
RealImage gaussian_blur(const GrayImage& img, double sigma);
RealImage to_real(const GrayImage& img);

}  // namespace voidinspect
