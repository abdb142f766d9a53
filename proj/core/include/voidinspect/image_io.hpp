#pragma once

#include <filesystem>

#include "voidinspect/raster.hpp"

namespace voidinspect {

/// Reads an 8-bit grayscale PNG or a binary PGM (P5, maxval <= 255).
/// Pixel values are returned exactly as stored. Throws Error naming the
/// format found when the file is not 8-bit grayscale.
GrayImage load_image(const std::filesystem::path& path);

void save_png(const std::filesystem::path& path, const GrayImage& img);
void save_png(const std::filesystem::path& path, const RgbImage& img);
void save_pgm(const std::filesystem::path& path, const GrayImage& img);

/// 0 -> 0, set -> 255.
GrayImage mask_to_image(const BinaryMask& mask);
/// Nonzero pixels are set.
BinaryMask image_to_mask(const GrayImage& img);

}  // namespace voidinspect
