#include "voidinspect/image_io.hpp"

#include <png.h>

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace voidinspect {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) throw Error("cannot open '" + path.string() + "'");
  return f;
}

[[noreturn]] void png_error_handler(png_structp, png_const_charp msg) { throw Error(std::string("png: ") + msg); }
void png_warning_handler(png_structp, png_const_charp) {}

std::string color_type_name(int color_type) {
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY: return "grayscale";
    case PNG_COLOR_TYPE_GRAY_ALPHA: return "grayscale+alpha";
    case PNG_COLOR_TYPE_PALETTE: return "palette";
    case PNG_COLOR_TYPE_RGB: return "RGB";
    case PNG_COLOR_TYPE_RGB_ALPHA: return "RGBA";
    default: return "color type " + std::to_string(color_type);
  }
}

GrayImage load_png(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler, png_warning_handler);
  if (!png) throw Error("png: out of memory");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_read_struct(png, info, nullptr); }
  } guard{&png, &info};

  png_init_io(png, f.get());
  png_read_info(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (color_type != PNG_COLOR_TYPE_GRAY)
    throw Error("'" + path.string() + "': unsupported color format (" + color_type_name(color_type) + ")");
  if (bit_depth != 8)
    throw Error("'" + path.string() + "': unsupported bit depth " + std::to_string(bit_depth));
  if (png_get_interlace_type(png, info) != PNG_INTERLACE_NONE) png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  GrayImage img(w, h);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = img.data().data() + static_cast<std::size_t>(y) * w;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  return img;
}

// Netpbm header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  const std::string magic = pnm_token(in);
  if (magic != "P5") throw Error("'" + path.string() + "': unsupported netpbm format " + magic);
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(pnm_token(in));
    h = std::stoi(pnm_token(in));
    maxval = std::stoi(pnm_token(in));
  } catch (const std::exception&) {
    throw Error("'" + path.string() + "': malformed PGM header");
  }
  if (w <= 0 || h <= 0 || maxval <= 0) throw Error("'" + path.string() + "': malformed PGM header");
  if (maxval > 255) throw Error("'" + path.string() + "': unsupported bit depth 16 (maxval " + std::to_string(maxval) + ")");
  GrayImage img(w, h);
  in.read(reinterpret_cast<char*>(img.data().data()), static_cast<std::streamsize>(img.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.size())) throw Error("'" + path.string() + "': truncated PGM data");
  return img;
}

void write_png(const std::filesystem::path& path, int w, int h, int color_type, const std::uint8_t* data,
               std::size_t row_bytes) {
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler, png_warning_handler);
  if (!png) throw Error("png: out of memory");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_write_struct(png, info); }
  } guard{&png, &info};

  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < h; ++y) png_write_row(png, data + static_cast<std::size_t>(y) * row_bytes);
  png_write_end(png, nullptr);
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw Error("cannot open '" + path.string() + "'");
  std::array<unsigned char, 8> sig{};
  probe.read(reinterpret_cast<char*>(sig.data()), sig.size());
  const auto got = static_cast<std::size_t>(probe.gcount());
  probe.close();
  if (got == sig.size() && png_sig_cmp(sig.data(), 0, sig.size()) == 0) return load_png(path);
  if (got >= 2 && sig[0] == 'P') {
    if (sig[1] == '5') return load_pgm(path);
    throw Error("'" + path.string() + "': unsupported netpbm format P" + std::string(1, static_cast<char>(sig[1])));
  }
  throw Error("'" + path.string() + "': unrecognized image format (expected PNG or PGM)");
}

void save_png(const std::filesystem::path& path, const GrayImage& img) {
  write_png(path, img.width(), img.height(), PNG_COLOR_TYPE_GRAY, img.data().data(), img.width());
}

void save_png(const std::filesystem::path& path, const RgbImage& img) {
  std::vector<std::uint8_t> packed;
  packed.reserve(img.size() * 3);
  for (const Rgb& px : img.data()) {
    packed.push_back(px.r);
    packed.push_back(px.g);
    packed.push_back(px.b);
  }
  write_png(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, packed.data(),
            static_cast<std::size_t>(img.width()) * 3);
}

void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data().data()), static_cast<std::streamsize>(img.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

GrayImage mask_to_image(const BinaryMask& mask) {
  GrayImage img(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) img.data()[i] = mask.data()[i] ? 255 : 0;
  return img;
}

BinaryMask image_to_mask(const GrayImage& img) {
  BinaryMask mask(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) mask.data()[i] = img.data()[i] ? 1 : 0;
  return mask;
}

}  // namespace voidinspect
