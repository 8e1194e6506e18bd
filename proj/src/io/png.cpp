#include "zspose/io/png.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <json.hpp>

namespace zspose {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::string& path, const char* what) {
  throw std::runtime_error(path + ": " + what);
}

}  // namespace

void save_gray16_png(const std::string& path, int width, int height,
                     const std::vector<std::uint16_t>& pixels) {
  if (static_cast<std::size_t>(width) * height != pixels.size())
    throw std::invalid_argument("pixel buffer does not match dimensions");
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) fail(path, "cannot open for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info) fail(path, "libpng init failed");
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(path, "libpng write error");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_set_swap(png);  // host little-endian -> PNG network order

  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(
        const_cast<std::uint16_t*>(pixels.data() + static_cast<std::size_t>(y) * width));
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::vector<std::uint16_t> load_gray16_png(const std::string& path, int& width, int& height) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) fail(path, "cannot open for reading");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info) fail(path, "libpng init failed");
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "libpng read error");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (color_type != PNG_COLOR_TYPE_GRAY)
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (bit_depth < 16) png_set_expand_16(png);
  png_set_swap(png);
  png_read_update_info(png, info);

  std::vector<std::uint16_t> pixels(static_cast<std::size_t>(width) * height);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * width);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return pixels;
}

void save_depth_png(const std::string& path, const DepthImage& depth, double depth_scale) {
  if (!(depth_scale > 0.0)) throw std::invalid_argument("depth_scale must be positive");
  std::vector<std::uint16_t> pixels(depth.data.size());
  for (std::size_t i = 0; i < depth.data.size(); ++i) {
    const double v = std::round(depth.data[i] / depth_scale);
    pixels[i] = static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
  }
  save_gray16_png(path, depth.width(), depth.height(), pixels);
}

DepthImage load_depth_png(const std::string& path, const CameraIntrinsics& intrinsics,
                          double depth_scale) {
  int w = 0, h = 0;
  const auto pixels = load_gray16_png(path, w, h);
  CameraIntrinsics in = intrinsics;
  in.width = w;
  in.height = h;
  if ((intrinsics.width != 0 && intrinsics.width != w) ||
      (intrinsics.height != 0 && intrinsics.height != h))
    fail(path, "image size does not match intrinsics");
  DepthImage depth(in);
  for (std::size_t i = 0; i < pixels.size(); ++i)
    depth.data[i] = static_cast<double>(pixels[i]) * depth_scale;
  return depth;
}

void save_mask_png(const std::string& path, const BitMask& mask) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) fail(path, "cannot open for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info) fail(path, "libpng init failed");
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(path, "libpng write error");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, mask.width, mask.height, 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<std::uint8_t> buf(mask.data.size());
  for (std::size_t i = 0; i < mask.data.size(); ++i) buf[i] = mask.data[i] ? 255 : 0;
  std::vector<png_bytep> rows(mask.height);
  for (int y = 0; y < mask.height; ++y)
    rows[y] = buf.data() + static_cast<std::size_t>(y) * mask.width;
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

BitMask load_mask_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) fail(path, "cannot open for reading");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info) fail(path, "libpng init failed");
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "libpng read error");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type != PNG_COLOR_TYPE_GRAY) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(w) * h);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<std::size_t>(y) * w;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  BitMask mask(w, h);
  for (std::size_t i = 0; i < buf.size(); ++i) mask.data[i] = buf[i] != 0 ? 1 : 0;
  return mask;
}

void save_depth_metadata(const std::string& path, const CameraIntrinsics& intrinsics,
                         double depth_scale) {
  nlohmann::json j{{"depth_scale", depth_scale}, {"fx", intrinsics.fx},
                   {"fy", intrinsics.fy},        {"cx", intrinsics.cx},
                   {"cy", intrinsics.cy},        {"width", intrinsics.width},
                   {"height", intrinsics.height}};
  std::ofstream f(path);
  if (!f) fail(path, "cannot write");
  f << j.dump(2) << "\n";
}

std::pair<CameraIntrinsics, double> load_depth_metadata(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(path, "cannot read");
  nlohmann::json j;
  f >> j;
  CameraIntrinsics in;
  in.fx = j.at("fx").get<double>();
  in.fy = j.at("fy").get<double>();
  in.cx = j.at("cx").get<double>();
  in.cy = j.at("cy").get<double>();
  in.width = j.at("width").get<int>();
  in.height = j.at("height").get<int>();
  return {in, j.at("depth_scale").get<double>()};
}

}  // namespace zspose
