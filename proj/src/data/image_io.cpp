#include "mixssl/data/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "mixssl/core/errors.hpp"

namespace mixssl::data {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

ImageTensor from_rgb8(const std::vector<uint8_t>& rgb, int64_t height, int64_t width) {
  ImageTensor image = ImageTensor::zeros(3, height, width);
  const float inv = 1.0f / 255.0f;
  for (int64_t y = 0; y < height; ++y) {
    for (int64_t x = 0; x < width; ++x) {
      const size_t o = static_cast<size_t>(3 * (y * width + x));
      image.at(0, y, x) = static_cast<float>(rgb[o]) * inv;
      image.at(1, y, x) = static_cast<float>(rgb[o + 1]) * inv;
      image.at(2, y, x) = static_cast<float>(rgb[o + 2]) * inv;
    }
  }
  return image;
}

ImageTensor read_png_file(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.string().c_str())) {
    throw DataError("failed to decode PNG " + path.string() + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  std::vector<uint8_t> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw DataError("failed to decode PNG " + path.string() + ": " + msg);
  }
  return from_rgb8(buffer, png.height, png.width);
}

// Binary PPM (P6) and PGM (P5), 8-bit maxval.
ImageTensor read_pnm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P6" && magic != "P5") {
    throw DataError("unsupported PNM magic '" + magic + "' in " + path.string());
  }
  auto next_int = [&in, &path]() {
    // Skip whitespace and '#' comment lines.
    for (;;) {
      const int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    int64_t v = -1;
    in >> v;
    if (!in || v < 0) throw DataError("malformed PNM header in " + path.string());
    return v;
  };
  const int64_t width = next_int();
  const int64_t height = next_int();
  const int64_t maxval = next_int();
  if (maxval != 255) throw DataError("only 8-bit PNM supported: " + path.string());
  in.get();  // single whitespace after header
  const int comps = magic == "P6" ? 3 : 1;
  std::vector<uint8_t> raw(static_cast<size_t>(width * height * comps));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw DataError("truncated PNM payload in " + path.string());
  }
  if (comps == 3) return from_rgb8(raw, height, width);
  ImageTensor image = ImageTensor::zeros(3, height, width);
  const float inv = 1.0f / 255.0f;
  for (int64_t y = 0; y < height; ++y) {
    for (int64_t x = 0; x < width; ++x) {
      const float v = static_cast<float>(raw[static_cast<size_t>(y * width + x)]) * inv;
      image.at(0, y, x) = v;
      image.at(1, y, x) = v;
      image.at(2, y, x) = v;
    }
  }
  return image;
}

}  // namespace

bool is_supported_image_file(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

ImageTensor read_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("image file not found: " + path.string());
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png_file(path);
  if (ext == ".ppm" || ext == ".pgm") return read_pnm_file(path);
  throw DataError("unsupported image format: " + path.string());
}

void write_png(const std::filesystem::path& path, const ImageTensor& image) {
  if (image.channels() != 3) throw InvalidInput("write_png expects 3 channels");
  const int64_t height = image.height();
  const int64_t width = image.width();
  std::vector<uint8_t> rgb(static_cast<size_t>(3 * height * width));
  for (int64_t y = 0; y < height; ++y) {
    for (int64_t x = 0; x < width; ++x) {
      for (int64_t c = 0; c < 3; ++c) {
        float v = image.at(c, y, x);
        v = std::min(1.0f, std::max(0.0f, v));
        rgb[static_cast<size_t>(3 * (y * width + x) + c)] =
            static_cast<uint8_t>(std::lround(v * 255.0f));
      }
    }
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(width);
  png.height = static_cast<png_uint_32>(height);
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.string().c_str(), 0, rgb.data(), 0, nullptr)) {
    throw DataError("failed to write PNG " + path.string() + ": " + png.message);
  }
}

}  // namespace mixssl::data
