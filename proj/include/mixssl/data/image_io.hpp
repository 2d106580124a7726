#pragma once

#include <filesystem>

#include "mixssl/data/image.hpp"

namespace mixssl::data {

// Decodes a PNG or binary PPM/PGM file to a 3-channel ImageTensor in [0, 1].
// Grayscale sources are replicated across channels; alpha is dropped.
// Throws DataError on unreadable or undecodable files.
ImageTensor read_image(const std::filesystem::path& path);

// Writes an 8-bit RGB PNG. Values are clamped to [0, 1] and quantized to
// round(v * 255).
void write_png(const std::filesystem::path& path, const ImageTensor& image);

bool is_supported_image_file(const std::filesystem::path& path);

}  // namespace mixssl::data
