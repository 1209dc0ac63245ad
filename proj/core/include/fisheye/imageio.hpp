#pragma once

#include <filesystem>

#include "fisheye/image.hpp"

namespace fisheye {

enum class ImageFileFormat { png, pnm };

// Maps .png / .ppm / .pgm (case-insensitive) to a format.
// Throws FormatError for any other extension.
ImageFileFormat format_from_extension(const std::filesystem::path& path);

// Reads an 8-bit image. PNG: gray, RGB or RGBA, non-interlaced; alpha is
// composited over black; 16-bit, palette and interlaced files are rejected.
// PNM: binary P5/P6 with maxval 255.
// Throws FormatError for unsupported content, IoError for missing or
// truncated files.
ImageBuffer load_image(const std::filesystem::path& path);

// Writes the buffer in the format implied by the extension. PNM headers use
// single-whitespace separators and maxval 255; PNG is 8-bit non-interlaced.
// .pgm requires 1 channel and .ppm requires 3 (std::invalid_argument
// otherwise); .png accepts both.
void save_image(const std::filesystem::path& path, const ImageBuffer& img);

}  // namespace fisheye
