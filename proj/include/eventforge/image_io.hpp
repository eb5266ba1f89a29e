#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "eventforge/image.hpp"

namespace eventforge {

/// Binary (P5) or ASCII (P2) PGM, 8 or 16 bit. Throws DataError on malformed input.
Image<double> read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Image<std::uint8_t>& image);

/// 8-bit RGB PNG; pixels are row-major RGB triples.
void write_png_rgb(const std::filesystem::path& path, int width, int height,
                   std::span<const std::uint8_t> rgb);

}  // namespace eventforge
