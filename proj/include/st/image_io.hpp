#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "st/image.hpp"

namespace st {

class ImageIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Gray8 = Raster<std::uint8_t>;

/// Reads binary or ASCII PGM/PPM (maxval <= 255) or PNG. Colour is reduced to
/// luma by rounding 0.299 R + 0.587 G + 0.114 B.
GrayImage read_gray(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_pgm(const Gray8& img);
std::vector<std::uint8_t> encode_ppm(const RgbImage& img);
std::vector<std::uint8_t> encode_png(const Gray8& img);
std::vector<std::uint8_t> encode_png(const RgbImage& img);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

/// Format chosen from the extension: .pgm/.ppm or .png.
void write_image(const std::filesystem::path& path, const Gray8& img);
void write_image(const std::filesystem::path& path, const RgbImage& img);

/// Exact ternary encoding: -1 -> 0, 0 -> 128, +1 -> 255.
Gray8 encode_ternary(const TernaryImage& t);
/// Inverse of encode_ternary; throws ContractViolation on any other byte.
TernaryImage decode_ternary(const Gray8& img);

/// Rounds and clamps to 8 bits.
Gray8 to_gray8(const GrayImage& img);
GrayImage from_gray8(const Gray8& img);

} // namespace st
