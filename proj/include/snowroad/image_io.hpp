#pragma once

#include <filesystem>

#include "snowroad/image.hpp"

namespace snowroad {

/// Reads a binary PPM (P6), PGM (P5) or 8-bit PNG. Gray sources are
/// replicated into all three channels. Samples are returned as stored.
RgbImage load_image(const std::filesystem::path& path);

/// Reads a P5 PGM or grayscale PNG. RGB sources are reduced with to_gray().
GrayImage load_gray(const std::filesystem::path& path);

/// ".png" writes PNG, anything else writes P6.
void save_image(const RgbImage& img, const std::filesystem::path& path);
/// ".png" writes grayscale PNG, anything else writes P5.
void save_image(const GrayImage& img, const std::filesystem::path& path);
/// Written as a P5 (or PNG) gray image with values 0/255.
void save_image(const BinaryMask& mask, const std::filesystem::path& path);
/// HSV planes are written raw into the R,G,B slots (debug dumps only).
void save_image(const HsvImage& img, const std::filesystem::path& path);

}  // namespace snowroad
