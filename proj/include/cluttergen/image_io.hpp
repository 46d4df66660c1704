#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cluttergen/sensor.hpp"

namespace cluttergen {

// 16-bit grayscale image, row-major.
struct Image16 {
    int width = 0, height = 0;
    std::vector<std::uint16_t> pixels;
};

// 8-bit RGB image, row-major, 3 bytes per pixel.
struct Image8 {
    int width = 0, height = 0;
    std::vector<std::uint8_t> pixels;
};

// Binary PGM (P5, maxval 65535, big-endian samples per the format).
void writePgm16(const std::string& path, const Image16& image);
Image16 readPgm16(const std::string& path);

// Binary PPM (P6, maxval 255).
void writePpm8(const std::string& path, const Image8& image);
Image8 readPpm8(const std::string& path);

// Depth in millimeters, rounded, saturated at 65535; 0 stays "no hit".
Image16 depthToImage(const ViewCapture& capture);
// Segmentation as objectId + 1, so 0 means background.
Image16 segToImage(const ViewCapture& capture);
// Color scaled to [0, 255] per channel.
Image8 colorToImage(const ViewCapture& capture);

} // namespace cluttergen
