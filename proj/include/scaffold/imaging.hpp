#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "scaffold/image.hpp"

namespace scaffold {

using DecodedImage = std::variant<GrayImage, RgbImage>;

/// Decode a PNG or ASCII PPM (P3) payload. Grayscale PNGs come back as
/// GrayImage, everything else as RgbImage.
DecodedImage decode_image(const std::vector<std::uint8_t>& bytes);
DecodedImage load_image(const std::string& path);

std::vector<std::uint8_t> encode_png(const GrayImage& img);
std::vector<std::uint8_t> encode_png(const RgbImage& img);
std::string encode_ppm(const RgbImage& img);
std::string encode_ppm(const GrayImage& img);

void save_png(const GrayImage& img, const std::string& path);
void save_png(const RgbImage& img, const std::string& path);

/// ITU-R 601 luma: floor(0.299 R + 0.587 G + 0.114 B + 0.5).
GrayImage to_grayscale(const RgbImage& rgb);

/// Collapse a decode result to grayscale.
GrayImage to_grayscale(const DecodedImage& img);

RgbImage to_rgb(const GrayImage& gray);

/// 3x3 Sobel. Border pixels get magnitude 0 and direction 0.
GradientField sobel_gradients(const GrayImage& img);

/// Divisor that maps the raw Sobel L2 magnitude (max 1020*sqrt(2)) onto
/// [0, 255]; Canny thresholds are expressed on that scale.
inline constexpr double kSobelMagnitudeScale = 5.656854249492381; // 4*sqrt(2)

/// Canny: Sobel -> non-maximum suppression along the quantized gradient
/// direction -> double-threshold hysteresis (8-connectivity).
EdgeMap canny_edges(const GrayImage& img, double low, double high);

/// Output edges = input edges intersected with the mask interior.
EdgeMap apply_mask(const EdgeMap& edges, const UnitMask& mask);

} // namespace scaffold
