#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "restyle/errors.hpp"

namespace restyle {

/// Interleaved RGB image, row-major, origin at top-left.
/// Channel values live in [0, 1].
struct ImageRGB {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // height * width * 3

    ImageRGB() = default;
    ImageRGB(int w, int h, double fill = 0.0);

    double& at(int row, int col, int ch) {
        return data[(static_cast<std::size_t>(row) * width + col) * 3 + ch];
    }
    double at(int row, int col, int ch) const {
        return data[(static_cast<std::size_t>(row) * width + col) * 3 + ch];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    /// Throws ValidationError on zero dimensions, wrong buffer size,
    /// or channel values outside [0, 1].
    void validate() const;
};

/// Soft mask with values in [0, 1].
struct AlphaMask {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // height * width

    AlphaMask() = default;
    AlphaMask(int w, int h, double fill = 0.0);

    double& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    double at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    void validate() const;
};

/// Hard mask; every value is exactly 0 or 1. Foreground = 1.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // height * width

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0);

    std::uint8_t& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    std::uint8_t at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    AlphaMask to_alpha() const;
    void validate() const;
};

/// Knobs for the boundary-optimization and blending stages.
/// Canny thresholds are fractions of the maximum gradient magnitude.
struct PipelineConfig {
    double canny_sigma = 1.4;
    double canny_low = 0.1;
    double canny_high = 0.3;
    double feather_radius = 3.0;
    double mask_threshold = 0.5;
    double erosion_cap = -1.0;  // < 0 means unlimited

    bool erosion_capped() const { return erosion_cap >= 0.0; }
    void validate() const;
};

/// Round-half-up quantization of a unit-interval value to one byte.
/// Values are clamped to [0, 1] first.
std::uint8_t quantize_byte(double v);

/// Loads an 8-bit RGB or RGBA PNG; alpha is discarded. Channels map as byte/255.
ImageRGB load_image(const std::string& path);

/// Writes an 8-bit RGB PNG with byte = round(v * 255) after clamping.
void save_image(const ImageRGB& img, const std::string& path);

/// Loads an 8-bit grayscale (or RGB via Rec.601 luminance) PNG and
/// thresholds it: value 1 where intensity >= threshold, else 0.
BinaryMask load_mask(const std::string& path, double threshold = 0.5);

/// Loads an 8-bit grayscale (or RGB via Rec.601 luminance) PNG as a soft mask.
AlphaMask load_alpha(const std::string& path);

/// Writes a soft mask as an 8-bit grayscale PNG.
void save_alpha(const AlphaMask& mask, const std::string& path);

}  // namespace restyle
