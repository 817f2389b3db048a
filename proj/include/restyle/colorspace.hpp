#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "restyle/image.hpp"

namespace restyle {

/// Image in the decorrelated l-alpha-beta space. Components are unbounded reals.
struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // height * width * 3, (l, alpha, beta) triples

    LabImage() = default;
    LabImage(int w, int h);

    double& at(int row, int col, int ch) {
        return data[(static_cast<std::size_t>(row) * width + col) * 3 + ch];
    }
    double at(int row, int col, int ch) const {
        return data[(static_cast<std::size_t>(row) * width + col) * 3 + ch];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

/// RGB -> LMS cone-response matrix.
inline constexpr double kRgbToLms[3][3] = {
    {0.3811, 0.5783, 0.0402},
    {0.1967, 0.7244, 0.0782},
    {0.0241, 0.1288, 0.8444},
};

/// Analytic inverse of kRgbToLms, embedded to full double precision.
inline constexpr double kLmsToRgb[3][3] = {
    {4.4686698634962555, -3.5886759034721265, 0.11960436657860116},
    {-1.2197166276177633, 2.3830879129554568, -0.16263011175140057},
    {0.0585084769385459, -0.26107843902769374, 1.2056659085256231},
};

/// Maps (l, alpha, beta) back to log10-LMS; analytic inverse of the
/// diagonal-times-integer transform applied on the forward path.
inline constexpr double kLabToLogLms[3][3] = {
    {0.57735026918962576, 0.40824829046386302, 0.70710678118654752},
    {0.57735026918962576, 0.40824829046386302, -0.70710678118654752},
    {0.57735026918962576, -0.81649658092772603, 0.0},
};

/// Floor applied to L, M, S before taking log10.
inline constexpr double kLmsFloor = 1e-5;

/// Cone response for a single pixel, before the clamp and log.
std::array<double, 3> rgb_to_lms(double r, double g, double b);

/// Per-pixel RGB -> l-alpha-beta. Pixel-local and pure.
LabImage rgb_to_lab(const ImageRGB& img);

/// Inverse of rgb_to_lab up to the LMS floor; output channels clamped to [0, 1].
ImageRGB lab_to_rgb(const LabImage& img);

}  // namespace restyle
