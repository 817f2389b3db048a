#include "restyle/colorspace.hpp"

#include <cmath>

namespace restyle {

namespace {

constexpr double kInvSqrt3 = 0.57735026918962576;
constexpr double kInvSqrt6 = 0.40824829046386302;
constexpr double kInvSqrt2 = 0.70710678118654752;

double clamp_unit(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

LabImage::LabImage(int w, int h) : width(w), height(h) {
    data.assign(static_cast<std::size_t>(w) * h * 3, 0.0);
}

std::array<double, 3> rgb_to_lms(double r, double g, double b) {
    return {
        kRgbToLms[0][0] * r + kRgbToLms[0][1] * g + kRgbToLms[0][2] * b,
        kRgbToLms[1][0] * r + kRgbToLms[1][1] * g + kRgbToLms[1][2] * b,
        kRgbToLms[2][0] * r + kRgbToLms[2][1] * g + kRgbToLms[2][2] * b,
    };
}

LabImage rgb_to_lab(const ImageRGB& img) {
    LabImage out(img.width, img.height);
    const long long n = static_cast<long long>(img.pixel_count());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const std::size_t o = static_cast<std::size_t>(i) * 3;
        auto [big_l, big_m, big_s] = rgb_to_lms(img.data[o], img.data[o + 1], img.data[o + 2]);
        if (big_l < kLmsFloor) big_l = kLmsFloor;
        if (big_m < kLmsFloor) big_m = kLmsFloor;
        if (big_s < kLmsFloor) big_s = kLmsFloor;
        const double ll = std::log10(big_l);
        const double lm = std::log10(big_m);
        const double ls = std::log10(big_s);
        // Grouped so that equal cone responses cancel exactly on the
        // chromatic rows.
        out.data[o] = ((ll + lm) + ls) * kInvSqrt3;
        out.data[o + 1] = ((ll + lm) - 2.0 * ls) * kInvSqrt6;
        out.data[o + 2] = (ll - lm) * kInvSqrt2;
    }
    return out;
}

ImageRGB lab_to_rgb(const LabImage& img) {
    ImageRGB out(img.width, img.height);
    const long long n = static_cast<long long>(img.pixel_count());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const std::size_t o = static_cast<std::size_t>(i) * 3;
        const double l = img.data[o], a = img.data[o + 1], b = img.data[o + 2];
        double lms[3];
        for (int k = 0; k < 3; ++k) {
            const double log_lms =
                kLabToLogLms[k][0] * l + kLabToLogLms[k][1] * a + kLabToLogLms[k][2] * b;
            lms[k] = std::pow(10.0, log_lms);
        }
        for (int k = 0; k < 3; ++k) {
            const double v =
                kLmsToRgb[k][0] * lms[0] + kLmsToRgb[k][1] * lms[1] + kLmsToRgb[k][2] * lms[2];
            out.data[o + k] = clamp_unit(v);
        }
    }
    return out;
}

}  // namespace restyle
