#pragma once

#include <array>
#include <vector>

#include "restyle/colorspace.hpp"
#include "restyle/image.hpp"

namespace restyle {

/// Unit 3-vector with a canonical sign: the first component whose
/// magnitude exceeds 1e-12 is positive.
struct PrincipalAxis {
    std::array<double, 3> q{1.0, 0.0, 0.0};

    double dot(double l, double a, double b) const { return q[0] * l + q[1] * a + q[2] * b; }
};

/// Whether the covariance used for the principal axis is mean-centered.
/// Uncentered reproduces the literal X^T X reading and mostly tracks the
/// mean color; it exists for fidelity experiments only.
enum class CovarianceMode { MeanCentered, Uncentered };

/// Sorted projected samples with rank-fraction evaluation.
///
/// value(x) is (count <= x) / n, except for values tied with two or more
/// samples, where the mid-rank (count < x + count <= x) / (2n) is used.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> values);

    double value(double x) const;
    const std::vector<double>& samples() const { return samples_; }

private:
    std::vector<double> samples_;  // ascending
};

EmpiricalCdf build_cdf(std::vector<double> values);

/// Unit eigenvector of the largest eigenvalue of the (optionally selected)
/// pixel covariance. All-identical selections (within 1e-12) yield (1,0,0).
/// selection == nullptr selects every pixel.
PrincipalAxis principal_axis(const LabImage& lab, const BinaryMask* selection = nullptr,
                             CovarianceMode mode = CovarianceMode::MeanCentered);

/// Dot product of each selected pixel with q, in row-major pixel order.
std::vector<double> project(const LabImage& lab, const PrincipalAxis& q,
                            const BinaryMask* selection = nullptr);

/// CDF-matched color transfer of style pixels onto the selected content
/// region. Projections use each image's own principal axis; a content pixel
/// maps to the style pixel at the nearest CDF position (ties resolved toward
/// the smaller projected value, then the lowest row-major index). Unselected
/// pixels pass through unchanged. Style statistics always use every style
/// pixel.
ImageRGB transfer_colors(const ImageRGB& content, const ImageRGB& style,
                         const BinaryMask* selection = nullptr,
                         CovarianceMode mode = CovarianceMode::MeanCentered);

}  // namespace restyle
