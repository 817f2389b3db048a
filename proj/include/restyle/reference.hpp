#pragma once

#include <vector>

#include "restyle/boundary.hpp"
#include "restyle/color_transfer.hpp"
#include "restyle/colorspace.hpp"
#include "restyle/image.hpp"
#include "restyle/pipeline.hpp"
#include "restyle/style_loss.hpp"

// Straight-line serial implementations, kept as the testing baseline for the
// parallel kernels and as the independent brute-force oracles. Nothing here
// shares code with the production path beyond the public types.
namespace restyle::ref {

LabImage rgb_to_lab(const ImageRGB& img);
ImageRGB lab_to_rgb(const LabImage& img);

/// Serial separable Canny with the same stage structure as production.
EdgeMap canny_edges(const ImageRGB& img, const PipelineConfig& cfg);

/// O(H*W*E) scan over every edge pixel, minimizing (d^2, row, col).
NearestEdgeField nearest_edge_field(const EdgeMap& edges);

/// Per-pixel minimum over all in-image non-mask pixels.
AlphaMask feather_mask(const BinaryMask& mask, double radius);

BinaryMask refine_mask(const BinaryMask& mask, const EdgeMap& edges, const PipelineConfig& cfg);

/// Closed-form trigonometric eigensolve of the 3x3 covariance.
PrincipalAxis principal_axis(const LabImage& lab, const BinaryMask* selection = nullptr,
                             CovarianceMode mode = CovarianceMode::MeanCentered);

std::vector<double> project(const LabImage& lab, const PrincipalAxis& q,
                            const BinaryMask* selection = nullptr);

/// Rank counting by linear scan; same tie rule as EmpiricalCdf::value.
double cdf_value(const std::vector<double>& samples, double x);

/// All-pairs nearest-CDF matching over every (content, style) pixel pair.
ImageRGB transfer_colors(const ImageRGB& content, const ImageRGB& style,
                         const BinaryMask* selection = nullptr,
                         CovarianceMode mode = CovarianceMode::MeanCentered);

/// Triple-loop G_ij = sum_k F_ik F_jk.
GramMatrix gram(const FeatureMap& f);

double content_loss(const FeatureMap& f, const FeatureMap& p);
double layer_style_loss(const FeatureMap& f, const GramMatrix& a, double w);

ImageRGB alpha_blend(const ImageRGB& color_img, const ImageRGB& style_img, const AlphaMask& alpha);

/// Straight-line composition of the reference stages; source of the
/// committed golden fixture.
ImageRGB run_pipeline(const PipelineInputs& inputs);

}  // namespace restyle::ref
