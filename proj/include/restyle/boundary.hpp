#pragma once

#include <cstdint>
#include <vector>

#include "restyle/image.hpp"

namespace restyle {

/// Boolean edge map produced by Canny detection.
struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // height * width, 1 = edge

    EdgeMap() = default;
    EdgeMap(int w, int h);

    std::uint8_t& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    std::uint8_t at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }
    std::size_t count() const;
    bool empty() const { return count() == 0; }
};

/// Per-pixel coordinates of the Euclidean-nearest edge pixel. Ties break
/// toward the smaller row, then the smaller column. row/col are -1 when the
/// edge map is empty.
struct NearestEdgeField {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> site_row;  // height * width
    std::vector<std::int32_t> site_col;

    bool has_site(int row, int col) const {
        return site_row[static_cast<std::size_t>(row) * width + col] >= 0;
    }
    std::int32_t row_at(int row, int col) const {
        return site_row[static_cast<std::size_t>(row) * width + col];
    }
    std::int32_t col_at(int row, int col) const {
        return site_col[static_cast<std::size_t>(row) * width + col];
    }
};

/// Standard Canny: Rec.601 grayscale, Gaussian blur, Sobel gradients,
/// 4-bin non-maximum suppression, double-threshold hysteresis with
/// thresholds given as fractions of the maximum gradient magnitude.
EdgeMap canny_edges(const ImageRGB& img, const PipelineConfig& cfg);

/// Exact Euclidean nearest-site assignment for every pixel.
NearestEdgeField nearest_edge_field(const EdgeMap& edges);

/// BFS erosion of the mask toward the detected image edges.
///
/// The FIFO is seeded with every mask pixel that touches a non-mask
/// 4-neighbor (pixels beyond the image border count as non-mask), in
/// row-major order. A dequeued pixel is removed when its nearest edge pixel
/// still belongs to the evolving mask; removal enqueues its unvisited mask
/// 4-neighbors. A pixel whose nearest edge lies outside the evolving mask is
/// skipped, which stops the peel one step past the traversed edge. With a
/// finite cfg.erosion_cap, only pixels within that Euclidean distance of the
/// original mask boundary may be removed. An empty edge map returns the mask
/// unchanged. Output is always a subset of the input.
BinaryMask refine_mask(const BinaryMask& mask, const EdgeMap& edges, const PipelineConfig& cfg);

/// Distance feathering: 0 outside the mask; min(1, d/radius) inside, where d
/// is the exact Euclidean distance to the nearest in-image non-mask pixel.
/// radius 0 reproduces the binary mask.
AlphaMask feather_mask(const BinaryMask& mask, double radius);

namespace detail {
/// Exact nearest-site transform over an arbitrary site grid (1 = site).
/// Shared by nearest_edge_field, feather_mask, and the erosion cap.
NearestEdgeField nearest_site_field(int width, int height, const std::uint8_t* sites);
}  // namespace detail

}  // namespace restyle
