#pragma once

#include <optional>
#include <string>

#include "restyle/boundary.hpp"
#include "restyle/color_transfer.hpp"
#include "restyle/image.hpp"

namespace restyle {

/// Everything the end-to-end run consumes. content, mask, and (when present)
/// stylized_background must share dimensions; style may differ.
struct PipelineInputs {
    ImageRGB content;
    ImageRGB style;
    BinaryMask mask;
    std::optional<ImageRGB> stylized_background;
    PipelineConfig config;

    void validate() const;
};

/// Intermediate stage outputs, captured when requested.
struct PipelineStages {
    EdgeMap edges;
    BinaryMask refined;
    AlphaMask alpha;
    ImageRGB foreground;
};

/// Per pixel and channel: C = alpha * C_color + (1 - alpha) * C_style.
ImageRGB alpha_blend(const ImageRGB& color_img, const ImageRGB& style_img, const AlphaMask& alpha);

/// Full run: Canny edges on the content, BFS mask refinement, distance
/// feathering, CDF color transfer on the refined foreground, then alpha
/// blending over the stylized background (or the content itself when no
/// background is supplied). An all-empty refined mask skips the color
/// transfer; the blend then returns the background everywhere.
/// Constituent errors propagate with the failing stage named.
ImageRGB run_pipeline(const PipelineInputs& inputs, PipelineStages* stages = nullptr);

}  // namespace restyle
