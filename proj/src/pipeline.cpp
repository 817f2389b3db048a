#include "restyle/pipeline.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace restyle {

namespace {

template <class Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("stage ") + name + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError(std::string("stage ") + name + ": " + e.what());
    }
}

}  // namespace

void PipelineInputs::validate() const {
    content.validate();
    style.validate();
    mask.validate();
    config.validate();
    if (mask.width != content.width || mask.height != content.height)
        throw ValidationError("pipeline: mask dimensions (" + std::to_string(mask.width) + "x" +
                              std::to_string(mask.height) + ") do not match content (" +
                              std::to_string(content.width) + "x" + std::to_string(content.height) +
                              ")");
    if (stylized_background) {
        stylized_background->validate();
        if (stylized_background->width != content.width ||
            stylized_background->height != content.height)
            throw ValidationError("pipeline: stylized background dimensions do not match content");
    }
}

ImageRGB alpha_blend(const ImageRGB& color_img, const ImageRGB& style_img, const AlphaMask& alpha) {
    if (color_img.width != style_img.width || color_img.height != style_img.height ||
        color_img.width != alpha.width || color_img.height != alpha.height)
        throw ValidationError("alpha_blend: dimension mismatch (" + std::to_string(color_img.width) +
                              "x" + std::to_string(color_img.height) + " color, " +
                              std::to_string(style_img.width) + "x" +
                              std::to_string(style_img.height) + " style, " +
                              std::to_string(alpha.width) + "x" + std::to_string(alpha.height) +
                              " alpha)");
    ImageRGB out(color_img.width, color_img.height);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(alpha.data.size()); ++i) {
        const double a = alpha.data[i];
        const double* cp = color_img.data.data() + static_cast<std::size_t>(i) * 3;
        const double* sp = style_img.data.data() + static_cast<std::size_t>(i) * 3;
        double* op = out.data.data() + static_cast<std::size_t>(i) * 3;
        for (int c = 0; c < 3; ++c) op[c] = a * cp[c] + (1.0 - a) * sp[c];
    }
    return out;
}

ImageRGB run_pipeline(const PipelineInputs& inputs, PipelineStages* stages) {
    stage("validate-inputs", [&] { inputs.validate(); return 0; });

    const EdgeMap edges =
        stage("canny-edges", [&] { return canny_edges(inputs.content, inputs.config); });
    const BinaryMask refined =
        stage("refine-mask", [&] { return refine_mask(inputs.mask, edges, inputs.config); });
    const AlphaMask alpha = stage(
        "feather-mask", [&] { return feather_mask(refined, inputs.config.feather_radius); });

    const bool any_selected =
        std::find(refined.data.begin(), refined.data.end(), std::uint8_t{1}) != refined.data.end();
    // With nothing selected the alpha is zero everywhere, so the transfer
    // would be both ill-defined and invisible; pass the content through.
    const ImageRGB foreground =
        any_selected
            ? stage("color-transfer",
                    [&] { return transfer_colors(inputs.content, inputs.style, &refined); })
            : inputs.content;

    const ImageRGB& background =
        inputs.stylized_background ? *inputs.stylized_background : inputs.content;
    ImageRGB result =
        stage("alpha-blend", [&] { return alpha_blend(foreground, background, alpha); });

    if (stages) {
        stages->edges = edges;
        stages->refined = refined;
        stages->alpha = alpha;
        stages->foreground = foreground;
    }
    return result;
}

}  // namespace restyle
