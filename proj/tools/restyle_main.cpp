// Command-line front end for the regional style/color transfer pipeline.
//
// Exit codes: 0 success, 1 invalid arguments, 2 I/O failure,
// 3 dimension/validation failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "restyle/boundary.hpp"
#include "restyle/color_transfer.hpp"
#include "restyle/image.hpp"
#include "restyle/pipeline.hpp"
#include "restyle/style_loss.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 1;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

struct CannyFlags {
    double sigma = 1.4;
    double low = 0.1;
    double high = 0.3;

    void attach(CLI::App* cmd) {
        cmd->add_option("--canny-sigma", sigma, "Gaussian sigma for Canny")->check(CLI::PositiveNumber);
        cmd->add_option("--canny-low", low, "low hysteresis threshold (fraction of max gradient)")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--canny-high", high, "high hysteresis threshold (fraction of max gradient)")
            ->check(CLI::Range(0.0, 1.0));
    }

    bool ordered() const { return low < high; }
};

int run_with_error_mapping(const std::function<int()>& body) {
    try {
        return body();
    } catch (const restyle::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const restyle::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

void dump_stages(const restyle::PipelineStages& stages, const std::string& dir) {
    std::filesystem::create_directories(dir);
    restyle::AlphaMask edges(stages.edges.width, stages.edges.height);
    for (std::size_t i = 0; i < edges.data.size(); ++i)
        edges.data[i] = stages.edges.data[i] ? 1.0 : 0.0;
    restyle::save_alpha(edges, dir + "/edges.png");
    restyle::save_alpha(stages.refined.to_alpha(), dir + "/refined.png");
    restyle::save_alpha(stages.alpha, dir + "/alpha.png");
    restyle::save_image(stages.foreground, dir + "/foreground.png");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regional style and color transfer: refines a foreground mask against image\n"
                 "edges, color-transfers the foreground, and feather-blends it over a\n"
                 "style-transferred background."};
    app.require_subcommand(1);

    // ---- run ----
    auto* run = app.add_subcommand("run", "full pipeline: refine, transfer, feather, blend");
    std::string run_content, run_style, run_mask, run_out;
    std::string run_bg, run_dump;
    double run_feather = 3.0, run_threshold = 0.5, run_cap = -1.0;
    CannyFlags run_canny;
    run->add_option("--content", run_content, "content image (PNG)")->required();
    run->add_option("--style", run_style, "style image (PNG)")->required();
    run->add_option("--mask", run_mask, "foreground mask (PNG, white = foreground)")->required();
    run->add_option("--stylized-bg", run_bg, "externally style-transferred background (PNG)");
    run->add_option("--out", run_out, "output image (PNG)")->required();
    run->add_option("--feather", run_feather, "feather radius in pixels")->check(CLI::NonNegativeNumber);
    run->add_option("--erosion-cap", run_cap, "max erosion distance from the mask boundary")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--mask-threshold", run_threshold, "binarization threshold for the mask")
        ->check(CLI::Range(0.0, 1.0));
    run->add_option("--dump-stages", run_dump, "directory for intermediate stage images");
    run_canny.attach(run);

    // ---- refine-mask ----
    auto* refine = app.add_subcommand("refine-mask", "erode a mask toward detected image edges");
    std::string rm_image, rm_mask, rm_out;
    double rm_threshold = 0.5, rm_cap = -1.0;
    CannyFlags rm_canny;
    refine->add_option("--image", rm_image, "image the edges come from (PNG)")->required();
    refine->add_option("--mask", rm_mask, "mask to refine (PNG)")->required();
    refine->add_option("--out", rm_out, "refined mask output (PNG)")->required();
    refine->add_option("--erosion-cap", rm_cap, "max erosion distance from the mask boundary")
        ->check(CLI::NonNegativeNumber);
    refine->add_option("--mask-threshold", rm_threshold, "binarization threshold for the mask")
        ->check(CLI::Range(0.0, 1.0));
    rm_canny.attach(refine);

    // ---- feather ----
    auto* feather = app.add_subcommand("feather", "distance-feather a binary mask to an alpha ramp");
    std::string fe_mask, fe_out;
    double fe_radius = 0.0, fe_threshold = 0.5;
    feather->add_option("--mask", fe_mask, "mask to feather (PNG)")->required();
    feather->add_option("--radius", fe_radius, "feather radius in pixels")
        ->required()
        ->check(CLI::NonNegativeNumber);
    feather->add_option("--out", fe_out, "alpha output (8-bit grayscale PNG)")->required();
    feather->add_option("--mask-threshold", fe_threshold, "binarization threshold for the mask")
        ->check(CLI::Range(0.0, 1.0));

    // ---- color-transfer ----
    auto* xfer = app.add_subcommand("color-transfer", "CDF-matched color transfer in lab space");
    std::string ct_content, ct_style, ct_mask, ct_out;
    double ct_threshold = 0.5;
    xfer->add_option("--content", ct_content, "content image (PNG)")->required();
    xfer->add_option("--style", ct_style, "style image providing the palette (PNG)")->required();
    xfer->add_option("--mask", ct_mask, "restrict the transfer to this region (PNG)");
    xfer->add_option("--out", ct_out, "output image (PNG)")->required();
    xfer->add_option("--mask-threshold", ct_threshold, "binarization threshold for the mask")
        ->check(CLI::Range(0.0, 1.0));

    // ---- blend ----
    auto* blend = app.add_subcommand("blend", "alpha-blend a foreground over a background");
    std::string bl_fg, bl_bg, bl_alpha, bl_out;
    blend->add_option("--fg", bl_fg, "foreground image (PNG)")->required();
    blend->add_option("--bg", bl_bg, "background image (PNG)")->required();
    blend->add_option("--alpha", bl_alpha, "alpha mask (grayscale PNG)")->required();
    blend->add_option("--out", bl_out, "output image (PNG)")->required();

    // ---- losses ----
    auto* losses = app.add_subcommand("losses", "content/style/total losses over feature maps");
    std::vector<std::string> lo_generated, lo_grams;
    std::string lo_original;
    double lo_alpha = 0.15, lo_beta = 0.85;
    losses->add_option("--generated", lo_generated, "generated feature maps, one per layer (FMAP)")
        ->required()
        ->expected(-1);
    losses->add_option("--original", lo_original, "original-image feature map (FMAP)")->required();
    losses->add_option("--style-grams", lo_grams, "style gram matrices, one per layer (FMAP)")
        ->required()
        ->expected(-1);
    losses->add_option("--alpha", lo_alpha, "content weight")->check(CLI::NonNegativeNumber);
    losses->add_option("--beta", lo_beta, "style weight")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadArgs;
    }

    if (run->parsed()) {
        if (!run_canny.ordered()) {
            std::cerr << "error: --canny-low must be less than --canny-high\n";
            return kExitBadArgs;
        }
        return run_with_error_mapping([&] {
            restyle::PipelineInputs inputs;
            inputs.content = restyle::load_image(run_content);
            inputs.style = restyle::load_image(run_style);
            inputs.mask = restyle::load_mask(run_mask, run_threshold);
            if (!run_bg.empty()) inputs.stylized_background = restyle::load_image(run_bg);
            inputs.config.canny_sigma = run_canny.sigma;
            inputs.config.canny_low = run_canny.low;
            inputs.config.canny_high = run_canny.high;
            inputs.config.feather_radius = run_feather;
            inputs.config.mask_threshold = run_threshold;
            inputs.config.erosion_cap = run_cap;

            restyle::PipelineStages stages;
            const restyle::ImageRGB result =
                restyle::run_pipeline(inputs, run_dump.empty() ? nullptr : &stages);
            if (!run_dump.empty()) dump_stages(stages, run_dump);
            restyle::save_image(result, run_out);
            return kExitOk;
        });
    }

    if (refine->parsed()) {
        if (!rm_canny.ordered()) {
            std::cerr << "error: --canny-low must be less than --canny-high\n";
            return kExitBadArgs;
        }
        return run_with_error_mapping([&] {
            const restyle::ImageRGB image = restyle::load_image(rm_image);
            const restyle::BinaryMask mask = restyle::load_mask(rm_mask, rm_threshold);
            restyle::PipelineConfig cfg;
            cfg.canny_sigma = rm_canny.sigma;
            cfg.canny_low = rm_canny.low;
            cfg.canny_high = rm_canny.high;
            cfg.erosion_cap = rm_cap;
            if (mask.width != image.width || mask.height != image.height)
                throw restyle::ValidationError("mask dimensions do not match image");
            const restyle::EdgeMap edges = restyle::canny_edges(image, cfg);
            const restyle::BinaryMask refined = restyle::refine_mask(mask, edges, cfg);
            restyle::save_alpha(refined.to_alpha(), rm_out);
            return kExitOk;
        });
    }

    if (feather->parsed()) {
        return run_with_error_mapping([&] {
            const restyle::BinaryMask mask = restyle::load_mask(fe_mask, fe_threshold);
            restyle::save_alpha(restyle::feather_mask(mask, fe_radius), fe_out);
            return kExitOk;
        });
    }

    if (xfer->parsed()) {
        return run_with_error_mapping([&] {
            const restyle::ImageRGB content = restyle::load_image(ct_content);
            const restyle::ImageRGB style = restyle::load_image(ct_style);
            std::optional<restyle::BinaryMask> mask;
            if (!ct_mask.empty()) {
                mask = restyle::load_mask(ct_mask, ct_threshold);
                if (mask->width != content.width || mask->height != content.height)
                    throw restyle::ValidationError("mask dimensions do not match content");
            }
            const restyle::ImageRGB out =
                restyle::transfer_colors(content, style, mask ? &*mask : nullptr);
            restyle::save_image(out, ct_out);
            return kExitOk;
        });
    }

    if (blend->parsed()) {
        return run_with_error_mapping([&] {
            const restyle::ImageRGB fg = restyle::load_image(bl_fg);
            const restyle::ImageRGB bg = restyle::load_image(bl_bg);
            const restyle::AlphaMask alpha = restyle::load_alpha(bl_alpha);
            restyle::save_image(restyle::alpha_blend(fg, bg, alpha), bl_out);
            return kExitOk;
        });
    }

    if (losses->parsed()) {
        if (lo_generated.size() != lo_grams.size()) {
            std::cerr << "error: --generated and --style-grams must list the same number of layers\n";
            return kExitBadArgs;
        }
        return run_with_error_mapping([&] {
            std::vector<restyle::FeatureMap> generated;
            for (const auto& path : lo_generated) generated.push_back(restyle::load_fmap(path));
            std::vector<restyle::GramMatrix> grams;
            for (const auto& path : lo_grams) grams.push_back(restyle::load_gram(path));
            const restyle::FeatureMap original = restyle::load_fmap(lo_original);

            restyle::LossWeights weights = restyle::LossWeights::uniform(generated.size());
            weights.alpha = lo_alpha;
            weights.beta = lo_beta;
            weights.validate();

            // Content compares the first generated layer against the original.
            const double lc = restyle::content_loss(generated.front(), original);
            const double ls = restyle::style_loss(generated, grams, weights);
            const double lt = restyle::total_loss(lc, ls, weights);
            std::printf("content %.12g\n", lc);
            std::printf("style %.12g\n", ls);
            std::printf("total %.12g\n", lt);
            return kExitOk;
        });
    }

    return kExitBadArgs;
}
