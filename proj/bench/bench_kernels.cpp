// Parallel kernels against their serial baselines on fixed-size inputs.
// Run with --benchmark_filter=<name> to narrow.

#include <benchmark/benchmark.h>

#include <random>

#include "restyle/boundary.hpp"
#include "restyle/color_transfer.hpp"
#include "restyle/colorspace.hpp"
#include "restyle/pipeline.hpp"
#include "restyle/reference.hpp"
#include "restyle/style_loss.hpp"

namespace {

restyle::ImageRGB random_image(int w, int h, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    restyle::ImageRGB img(w, h);
    for (double& v : img.data) v = uni(rng);
    return img;
}

restyle::EdgeMap random_edges(int w, int h, double density, unsigned seed) {
    std::mt19937 rng(seed);
    std::bernoulli_distribution bit(density);
    restyle::EdgeMap edges(w, h);
    for (auto& v : edges.data) v = bit(rng) ? 1 : 0;
    return edges;
}

restyle::BinaryMask centered_box(int w, int h, int margin) {
    restyle::BinaryMask mask(w, h);
    for (int r = margin; r < h - margin; ++r)
        for (int c = margin; c < w - margin; ++c) mask.at(r, c) = 1;
    return mask;
}

restyle::FeatureMap random_fmap(int n, int m, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    restyle::FeatureMap f(n, m);
    for (double& v : f.data) v = gauss(rng);
    return f;
}

void bm_rgb_to_lab(benchmark::State& state) {
    const auto img = random_image(512, 512, 1);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::rgb_to_lab(img));
}
void bm_rgb_to_lab_serial(benchmark::State& state) {
    const auto img = random_image(512, 512, 1);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::ref::rgb_to_lab(img));
}

void bm_lab_to_rgb(benchmark::State& state) {
    const auto lab = restyle::rgb_to_lab(random_image(512, 512, 2));
    for (auto _ : state) benchmark::DoNotOptimize(restyle::lab_to_rgb(lab));
}
void bm_lab_to_rgb_serial(benchmark::State& state) {
    const auto lab = restyle::rgb_to_lab(random_image(512, 512, 2));
    for (auto _ : state) benchmark::DoNotOptimize(restyle::ref::lab_to_rgb(lab));
}

void bm_canny(benchmark::State& state) {
    const auto img = random_image(512, 512, 3);
    const restyle::PipelineConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(restyle::canny_edges(img, cfg));
}
void bm_canny_serial(benchmark::State& state) {
    const auto img = random_image(512, 512, 3);
    const restyle::PipelineConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(restyle::ref::canny_edges(img, cfg));
}

void bm_nearest_edge(benchmark::State& state) {
    const auto edges = random_edges(256, 256, 0.002, 4);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::nearest_edge_field(edges));
}
void bm_nearest_edge_brute(benchmark::State& state) {
    const auto edges = random_edges(256, 256, 0.002, 4);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::ref::nearest_edge_field(edges));
}

void bm_feather(benchmark::State& state) {
    const auto mask = centered_box(256, 256, 32);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::feather_mask(mask, 16.0));
}
void bm_feather_brute(benchmark::State& state) {
    const auto mask = centered_box(256, 256, 32);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::ref::feather_mask(mask, 16.0));
}

void bm_transfer(benchmark::State& state) {
    const auto content = random_image(128, 128, 5);
    const auto style = random_image(128, 128, 6);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::transfer_colors(content, style));
}
void bm_transfer_brute(benchmark::State& state) {
    const auto content = random_image(48, 48, 5);
    const auto style = random_image(48, 48, 6);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::ref::transfer_colors(content, style));
}

void bm_gram(benchmark::State& state) {
    const auto f = random_fmap(128, 4096, 7);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::gram(f));
}
void bm_gram_serial(benchmark::State& state) {
    const auto f = random_fmap(128, 4096, 7);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::ref::gram(f));
}

void bm_blend(benchmark::State& state) {
    const auto fg = random_image(1024, 1024, 8);
    const auto bg = random_image(1024, 1024, 9);
    restyle::AlphaMask alpha(1024, 1024, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::alpha_blend(fg, bg, alpha));
}
void bm_blend_serial(benchmark::State& state) {
    const auto fg = random_image(1024, 1024, 8);
    const auto bg = random_image(1024, 1024, 9);
    restyle::AlphaMask alpha(1024, 1024, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(restyle::ref::alpha_blend(fg, bg, alpha));
}

BENCHMARK(bm_rgb_to_lab);
BENCHMARK(bm_rgb_to_lab_serial);
BENCHMARK(bm_lab_to_rgb);
BENCHMARK(bm_lab_to_rgb_serial);
BENCHMARK(bm_canny);
BENCHMARK(bm_canny_serial);
BENCHMARK(bm_nearest_edge);
BENCHMARK(bm_nearest_edge_brute);
BENCHMARK(bm_feather);
BENCHMARK(bm_feather_brute);
BENCHMARK(bm_transfer);
BENCHMARK(bm_transfer_brute);
BENCHMARK(bm_gram);
BENCHMARK(bm_gram_serial);
BENCHMARK(bm_blend);
BENCHMARK(bm_blend_serial);

}  // namespace

BENCHMARK_MAIN();
