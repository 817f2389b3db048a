// Generates the committed fixture set: the synthetic scene PNGs plus the
// golden pipeline output. The golden comes from the straight-line serial
// reference pipeline; generation aborts unless the production pipeline
// reproduces it byte-for-byte.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "fixture_scene.hpp"
#include "restyle/pipeline.hpp"
#include "restyle/reference.hpp"

namespace {

std::vector<char> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: make_fixtures <output-dir>\n");
        return 1;
    }
    const std::string dir = argv[1];
    std::filesystem::create_directories(dir);

    restyle::PipelineInputs inputs;
    inputs.content = fixtures::disk_content();
    inputs.style = fixtures::checker_style();
    inputs.mask = fixtures::disk_mask();
    inputs.stylized_background = fixtures::swirl_background();
    inputs.config.feather_radius = 3.0;

    restyle::save_image(inputs.content, dir + "/content.png");
    restyle::save_image(inputs.style, dir + "/style.png");
    restyle::save_alpha(inputs.mask.to_alpha(), dir + "/mask.png");
    restyle::save_image(*inputs.stylized_background, dir + "/stylized_bg.png");

    // The PNGs quantize the scene; the golden must match what the CLI will
    // see, so rebuild the inputs from the files just written.
    inputs.content = restyle::load_image(dir + "/content.png");
    inputs.style = restyle::load_image(dir + "/style.png");
    inputs.mask = restyle::load_mask(dir + "/mask.png");
    inputs.stylized_background = restyle::load_image(dir + "/stylized_bg.png");

    const restyle::ImageRGB golden = restyle::ref::run_pipeline(inputs);
    restyle::save_image(golden, dir + "/golden.png");

    const restyle::ImageRGB produced = restyle::run_pipeline(inputs);
    restyle::save_image(produced, dir + "/check.png");

    const std::vector<char> golden_bytes = read_bytes(dir + "/golden.png");
    const std::vector<char> produced_bytes = read_bytes(dir + "/check.png");
    std::filesystem::remove(dir + "/check.png");
    if (golden_bytes.empty() || golden_bytes != produced_bytes) {
        std::fprintf(stderr,
                     "make_fixtures: production pipeline does not reproduce the reference "
                     "golden byte-for-byte\n");
        return 1;
    }

    std::printf("fixtures written to %s\n", dir.c_str());
    return 0;
}
