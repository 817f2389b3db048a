#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "png_test_util.hpp"
#include "restyle/image.hpp"

using namespace restyle;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("restyle_img_" + name)).string();
}

std::vector<char> file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("quantize_byte rounds half up after clamping") {
    CHECK(quantize_byte(0.0) == 0);
    CHECK(quantize_byte(1.0) == 255);
    CHECK(quantize_byte(0.5) == 128);  // round(127.5) rounds up
    CHECK(quantize_byte(127.0 / 255.0) == 127);
    CHECK(quantize_byte(128.0 / 255.0) == 128);
    CHECK(quantize_byte(-0.25) == 0);
    CHECK(quantize_byte(1.75) == 255);
}

TEST_CASE("1x1 black and white pixels map through byte/255") {
    const std::string path = temp_path("tiny.png");

    ImageRGB black(1, 1, 0.0);
    save_image(black, path);
    ImageRGB loaded = load_image(path);
    CHECK(loaded.width == 1);
    CHECK(loaded.height == 1);
    CHECK(loaded.at(0, 0, 0) == 0.0);
    CHECK(loaded.at(0, 0, 1) == 0.0);
    CHECK(loaded.at(0, 0, 2) == 0.0);

    ImageRGB white(1, 1, 1.0);
    save_image(white, path);
    loaded = load_image(path);
    CHECK(loaded.at(0, 0, 0) == 1.0);
    CHECK(loaded.at(0, 0, 1) == 1.0);
    CHECK(loaded.at(0, 0, 2) == 1.0);
    std::filesystem::remove(path);
}

TEST_CASE("save/load round trip is exact for quantized images") {
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> dim(1, 40);

    for (int trial = 0; trial < 10; ++trial) {
        const int w = dim(rng), h = dim(rng);
        ImageRGB img(w, h);
        for (double& v : img.data) v = byte(rng) / 255.0;

        const std::string path = temp_path("rt_" + std::to_string(trial) + ".png");
        save_image(img, path);
        const ImageRGB back = load_image(path);
        REQUIRE(back.width == w);
        REQUIRE(back.height == h);
        CHECK(back.data == img.data);

        // Saving the reloaded image reproduces the file bytes.
        const std::string path2 = temp_path("rt2_" + std::to_string(trial) + ".png");
        save_image(back, path2);
        CHECK(file_bytes(path) == file_bytes(path2));
        std::filesystem::remove(path);
        std::filesystem::remove(path2);
    }
}

TEST_CASE("load_mask thresholds at byte 128 by default") {
    const std::string path = temp_path("mask4.png");
    test_png::write_raw(path, 4, 1, 8, PNG_COLOR_TYPE_GRAY, {0, 127, 128, 255});
    const BinaryMask mask = load_mask(path, 0.5);
    CHECK(mask.at(0, 0) == 0);
    CHECK(mask.at(0, 1) == 0);  // 127/255 < 0.5
    CHECK(mask.at(0, 2) == 1);  // 128/255 >= 0.5
    CHECK(mask.at(0, 3) == 1);
    std::filesystem::remove(path);
}

TEST_CASE("load_mask handles all-white and all-black masks") {
    const std::string path = temp_path("mask_flat.png");
    test_png::write_raw(path, 3, 2, 8, PNG_COLOR_TYPE_GRAY, std::vector<std::uint8_t>(6, 255));
    BinaryMask mask = load_mask(path);
    for (auto v : mask.data) CHECK(v == 1);

    test_png::write_raw(path, 3, 2, 8, PNG_COLOR_TYPE_GRAY, std::vector<std::uint8_t>(6, 0));
    mask = load_mask(path);
    for (auto v : mask.data) CHECK(v == 0);
    std::filesystem::remove(path);
}

TEST_CASE("load_mask converts RGB input with Rec.601 luminance") {
    const std::string path = temp_path("mask_rgb.png");
    // Pure red: 0.299 of full scale, below a 0.5 threshold but above 0.25.
    test_png::write_raw(path, 1, 1, 8, PNG_COLOR_TYPE_RGB, {255, 0, 0});
    CHECK(load_mask(path, 0.5).at(0, 0) == 0);
    CHECK(load_mask(path, 0.25).at(0, 0) == 1);
    std::filesystem::remove(path);
}

TEST_CASE("RGBA input drops alpha") {
    const std::string path = temp_path("rgba.png");
    test_png::write_raw(path, 1, 1, 8, PNG_COLOR_TYPE_RGBA, {10, 20, 30, 7});
    const ImageRGB img = load_image(path);
    CHECK(img.at(0, 0, 0) == doctest::Approx(10.0 / 255.0));
    CHECK(img.at(0, 0, 1) == doctest::Approx(20.0 / 255.0));
    CHECK(img.at(0, 0, 2) == doctest::Approx(30.0 / 255.0));
    std::filesystem::remove(path);
}

TEST_CASE("unsupported inputs are rejected") {
    const std::string path = temp_path("bad.png");

    SUBCASE("missing file") { CHECK_THROWS_AS(load_image("/nonexistent/nope.png"), IoError); }
    SUBCASE("missing mask file") { CHECK_THROWS_AS(load_mask("/nonexistent/nope.png"), IoError); }
    SUBCASE("not a png") {
        std::ofstream(path) << "definitely not a png";
        CHECK_THROWS_AS(load_image(path), IoError);
    }
    SUBCASE("16-bit depth") {
        test_png::write_raw(path, 1, 1, 16, PNG_COLOR_TYPE_GRAY, {0x12, 0x34});
        CHECK_THROWS_AS(load_image(path), IoError);
        CHECK_THROWS_AS(load_mask(path), IoError);
    }
    SUBCASE("grayscale rejected by load_image") {
        test_png::write_raw(path, 1, 1, 8, PNG_COLOR_TYPE_GRAY, {42});
        CHECK_THROWS_AS(load_image(path), IoError);
    }
    std::filesystem::remove(path);
}

TEST_CASE("zero-dimension buffers are rejected") {
    CHECK_THROWS_AS(ImageRGB(0, 4), ValidationError);
    CHECK_THROWS_AS(ImageRGB(4, 0), ValidationError);
    CHECK_THROWS_AS(AlphaMask(0, 1), ValidationError);
    CHECK_THROWS_AS(BinaryMask(1, 0), ValidationError);
}

TEST_CASE("validate flags out-of-range data") {
    ImageRGB img(2, 2, 0.5);
    img.validate();
    img.at(1, 1, 2) = 1.5;
    CHECK_THROWS_AS(img.validate(), ValidationError);

    AlphaMask alpha(2, 2, 0.25);
    alpha.validate();
    alpha.at(0, 1) = -0.1;
    CHECK_THROWS_AS(alpha.validate(), ValidationError);

    BinaryMask mask(2, 2, 1);
    mask.validate();
    mask.at(0, 0) = 2;
    CHECK_THROWS_AS(mask.validate(), ValidationError);
}

TEST_CASE("save_alpha quantizes and reloads as the same ramp") {
    const std::string path = temp_path("alpha.png");
    AlphaMask alpha(4, 1);
    alpha.at(0, 0) = 0.0;
    alpha.at(0, 1) = 1.0 / 3.0;
    alpha.at(0, 2) = 2.0 / 3.0;
    alpha.at(0, 3) = 1.0;
    save_alpha(alpha, path);
    const AlphaMask back = load_alpha(path);
    for (int c = 0; c < 4; ++c)
        CHECK(back.at(0, c) == doctest::Approx(alpha.at(0, c)).epsilon(1.0 / 255.0));
    std::filesystem::remove(path);
}

TEST_CASE("config invariants") {
    PipelineConfig cfg;
    cfg.validate();

    cfg.canny_low = 0.5;
    cfg.canny_high = 0.3;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = PipelineConfig{};
    cfg.canny_sigma = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    cfg = PipelineConfig{};
    cfg.feather_radius = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}
