#pragma once

// Raw libpng writer for decoder tests that need formats save_image never
// produces (RGBA, 16-bit, grayscale).

#include <png.h>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace test_png {

inline void write_raw(const std::string& path, int width, int height, int bit_depth,
                      int color_type, const std::vector<std::uint8_t>& bytes) {
    int channels = 1;
    if (color_type == PNG_COLOR_TYPE_RGB) channels = 3;
    if (color_type == PNG_COLOR_TYPE_RGBA) channels = 4;
    if (color_type == PNG_COLOR_TYPE_GRAY_ALPHA) channels = 2;
    const std::size_t stride = static_cast<std::size_t>(width) * channels * (bit_depth / 8);

    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(y) * stride);

    std::FILE* file = std::fopen(path.c_str(), "wb");
    if (!file) throw std::runtime_error("cannot open " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(file);
        throw std::runtime_error("png write failed for " + path);
    }
    png_init_io(png, file);
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(file);
}

}  // namespace test_png
