#include "restyle/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>

namespace restyle {

namespace {

constexpr double kRec601R = 0.299;
constexpr double kRec601G = 0.587;
constexpr double kRec601B = 0.114;

void check_dims(int w, int h, const char* what) {
    if (w < 1 || h < 1) {
        throw ValidationError(std::string(what) + ": dimensions must be at least 1x1, got " +
                              std::to_string(w) + "x" + std::to_string(h));
    }
}

struct PngReader {
    std::FILE* file = nullptr;
    png_structp png = nullptr;
    png_infop info = nullptr;

    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (file) std::fclose(file);
    }
};

struct PngWriter {
    std::FILE* file = nullptr;
    png_structp png = nullptr;
    png_infop info = nullptr;

    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (file) std::fclose(file);
    }
};

struct DecodedPng {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 = gray, 3 = rgb
    bool gray_source = false;
    std::vector<std::uint8_t> bytes;
};

// Decodes an 8-bit PNG to gray or RGB bytes. Alpha is stripped, palette and
// gray expand to their natural channel count. 16-bit files are rejected.
DecodedPng decode_png(const std::string& path, bool want_gray_passthrough) {
    // All locals with destructors are constructed before the setjmp point so
    // a longjmp never skips their initialization.
    DecodedPng out;
    std::vector<png_bytep> rows;
    PngReader r;

    r.file = std::fopen(path.c_str(), "rb");
    if (!r.file) throw IoError("cannot open '" + path + "' for reading");

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, r.file) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw IoError("'" + path + "' is not a PNG file");

    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) throw IoError("libpng init failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) throw IoError("libpng init failed");

    if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode '" + path + "'");

    png_init_io(r.png, r.file);
    png_set_sig_bytes(r.png, 8);
    png_read_info(r.png, r.info);

    const png_uint_32 w = png_get_image_width(r.png, r.info);
    const png_uint_32 h = png_get_image_height(r.png, r.info);
    const int bit_depth = png_get_bit_depth(r.png, r.info);
    const int color_type = png_get_color_type(r.png, r.info);

    if (bit_depth == 16)
        throw IoError("'" + path + "': 16-bit PNGs are unsupported, expected 8-bit");
    if (w == 0 || h == 0) throw IoError("'" + path + "': zero-dimension image");

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
    if (bit_depth < 8) png_set_packing(r.png);
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
    png_set_strip_alpha(r.png);
    const bool gray_source =
        color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA;
    if (gray_source && !want_gray_passthrough) png_set_gray_to_rgb(r.png);

    png_read_update_info(r.png, r.info);
    const int channels = png_get_channels(r.png, r.info);
    if (channels != 1 && channels != 3)
        throw IoError("'" + path + "': unsupported channel layout after decode");

    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.channels = channels;
    out.gray_source = gray_source;
    out.bytes.resize(static_cast<std::size_t>(w) * h * channels);

    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = out.bytes.data() + static_cast<std::size_t>(y) * w * channels;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return out;
}

void encode_png(const std::string& path, int width, int height, int channels,
                const std::vector<std::uint8_t>& bytes) {
    std::vector<png_bytep> rows;
    PngWriter w;

    w.file = std::fopen(path.c_str(), "wb");
    if (!w.file) throw IoError("cannot open '" + path + "' for writing");

    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!w.png) throw IoError("libpng init failed");
    w.info = png_create_info_struct(w.png);
    if (!w.info) throw IoError("libpng init failed");

    if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to write '" + path + "'");

    png_init_io(w.png, w.file);
    // Fixed filter and compression settings keep the byte stream reproducible.
    png_set_filter(w.png, 0, PNG_FILTER_NONE);
    png_set_compression_level(w.png, 6);
    png_set_IHDR(w.png, w.info, width, height, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);

    rows.resize(height);
    for (int y = 0; y < height; ++y)
        rows[y] =
            const_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(y) * width * channels);
    png_write_image(w.png, rows.data());
    png_write_end(w.png, nullptr);
}

double luminance(double r, double g, double b) {
    return kRec601R * r + kRec601G * g + kRec601B * b;
}

AlphaMask decode_gray_values(const std::string& path) {
    const DecodedPng d = decode_png(path, /*want_gray_passthrough=*/true);
    AlphaMask out(d.width, d.height);
    if (d.channels == 1) {
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = d.bytes[i] / 255.0;
    } else {
        for (std::size_t i = 0; i < out.data.size(); ++i) {
            out.data[i] = luminance(d.bytes[3 * i] / 255.0, d.bytes[3 * i + 1] / 255.0,
                                    d.bytes[3 * i + 2] / 255.0);
        }
    }
    return out;
}

}  // namespace

ImageRGB::ImageRGB(int w, int h, double fill) : width(w), height(h) {
    check_dims(w, h, "ImageRGB");
    data.assign(static_cast<std::size_t>(w) * h * 3, fill);
}

void ImageRGB::validate() const {
    check_dims(width, height, "ImageRGB");
    if (data.size() != pixel_count() * 3)
        throw ValidationError("ImageRGB: buffer size does not match dimensions");
    for (double v : data)
        if (!(v >= 0.0 && v <= 1.0))
            throw ValidationError("ImageRGB: channel value outside [0, 1]");
}

AlphaMask::AlphaMask(int w, int h, double fill) : width(w), height(h) {
    check_dims(w, h, "AlphaMask");
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

void AlphaMask::validate() const {
    check_dims(width, height, "AlphaMask");
    if (data.size() != pixel_count())
        throw ValidationError("AlphaMask: buffer size does not match dimensions");
    for (double v : data)
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("AlphaMask: value outside [0, 1]");
}

BinaryMask::BinaryMask(int w, int h, std::uint8_t fill) : width(w), height(h) {
    check_dims(w, h, "BinaryMask");
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

AlphaMask BinaryMask::to_alpha() const {
    AlphaMask out(width, height);
    for (std::size_t i = 0; i < data.size(); ++i) out.data[i] = data[i] ? 1.0 : 0.0;
    return out;
}

void BinaryMask::validate() const {
    check_dims(width, height, "BinaryMask");
    if (data.size() != pixel_count())
        throw ValidationError("BinaryMask: buffer size does not match dimensions");
    for (std::uint8_t v : data)
        if (v > 1) throw ValidationError("BinaryMask: value is not 0 or 1");
}

void PipelineConfig::validate() const {
    if (!(canny_sigma > 0.0)) throw ValidationError("config: canny_sigma must be > 0");
    if (!(canny_low >= 0.0 && canny_low <= 1.0))
        throw ValidationError("config: canny_low must be in [0, 1]");
    if (!(canny_high >= 0.0 && canny_high <= 1.0))
        throw ValidationError("config: canny_high must be in [0, 1]");
    if (!(canny_low < canny_high)) throw ValidationError("config: canny_low must be < canny_high");
    if (!(feather_radius >= 0.0)) throw ValidationError("config: feather_radius must be >= 0");
    if (!(mask_threshold >= 0.0 && mask_threshold <= 1.0))
        throw ValidationError("config: mask_threshold must be in [0, 1]");
}

std::uint8_t quantize_byte(double v) {
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    const double scaled = std::floor(v * 255.0 + 0.5);
    return static_cast<std::uint8_t>(scaled > 255.0 ? 255.0 : scaled);
}

ImageRGB load_image(const std::string& path) {
    const DecodedPng d = decode_png(path, /*want_gray_passthrough=*/false);
    if (d.channels != 3 || d.gray_source)
        throw IoError("'" + path + "': expected an RGB or RGBA PNG");
    ImageRGB img(d.width, d.height);
    const std::size_t n = img.pixel_count() * 3;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) img.data[i] = d.bytes[i] / 255.0;
    return img;
}

void save_image(const ImageRGB& img, const std::string& path) {
    img.validate();
    std::vector<std::uint8_t> bytes(img.pixel_count() * 3);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(bytes.size()); ++i)
        bytes[i] = quantize_byte(img.data[i]);
    encode_png(path, img.width, img.height, 3, bytes);
}

BinaryMask load_mask(const std::string& path, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw ValidationError("load_mask: threshold must be in [0, 1]");
    const AlphaMask values = decode_gray_values(path);
    BinaryMask mask(values.width, values.height);
    for (std::size_t i = 0; i < values.data.size(); ++i)
        mask.data[i] = values.data[i] >= threshold ? 1 : 0;
    return mask;
}

AlphaMask load_alpha(const std::string& path) { return decode_gray_values(path); }

void save_alpha(const AlphaMask& mask, const std::string& path) {
    mask.validate();
    std::vector<std::uint8_t> bytes(mask.pixel_count());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize_byte(mask.data[i]);
    encode_png(path, mask.width, mask.height, 1, bytes);
}

}  // namespace restyle
