#include "restyle/style_loss.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

#include "restyle/parallel.hpp"

namespace restyle {

namespace {

constexpr char kFmapMagic[4] = {'F', 'M', 'A', 'P'};
constexpr std::uint8_t kFmapVersion = 1;

void check_same_shape(const FeatureMap& f, const FeatureMap& p, const char* what) {
    if (f.n_filters != p.n_filters || f.map_size != p.map_size)
        throw ValidationError(std::string(what) + ": feature map dimensions differ (" +
                              std::to_string(f.n_filters) + "x" + std::to_string(f.map_size) +
                              " vs " + std::to_string(p.n_filters) + "x" +
                              std::to_string(p.map_size) + ")");
}

void put_u32_le(std::uint8_t* out, std::uint32_t v) {
    out[0] = static_cast<std::uint8_t>(v);
    out[1] = static_cast<std::uint8_t>(v >> 8);
    out[2] = static_cast<std::uint8_t>(v >> 16);
    out[3] = static_cast<std::uint8_t>(v >> 24);
}

std::uint32_t get_u32_le(const std::uint8_t* in) {
    return static_cast<std::uint32_t>(in[0]) | (static_cast<std::uint32_t>(in[1]) << 8) |
           (static_cast<std::uint32_t>(in[2]) << 16) | (static_cast<std::uint32_t>(in[3]) << 24);
}

void put_f64_le(std::uint8_t* out, double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(bits >> (8 * i));
}

double get_f64_le(const std::uint8_t* in) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

FeatureMap::FeatureMap(int n, int m, double fill) : n_filters(n), map_size(m) {
    if (n < 1 || m < 1)
        throw ValidationError("FeatureMap: dimensions must be at least 1x1, got " +
                              std::to_string(n) + "x" + std::to_string(m));
    data.assign(static_cast<std::size_t>(n) * m, fill);
}

void FeatureMap::validate() const {
    if (n_filters < 1 || map_size < 1)
        throw ValidationError("FeatureMap: dimensions must be at least 1x1");
    if (data.size() != static_cast<std::size_t>(n_filters) * map_size)
        throw ValidationError("FeatureMap: buffer size does not match dimensions");
    for (double v : data)
        if (!std::isfinite(v)) throw ValidationError("FeatureMap: non-finite activation");
}

GramMatrix::GramMatrix(int n_, double fill) : n(n_) {
    if (n_ < 1) throw ValidationError("GramMatrix: dimension must be at least 1");
    data.assign(static_cast<std::size_t>(n_) * n_, fill);
}

LossWeights LossWeights::uniform(std::size_t layers) {
    LossWeights w;
    w.layer_weights.assign(layers, layers ? 1.0 / static_cast<double>(layers) : 0.0);
    return w;
}

void LossWeights::validate() const {
    for (double w : layer_weights)
        if (!(w >= 0.0)) throw ValidationError("LossWeights: layer weight must be >= 0");
    if (!(alpha >= 0.0) || !(beta >= 0.0))
        throw ValidationError("LossWeights: alpha and beta must be >= 0");
    if (!(alpha + beta > 0.0)) throw ValidationError("LossWeights: alpha + beta must be > 0");
}

GramMatrix gram(const FeatureMap& f) {
    const int n = f.n_filters;
    const int m = f.map_size;
    GramMatrix g(n);
    // One output element per task; the inner sum keeps a fixed order, so the
    // result does not depend on the thread count.
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const double* fi = f.data.data() + static_cast<std::size_t>(i) * m;
        for (int j = 0; j <= i; ++j) {
            const double* fj = f.data.data() + static_cast<std::size_t>(j) * m;
            double acc = 0.0;
            for (int k = 0; k < m; ++k) acc += fi[k] * fj[k];
            g.at(static_cast<int>(i), j) = acc;
            g.at(j, static_cast<int>(i)) = acc;
        }
    }
    return g;
}

double content_loss(const FeatureMap& f, const FeatureMap& p) {
    check_same_shape(f, p, "content_loss");
    const std::size_t n = f.data.size();
    const double sum = blocked_reduce<double>(
        n, 0.0,
        [&](std::size_t b, std::size_t e) {
            double acc = 0.0;
            for (std::size_t i = b; i < e; ++i) {
                const double d = f.data[i] - p.data[i];
                acc += d * d;
            }
            return acc;
        },
        [](double a, double b) { return a + b; });
    return 0.5 * sum;
}

double layer_style_loss(const FeatureMap& f, const GramMatrix& a, double w) {
    if (a.n != f.n_filters)
        throw ValidationError("style_loss: gram dimension " + std::to_string(a.n) +
                              " does not match n_filters " + std::to_string(f.n_filters));
    const GramMatrix g = gram(f);
    const std::size_t n = g.data.size();
    const double sum = blocked_reduce<double>(
        n, 0.0,
        [&](std::size_t b, std::size_t e) {
            double acc = 0.0;
            for (std::size_t i = b; i < e; ++i) {
                const double d = g.data[i] - a.data[i];
                acc += d * d;
            }
            return acc;
        },
        [](double x, double y) { return x + y; });
    const double nl = static_cast<double>(f.n_filters);
    const double ml = static_cast<double>(f.map_size);
    return w / (4.0 * nl * nl * ml * ml) * sum;
}

double style_loss(std::span<const FeatureMap> generated, std::span<const GramMatrix> style_grams,
                  const LossWeights& w) {
    if (generated.size() != style_grams.size())
        throw ValidationError("style_loss: layer count mismatch (" +
                              std::to_string(generated.size()) + " feature maps, " +
                              std::to_string(style_grams.size()) + " grams)");
    if (w.layer_weights.size() != generated.size())
        throw ValidationError("style_loss: expected " + std::to_string(generated.size()) +
                              " layer weights, got " + std::to_string(w.layer_weights.size()));
    double total = 0.0;
    for (std::size_t l = 0; l < generated.size(); ++l)
        total += layer_style_loss(generated[l], style_grams[l], w.layer_weights[l]);
    return total;
}

double total_loss(double l_content, double l_style, const LossWeights& w) {
    return w.alpha * l_content + w.beta * l_style;
}

FeatureMap content_loss_grad(const FeatureMap& f, const FeatureMap& p) {
    check_same_shape(f, p, "content_loss_grad");
    FeatureMap out(f.n_filters, f.map_size);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(out.data.size()); ++i)
        out.data[i] = f.data[i] - p.data[i];
    return out;
}

FeatureMap style_loss_grad(const FeatureMap& f, const GramMatrix& a, double w) {
    if (a.n != f.n_filters)
        throw ValidationError("style_loss_grad: gram dimension " + std::to_string(a.n) +
                              " does not match n_filters " + std::to_string(f.n_filters));
    const GramMatrix g = gram(f);
    const int n = f.n_filters;
    const int m = f.map_size;
    const double nl = static_cast<double>(n);
    const double ml = static_cast<double>(m);
    const double scale = w / (nl * nl * ml * ml);
    FeatureMap out(n, m);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        for (int k = 0; k < m; ++k) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                acc += (g.at(static_cast<int>(i), j) - a.at(static_cast<int>(i), j)) * f.at(j, k);
            out.at(static_cast<int>(i), k) = scale * acc;
        }
    }
    return out;
}

FeatureMap load_fmap(const std::string& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw IoError("cannot open '" + path + "' for reading");

    std::uint8_t header[13];
    if (std::fread(header, 1, sizeof header, file.get()) != sizeof header)
        throw IoError("'" + path + "': truncated FMAP header");
    if (std::memcmp(header, kFmapMagic, 4) != 0)
        throw IoError("'" + path + "': not an FMAP file (bad magic)");
    if (header[4] != kFmapVersion)
        throw IoError("'" + path + "': unsupported FMAP version " + std::to_string(header[4]));

    const std::uint32_t n = get_u32_le(header + 5);
    const std::uint32_t m = get_u32_le(header + 9);
    if (n < 1 || m < 1) throw IoError("'" + path + "': FMAP dimensions must be at least 1x1");
    if (n > (1u << 20) || m > (1u << 28) ||
        static_cast<std::uint64_t>(n) * m > (1ull << 30))
        throw IoError("'" + path + "': FMAP dimensions implausibly large");

    FeatureMap f(static_cast<int>(n), static_cast<int>(m));
    std::vector<std::uint8_t> raw(f.data.size() * 8);
    if (std::fread(raw.data(), 1, raw.size(), file.get()) != raw.size())
        throw IoError("'" + path + "': truncated FMAP payload");
    for (std::size_t i = 0; i < f.data.size(); ++i) f.data[i] = get_f64_le(raw.data() + i * 8);
    for (double v : f.data)
        if (!std::isfinite(v)) throw IoError("'" + path + "': non-finite activation");
    return f;
}

void save_fmap(const FeatureMap& f, const std::string& path) {
    f.validate();
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) throw IoError("cannot open '" + path + "' for writing");

    std::uint8_t header[13];
    std::memcpy(header, kFmapMagic, 4);
    header[4] = kFmapVersion;
    put_u32_le(header + 5, static_cast<std::uint32_t>(f.n_filters));
    put_u32_le(header + 9, static_cast<std::uint32_t>(f.map_size));

    std::vector<std::uint8_t> raw(f.data.size() * 8);
    for (std::size_t i = 0; i < f.data.size(); ++i) put_f64_le(raw.data() + i * 8, f.data[i]);

    if (std::fwrite(header, 1, sizeof header, file.get()) != sizeof header ||
        std::fwrite(raw.data(), 1, raw.size(), file.get()) != raw.size())
        throw IoError("failed to write '" + path + "'");
}

GramMatrix load_gram(const std::string& path) {
    const FeatureMap f = load_fmap(path);
    if (f.n_filters != f.map_size)
        throw IoError("'" + path + "': gram matrix must be square, got " +
                      std::to_string(f.n_filters) + "x" + std::to_string(f.map_size));
    GramMatrix g(f.n_filters);
    g.data = f.data;
    return g;
}

void save_gram(const GramMatrix& g, const std::string& path) {
    FeatureMap f(g.n, g.n);
    f.data = g.data;
    save_fmap(f, path);
}

}  // namespace restyle
