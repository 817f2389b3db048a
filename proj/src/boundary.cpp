#include "restyle/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <vector>

namespace restyle {

namespace {

constexpr double kRec601R = 0.299;
constexpr double kRec601G = 0.587;
constexpr double kRec601B = 0.114;

std::vector<double> to_grayscale(const ImageRGB& img) {
    std::vector<double> gray(img.pixel_count());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(gray.size()); ++i) {
        const double* px = img.data.data() + static_cast<std::size_t>(i) * 3;
        gray[i] = kRec601R * px[0] + kRec601G * px[1] + kRec601B * px[2];
    }
    return gray;
}

int clamp_index(int v, int hi) { return v < 0 ? 0 : (v >= hi ? hi - 1 : v); }

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        sum += k[i + radius];
    }
    for (double& w : k) w /= sum;
    return k;
}

std::vector<double> gaussian_blur(const std::vector<double>& src, int width, int height,
                                  double sigma) {
    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size()) / 2;
    std::vector<double> tmp(src.size()), out(src.size());
    // Horizontal pass, replicated borders.
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * src[r * width + clamp_index(c + k, width)];
            tmp[r * width + c] = acc;
        }
    }
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * tmp[clamp_index(static_cast<int>(r) + k, height) * width + c];
            out[r * width + c] = acc;
        }
    }
    return out;
}

struct Gradients {
    std::vector<double> magnitude;
    std::vector<std::uint8_t> direction;  // 0 = E/W, 1 = NW/SE, 2 = N/S, 3 = NE/SW
    double max_magnitude = 0.0;
};

Gradients sobel_gradients(const std::vector<double>& img, int width, int height) {
    Gradients g;
    g.magnitude.resize(img.size());
    g.direction.resize(img.size());
    double maxmag = 0.0;
#pragma omp parallel for schedule(static) reduction(max : maxmag)
    for (long long r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            auto px = [&](int dr, int dc) {
                return img[clamp_index(static_cast<int>(r) + dr, height) * width +
                           clamp_index(c + dc, width)];
            };
            const double gx = (px(-1, 1) + 2.0 * px(0, 1) + px(1, 1)) -
                              (px(-1, -1) + 2.0 * px(0, -1) + px(1, -1));
            const double gy = (px(1, -1) + 2.0 * px(1, 0) + px(1, 1)) -
                              (px(-1, -1) + 2.0 * px(-1, 0) + px(-1, 1));
            const double mag = std::sqrt(gx * gx + gy * gy);
            g.magnitude[r * width + c] = mag;
            if (mag > maxmag) maxmag = mag;

            double angle = std::atan2(gy, gx);
            if (angle < 0.0) angle += M_PI;
            std::uint8_t bin;
            if (angle < M_PI / 8.0 || angle >= 7.0 * M_PI / 8.0)
                bin = 0;
            else if (angle < 3.0 * M_PI / 8.0)
                bin = 1;
            else if (angle < 5.0 * M_PI / 8.0)
                bin = 2;
            else
                bin = 3;
            g.direction[r * width + c] = bin;
        }
    }
    g.max_magnitude = maxmag;
    return g;
}

}  // namespace

EdgeMap::EdgeMap(int w, int h) : width(w), height(h) {
    data.assign(static_cast<std::size_t>(w) * h, 0);
}

std::size_t EdgeMap::count() const {
    return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
}

EdgeMap canny_edges(const ImageRGB& img, const PipelineConfig& cfg) {
    cfg.validate();
    const int width = img.width, height = img.height;
    EdgeMap edges(width, height);

    const std::vector<double> gray = to_grayscale(img);
    const std::vector<double> blurred = gaussian_blur(gray, width, height, cfg.canny_sigma);
    const Gradients grad = sobel_gradients(blurred, width, height);
    if (grad.max_magnitude == 0.0) return edges;

    // Non-maximum suppression along the quantized gradient direction.
    static constexpr int offsets[4][2][2] = {
        {{0, -1}, {0, 1}},    // E/W
        {{-1, -1}, {1, 1}},   // NW/SE diagonal
        {{-1, 0}, {1, 0}},    // N/S
        {{-1, 1}, {1, -1}},   // NE/SW diagonal
    };
    std::vector<std::uint8_t> is_max(grad.magnitude.size(), 0);
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double mag = grad.magnitude[r * width + c];
            if (mag <= 0.0) continue;
            const auto& off = offsets[grad.direction[r * width + c]];
            double n1 = 0.0, n2 = 0.0;
            const int r1 = static_cast<int>(r) + off[0][0], c1 = c + off[0][1];
            const int r2 = static_cast<int>(r) + off[1][0], c2 = c + off[1][1];
            if (r1 >= 0 && r1 < height && c1 >= 0 && c1 < width) n1 = grad.magnitude[r1 * width + c1];
            if (r2 >= 0 && r2 < height && c2 >= 0 && c2 < width) n2 = grad.magnitude[r2 * width + c2];
            if (mag >= n1 && mag >= n2) is_max[r * width + c] = 1;
        }
    }

    const double high = cfg.canny_high * grad.max_magnitude;
    const double low = cfg.canny_low * grad.max_magnitude;

    // Hysteresis: flood from strong pixels through weak ones, 8-connected.
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < is_max.size(); ++i) {
        if (is_max[i] && grad.magnitude[i] >= high && !edges.data[i]) {
            edges.data[i] = 1;
            stack.push_back(i);
            while (!stack.empty()) {
                const std::size_t p = stack.back();
                stack.pop_back();
                const int pr = static_cast<int>(p / width), pc = static_cast<int>(p % width);
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        const int qr = pr + dr, qc = pc + dc;
                        if (qr < 0 || qr >= height || qc < 0 || qc >= width) continue;
                        const std::size_t q = static_cast<std::size_t>(qr) * width + qc;
                        if (!edges.data[q] && is_max[q] && grad.magnitude[q] >= low) {
                            edges.data[q] = 1;
                            stack.push_back(q);
                        }
                    }
                }
            }
        }
    }
    return edges;
}

namespace detail {

// Exact nearest-site transform. Ties (equal squared distance) resolve to the
// smaller site row, then the smaller site column. Implemented as a
// lower-envelope sweep on the key (d^2 * H * W + site_row * W + site_col):
// the per-column tail is unique, so parabolas never tie at integer pixels and
// the envelope winner is the exact lexicographic minimum. Fits in 64 bits for
// dimensions up to 16384.
NearestEdgeField nearest_site_field(int width, int height, const std::uint8_t* sites) {
    NearestEdgeField field;
    field.width = width;
    field.height = height;
    const std::size_t n = static_cast<std::size_t>(width) * height;
    field.site_row.assign(n, -1);
    field.site_col.assign(n, -1);

    bool any = false;
    for (std::size_t i = 0; i < n && !any; ++i) any = sites[i] != 0;
    if (!any) return field;

    // Phase 1: per column, nearest site row (ties toward the smaller row).
    std::vector<std::int32_t> col_site(n, -1);
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < width; ++c) {
        std::int32_t last = -1;
        for (int r = 0; r < height; ++r) {
            if (sites[static_cast<std::size_t>(r) * width + c]) last = r;
            col_site[static_cast<std::size_t>(r) * width + c] = last;
        }
        last = -1;
        for (int r = height - 1; r >= 0; --r) {
            const std::size_t i = static_cast<std::size_t>(r) * width + c;
            if (sites[i]) last = r;
            if (last >= 0) {
                const std::int32_t up = col_site[i];
                // Strict comparison keeps the smaller row on equal distance.
                if (up < 0 || (last - r) < (r - up)) col_site[i] = last;
            }
        }
    }

    const std::int64_t key_scale = static_cast<std::int64_t>(width) * height;
    const auto le_frac = [](std::int64_t n1, std::int64_t d1, std::int64_t n2, std::int64_t d2) {
        // d1, d2 > 0
        return static_cast<__int128>(n1) * d2 <= static_cast<__int128>(n2) * d1;
    };

    // Phase 2: per row, lower envelope across columns.
#pragma omp parallel
    {
        std::vector<int> v(width);            // column of each envelope parabola
        std::vector<std::int64_t> z_num(width + 1), z_den(width + 1);
        std::vector<std::int64_t> cvals(width);
        std::vector<int> cols(width);

#pragma omp for schedule(static)
        for (long long r = 0; r < height; ++r) {
            int m = 0;
            for (int c = 0; c < width; ++c) {
                const std::int32_t srow = col_site[r * width + c];
                if (srow < 0) continue;
                const std::int64_t dy = static_cast<std::int64_t>(r) - srow;
                cols[m] = c;
                cvals[m] = dy * dy * key_scale + static_cast<std::int64_t>(srow) * width + c;
                ++m;
            }
            if (m == 0) continue;  // unreachable: some column always has a site

            int k = 0;
            v[0] = 0;
            z_num[0] = std::numeric_limits<std::int64_t>::min();
            z_den[0] = 1;
            for (int idx = 1; idx < m; ++idx) {
                const std::int64_t jb = cols[idx];
                while (true) {
                    const std::int64_t ja = cols[v[k]];
                    const std::int64_t num =
                        key_scale * (jb * jb - ja * ja) + cvals[idx] - cvals[v[k]];
                    const std::int64_t den = 2 * key_scale * (jb - ja);
                    if (k > 0 && le_frac(num, den, z_num[k], z_den[k])) {
                        --k;
                        continue;
                    }
                    ++k;
                    v[k] = idx;
                    z_num[k] = num;
                    z_den[k] = den;
                    break;
                }
            }

            int ki = 0;
            for (int c = 0; c < width; ++c) {
                while (ki < k && le_frac(z_num[ki + 1], z_den[ki + 1], c, 1)) ++ki;
                const int jwin = cols[v[ki]];
                const std::size_t i = static_cast<std::size_t>(r) * width + c;
                field.site_row[i] = col_site[r * width + jwin];
                field.site_col[i] = jwin;
            }
        }
    }
    return field;
}

}  // namespace detail

NearestEdgeField nearest_edge_field(const EdgeMap& edges) {
    return detail::nearest_site_field(edges.width, edges.height, edges.data.data());
}

namespace {

// Squared distance from every pixel to the nearest in-image non-mask pixel;
// -1 where no non-mask pixel exists.
std::vector<std::int64_t> interior_sqdist(const BinaryMask& mask) {
    std::vector<std::uint8_t> inverted(mask.data.size());
    for (std::size_t i = 0; i < mask.data.size(); ++i) inverted[i] = mask.data[i] ? 0 : 1;
    const NearestEdgeField f = detail::nearest_site_field(mask.width, mask.height, inverted.data());
    std::vector<std::int64_t> d2(mask.data.size(), -1);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(d2.size()); ++i) {
        if (f.site_row[i] < 0) continue;
        const std::int64_t dr = i / mask.width - f.site_row[i];
        const std::int64_t dc = i % mask.width - f.site_col[i];
        d2[i] = dr * dr + dc * dc;
    }
    return d2;
}

}  // namespace

BinaryMask refine_mask(const BinaryMask& mask, const EdgeMap& edges, const PipelineConfig& cfg) {
    if (mask.width != edges.width || mask.height != edges.height)
        throw ValidationError("refine_mask: mask dimensions (" + std::to_string(mask.width) + "x" +
                              std::to_string(mask.height) + ") do not match edge map (" +
                              std::to_string(edges.width) + "x" + std::to_string(edges.height) +
                              ")");
    if (edges.empty()) return mask;

    const int width = mask.width, height = mask.height;
    const NearestEdgeField nearest = nearest_edge_field(edges);

    std::vector<std::int64_t> boundary_d2;
    double cap_sq = 0.0;
    if (cfg.erosion_capped()) {
        boundary_d2 = interior_sqdist(mask);
        cap_sq = cfg.erosion_cap * cfg.erosion_cap;
    }

    BinaryMask refined = mask;
    std::vector<std::uint8_t> visited(mask.data.size(), 0);
    std::deque<std::size_t> fifo;

    // Periphery seeds; pixels beyond the border count as non-mask.
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * width + c;
            if (!mask.data[i]) continue;
            const bool outer = r == 0 || r == height - 1 || c == 0 || c == width - 1 ||
                               !mask.data[i - width] || !mask.data[i + width] ||
                               !mask.data[i - 1] || !mask.data[i + 1];
            if (outer) fifo.push_back(i);
        }
    }

    while (!fifo.empty()) {
        const std::size_t p = fifo.front();
        fifo.pop_front();
        if (visited[p]) continue;
        visited[p] = 1;

        const int pr = static_cast<int>(p / width), pc = static_cast<int>(p % width);
        const std::size_t e =
            static_cast<std::size_t>(nearest.row_at(pr, pc)) * width + nearest.col_at(pr, pc);
        if (!refined.data[e]) continue;  // nearest edge outside the evolving mask: skip
        if (cfg.erosion_capped() &&
            (boundary_d2[p] < 0 || static_cast<double>(boundary_d2[p]) > cap_sq))
            continue;  // beyond the cap: keep the pixel, do not spread

        refined.data[p] = 0;
        const int nr[4] = {pr - 1, pr + 1, pr, pr};
        const int nc[4] = {pc, pc, pc - 1, pc + 1};
        for (int k = 0; k < 4; ++k) {
            if (nr[k] < 0 || nr[k] >= height || nc[k] < 0 || nc[k] >= width) continue;
            const std::size_t q = static_cast<std::size_t>(nr[k]) * width + nc[k];
            if (mask.data[q] && !visited[q]) fifo.push_back(q);
        }
    }
    return refined;
}

AlphaMask feather_mask(const BinaryMask& mask, double radius) {
    if (!(radius >= 0.0)) throw ValidationError("feather_mask: radius must be >= 0");
    if (radius == 0.0) return mask.to_alpha();

    const std::vector<std::int64_t> d2 = interior_sqdist(mask);
    AlphaMask alpha(mask.width, mask.height);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(mask.data.size()); ++i) {
        if (!mask.data[i]) {
            alpha.data[i] = 0.0;
        } else if (d2[i] < 0) {
            alpha.data[i] = 1.0;  // mask covers the whole image
        } else {
            const double d = std::sqrt(static_cast<double>(d2[i]));
            alpha.data[i] = std::min(1.0, d / radius);
        }
    }
    return alpha;
}

}  // namespace restyle
