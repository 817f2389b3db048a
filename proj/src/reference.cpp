#include "restyle/reference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <vector>

namespace restyle::ref {

namespace {

constexpr double kRec601R = 0.299;
constexpr double kRec601G = 0.587;
constexpr double kRec601B = 0.114;

double clamp_unit(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

std::vector<std::size_t> selected_indices(int width, int height, const BinaryMask* selection) {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<std::size_t> idx;
    if (!selection) {
        idx.resize(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        return idx;
    }
    if (selection->width != width || selection->height != height)
        throw ValidationError("ref: selection mask dimensions do not match image");
    for (std::size_t i = 0; i < n; ++i)
        if (selection->data[i]) idx.push_back(i);
    return idx;
}

}  // namespace

LabImage rgb_to_lab(const ImageRGB& img) {
    constexpr double inv_sqrt3 = 0.57735026918962576;
    constexpr double inv_sqrt6 = 0.40824829046386302;
    constexpr double inv_sqrt2 = 0.70710678118654752;
    LabImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const double r = img.data[3 * i], g = img.data[3 * i + 1], b = img.data[3 * i + 2];
        double lms[3];
        for (int k = 0; k < 3; ++k) {
            lms[k] = kRgbToLms[k][0] * r + kRgbToLms[k][1] * g + kRgbToLms[k][2] * b;
            if (lms[k] < kLmsFloor) lms[k] = kLmsFloor;
            lms[k] = std::log10(lms[k]);
        }
        out.data[3 * i] = ((lms[0] + lms[1]) + lms[2]) * inv_sqrt3;
        out.data[3 * i + 1] = ((lms[0] + lms[1]) - 2.0 * lms[2]) * inv_sqrt6;
        out.data[3 * i + 2] = (lms[0] - lms[1]) * inv_sqrt2;
    }
    return out;
}

ImageRGB lab_to_rgb(const LabImage& img) {
    ImageRGB out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const double l = img.data[3 * i], a = img.data[3 * i + 1], b = img.data[3 * i + 2];
        double lms[3];
        for (int k = 0; k < 3; ++k)
            lms[k] = std::pow(10.0, kLabToLogLms[k][0] * l + kLabToLogLms[k][1] * a +
                                        kLabToLogLms[k][2] * b);
        for (int k = 0; k < 3; ++k)
            out.data[3 * i + k] = clamp_unit(kLmsToRgb[k][0] * lms[0] + kLmsToRgb[k][1] * lms[1] +
                                             kLmsToRgb[k][2] * lms[2]);
    }
    return out;
}

EdgeMap canny_edges(const ImageRGB& img, const PipelineConfig& cfg) {
    cfg.validate();
    const int width = img.width, height = img.height;
    EdgeMap edges(width, height);

    std::vector<double> gray(img.pixel_count());
    for (std::size_t i = 0; i < gray.size(); ++i)
        gray[i] = kRec601R * img.data[3 * i] + kRec601G * img.data[3 * i + 1] +
                  kRec601B * img.data[3 * i + 2];

    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * cfg.canny_sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double ksum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] =
            std::exp(-(static_cast<double>(i) * i) / (2.0 * cfg.canny_sigma * cfg.canny_sigma));
        ksum += kernel[i + radius];
    }
    for (double& w : kernel) w /= ksum;

    const auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v >= hi ? hi - 1 : v); };
    std::vector<double> tmp(gray.size()), blurred(gray.size());
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * gray[static_cast<std::size_t>(r) * width + clampi(c + k, width)];
            tmp[static_cast<std::size_t>(r) * width + c] = acc;
        }
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * tmp[static_cast<std::size_t>(clampi(r + k, height)) * width + c];
            blurred[static_cast<std::size_t>(r) * width + c] = acc;
        }

    std::vector<double> mag(gray.size());
    std::vector<std::uint8_t> dir(gray.size());
    double maxmag = 0.0;
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            const auto px = [&](int dr, int dc) {
                return blurred[static_cast<std::size_t>(clampi(r + dr, height)) * width +
                               clampi(c + dc, width)];
            };
            const double gx = (px(-1, 1) + 2.0 * px(0, 1) + px(1, 1)) -
                              (px(-1, -1) + 2.0 * px(0, -1) + px(1, -1));
            const double gy = (px(1, -1) + 2.0 * px(1, 0) + px(1, 1)) -
                              (px(-1, -1) + 2.0 * px(-1, 0) + px(-1, 1));
            const std::size_t i = static_cast<std::size_t>(r) * width + c;
            mag[i] = std::sqrt(gx * gx + gy * gy);
            maxmag = std::max(maxmag, mag[i]);
            double angle = std::atan2(gy, gx);
            if (angle < 0.0) angle += M_PI;
            if (angle < M_PI / 8.0 || angle >= 7.0 * M_PI / 8.0)
                dir[i] = 0;
            else if (angle < 3.0 * M_PI / 8.0)
                dir[i] = 1;
            else if (angle < 5.0 * M_PI / 8.0)
                dir[i] = 2;
            else
                dir[i] = 3;
        }
    if (maxmag == 0.0) return edges;

    static constexpr int offs[4][2][2] = {
        {{0, -1}, {0, 1}}, {{-1, -1}, {1, 1}}, {{-1, 0}, {1, 0}}, {{-1, 1}, {1, -1}}};
    std::vector<std::uint8_t> is_max(gray.size(), 0);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * width + c;
            if (mag[i] <= 0.0) continue;
            double n1 = 0.0, n2 = 0.0;
            const auto& o = offs[dir[i]];
            const int r1 = r + o[0][0], c1 = c + o[0][1], r2 = r + o[1][0], c2 = c + o[1][1];
            if (r1 >= 0 && r1 < height && c1 >= 0 && c1 < width)
                n1 = mag[static_cast<std::size_t>(r1) * width + c1];
            if (r2 >= 0 && r2 < height && c2 >= 0 && c2 < width)
                n2 = mag[static_cast<std::size_t>(r2) * width + c2];
            if (mag[i] >= n1 && mag[i] >= n2) is_max[i] = 1;
        }

    const double high = cfg.canny_high * maxmag, low = cfg.canny_low * maxmag;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < is_max.size(); ++i) {
        if (!is_max[i] || mag[i] < high || edges.data[i]) continue;
        edges.data[i] = 1;
        stack.push_back(i);
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            const int pr = static_cast<int>(p / width), pc = static_cast<int>(p % width);
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    const int qr = pr + dr, qc = pc + dc;
                    if ((dr == 0 && dc == 0) || qr < 0 || qr >= height || qc < 0 || qc >= width)
                        continue;
                    const std::size_t q = static_cast<std::size_t>(qr) * width + qc;
                    if (!edges.data[q] && is_max[q] && mag[q] >= low) {
                        edges.data[q] = 1;
                        stack.push_back(q);
                    }
                }
        }
    }
    return edges;
}

NearestEdgeField nearest_edge_field(const EdgeMap& edges) {
    NearestEdgeField field;
    field.width = edges.width;
    field.height = edges.height;
    const std::size_t n = edges.data.size();
    field.site_row.assign(n, -1);
    field.site_col.assign(n, -1);

    std::vector<std::pair<int, int>> sites;
    for (int r = 0; r < edges.height; ++r)
        for (int c = 0; c < edges.width; ++c)
            if (edges.at(r, c)) sites.emplace_back(r, c);
    if (sites.empty()) return field;

    for (int r = 0; r < edges.height; ++r)
        for (int c = 0; c < edges.width; ++c) {
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            int br = -1, bc = -1;
            for (const auto& [sr, sc] : sites) {
                const std::int64_t dr = r - sr, dc = c - sc;
                const std::int64_t d2 = dr * dr + dc * dc;
                if (d2 < best || (d2 == best && (sr < br || (sr == br && sc < bc)))) {
                    best = d2;
                    br = sr;
                    bc = sc;
                }
            }
            field.site_row[static_cast<std::size_t>(r) * edges.width + c] = br;
            field.site_col[static_cast<std::size_t>(r) * edges.width + c] = bc;
        }
    return field;
}

AlphaMask feather_mask(const BinaryMask& mask, double radius) {
    if (!(radius >= 0.0)) throw ValidationError("ref feather_mask: radius must be >= 0");
    if (radius == 0.0) return mask.to_alpha();

    std::vector<std::pair<int, int>> outside;
    for (int r = 0; r < mask.height; ++r)
        for (int c = 0; c < mask.width; ++c)
            if (!mask.at(r, c)) outside.emplace_back(r, c);

    AlphaMask alpha(mask.width, mask.height);
    for (int r = 0; r < mask.height; ++r)
        for (int c = 0; c < mask.width; ++c) {
            if (!mask.at(r, c)) {
                alpha.at(r, c) = 0.0;
                continue;
            }
            if (outside.empty()) {
                alpha.at(r, c) = 1.0;
                continue;
            }
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (const auto& [sr, sc] : outside) {
                const std::int64_t dr = r - sr, dc = c - sc;
                best = std::min(best, dr * dr + dc * dc);
            }
            alpha.at(r, c) = std::min(1.0, std::sqrt(static_cast<double>(best)) / radius);
        }
    return alpha;
}

BinaryMask refine_mask(const BinaryMask& mask, const EdgeMap& edges, const PipelineConfig& cfg) {
    if (mask.width != edges.width || mask.height != edges.height)
        throw ValidationError("ref refine_mask: dimension mismatch");
    if (edges.empty()) return mask;

    const int width = mask.width, height = mask.height;
    const NearestEdgeField nearest = ref::nearest_edge_field(edges);

    std::vector<double> boundary_dist;
    if (cfg.erosion_capped()) {
        std::vector<std::pair<int, int>> outside;
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c)
                if (!mask.at(r, c)) outside.emplace_back(r, c);
        boundary_dist.assign(mask.data.size(), std::numeric_limits<double>::infinity());
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c) {
                std::int64_t best = std::numeric_limits<std::int64_t>::max();
                for (const auto& [sr, sc] : outside) {
                    const std::int64_t dr = r - sr, dc = c - sc;
                    best = std::min(best, dr * dr + dc * dc);
                }
                if (!outside.empty())
                    boundary_dist[static_cast<std::size_t>(r) * width + c] =
                        std::sqrt(static_cast<double>(best));
            }
    }

    BinaryMask refined = mask;
    std::vector<std::uint8_t> visited(mask.data.size(), 0);
    std::deque<std::size_t> fifo;
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * width + c;
            if (!mask.data[i]) continue;
            const bool outer = r == 0 || r == height - 1 || c == 0 || c == width - 1 ||
                               !mask.data[i - width] || !mask.data[i + width] ||
                               !mask.data[i - 1] || !mask.data[i + 1];
            if (outer) fifo.push_back(i);
        }

    while (!fifo.empty()) {
        const std::size_t p = fifo.front();
        fifo.pop_front();
        if (visited[p]) continue;
        visited[p] = 1;

        const int pr = static_cast<int>(p / width), pc = static_cast<int>(p % width);
        const std::size_t e =
            static_cast<std::size_t>(nearest.row_at(pr, pc)) * width + nearest.col_at(pr, pc);
        if (!refined.data[e]) continue;
        if (cfg.erosion_capped() && boundary_dist[p] > cfg.erosion_cap) continue;

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

PrincipalAxis principal_axis(const LabImage& lab, const BinaryMask* selection,
                             CovarianceMode mode) {
    const std::vector<std::size_t> idx = selected_indices(lab.width, lab.height, selection);
    if (idx.empty()) throw ValidationError("ref principal_axis: empty selection");
    const double n = static_cast<double>(idx.size());

    double mean[3] = {0, 0, 0};
    for (std::size_t i : idx)
        for (int c = 0; c < 3; ++c) mean[c] += lab.data[3 * i + c];
    for (double& m : mean) m /= n;

    double a[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double max_dev = 0.0;
    const bool center = mode == CovarianceMode::MeanCentered;
    for (std::size_t i : idx) {
        double d[3];
        for (int c = 0; c < 3; ++c) {
            const double dev = lab.data[3 * i + c] - mean[c];
            max_dev = std::max(max_dev, std::abs(dev));
            d[c] = center ? dev : lab.data[3 * i + c];
        }
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) a[r][c] += d[r] * d[c];
    }
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a[r][c] /= n;

    const bool degenerate =
        center ? max_dev <= 1e-12 : (a[0][0] + a[1][1] + a[2][2]) <= 1e-24;
    if (degenerate) return PrincipalAxis{{1.0, 0.0, 0.0}};

    // Largest eigenvalue by the closed-form trigonometric method.
    const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    double lambda;
    if (p1 == 0.0) {
        lambda = std::max({a[0][0], a[1][1], a[2][2]});
    } else {
        const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) +
                          (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
        const double p = std::sqrt(p2 / 6.0);
        double b[3][3];
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) b[r][c] = (a[r][c] - (r == c ? q : 0.0)) / p;
        const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                            b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                            b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        const double r = std::clamp(detb / 2.0, -1.0, 1.0);
        const double phi = std::acos(r) / 3.0;
        lambda = q + 2.0 * p * std::cos(phi);
    }

    // Null vector of (A - lambda I) from the largest cross product of rows.
    const double m0[3] = {a[0][0] - lambda, a[0][1], a[0][2]};
    const double m1[3] = {a[0][1], a[1][1] - lambda, a[1][2]};
    const double m2[3] = {a[0][2], a[1][2], a[2][2] - lambda};
    const auto cross = [](const double* u, const double* v) {
        return std::array<double, 3>{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                     u[0] * v[1] - u[1] * v[0]};
    };
    std::array<double, 3> cands[3] = {cross(m0, m1), cross(m0, m2), cross(m1, m2)};
    int best = 0;
    double best_norm = -1.0;
    for (int i = 0; i < 3; ++i) {
        const double nn = cands[i][0] * cands[i][0] + cands[i][1] * cands[i][1] +
                          cands[i][2] * cands[i][2];
        if (nn > best_norm) {
            best_norm = nn;
            best = i;
        }
    }
    std::array<double, 3> v = cands[best];
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (norm == 0.0) return PrincipalAxis{{1.0, 0.0, 0.0}};
    for (double& c : v) c /= norm;
    for (double c : v) {
        if (std::abs(c) > 1e-12) {
            if (c < 0.0)
                for (double& x : v) x = -x;
            break;
        }
    }
    return PrincipalAxis{v};
}

std::vector<double> project(const LabImage& lab, const PrincipalAxis& q,
                            const BinaryMask* selection) {
    const std::vector<std::size_t> idx = selected_indices(lab.width, lab.height, selection);
    std::vector<double> out;
    out.reserve(idx.size());
    for (std::size_t i : idx)
        out.push_back(q.dot(lab.data[3 * i], lab.data[3 * i + 1], lab.data[3 * i + 2]));
    return out;
}

double cdf_value(const std::vector<double>& samples, double x) {
    std::size_t less = 0, less_eq = 0;
    for (double s : samples) {
        if (s < x) ++less;
        if (s <= x) ++less_eq;
    }
    const double n = static_cast<double>(samples.size());
    if (less_eq - less >= 2) return static_cast<double>(less + less_eq) / (2.0 * n);
    return static_cast<double>(less_eq) / n;
}

ImageRGB transfer_colors(const ImageRGB& content, const ImageRGB& style,
                         const BinaryMask* selection, CovarianceMode mode) {
    const std::vector<std::size_t> idx = selected_indices(content.width, content.height, selection);
    if (idx.empty()) throw ValidationError("ref transfer_colors: empty content selection");

    const LabImage content_lab = ref::rgb_to_lab(content);
    const LabImage style_lab = ref::rgb_to_lab(style);
    const PrincipalAxis qc = ref::principal_axis(content_lab, selection, mode);
    const PrincipalAxis qs = ref::principal_axis(style_lab, nullptr, mode);
    const std::vector<double> pc = ref::project(content_lab, qc, selection);
    const std::vector<double> ps = ref::project(style_lab, qs);

    std::vector<double> style_cdf(ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j) style_cdf[j] = cdf_value(ps, ps[j]);

    ImageRGB out = content;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const double u = cdf_value(pc, pc[k]);
        // All-pairs scan minimizing (|F_s(p_j) - u|, p_j, j).
        std::size_t best_j = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        double best_val = 0.0;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            const double gap = std::abs(style_cdf[j] - u);
            if (gap < best_gap || (gap == best_gap && ps[j] < best_val)) {
                best_gap = gap;
                best_val = ps[j];
                best_j = j;
            }
        }
        for (int c = 0; c < 3; ++c) out.data[3 * idx[k] + c] = style.data[3 * best_j + c];
    }
    return out;
}

GramMatrix gram(const FeatureMap& f) {
    GramMatrix g(f.n_filters);
    for (int i = 0; i < f.n_filters; ++i)
        for (int j = 0; j < f.n_filters; ++j) {
            double acc = 0.0;
            for (int k = 0; k < f.map_size; ++k) acc += f.at(i, k) * f.at(j, k);
            g.at(i, j) = acc;
        }
    return g;
}

double content_loss(const FeatureMap& f, const FeatureMap& p) {
    if (f.n_filters != p.n_filters || f.map_size != p.map_size)
        throw ValidationError("ref content_loss: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.data.size(); ++i) {
        const double d = f.data[i] - p.data[i];
        acc += d * d;
    }
    return 0.5 * acc;
}

double layer_style_loss(const FeatureMap& f, const GramMatrix& a, double w) {
    if (a.n != f.n_filters) throw ValidationError("ref layer_style_loss: dimension mismatch");
    const GramMatrix g = ref::gram(f);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.data.size(); ++i) {
        const double d = g.data[i] - a.data[i];
        acc += d * d;
    }
    const double nl = f.n_filters, ml = f.map_size;
    return w / (4.0 * nl * nl * ml * ml) * acc;
}

ImageRGB alpha_blend(const ImageRGB& color_img, const ImageRGB& style_img,
                     const AlphaMask& alpha) {
    if (color_img.width != style_img.width || color_img.height != style_img.height ||
        color_img.width != alpha.width || color_img.height != alpha.height)
        throw ValidationError("ref alpha_blend: dimension mismatch");
    ImageRGB out(color_img.width, color_img.height);
    for (std::size_t i = 0; i < alpha.data.size(); ++i) {
        const double a = alpha.data[i];
        for (int c = 0; c < 3; ++c)
            out.data[3 * i + c] = a * color_img.data[3 * i + c] + (1.0 - a) * style_img.data[3 * i + c];
    }
    return out;
}

ImageRGB run_pipeline(const PipelineInputs& inputs) {
    inputs.validate();
    const EdgeMap edges = ref::canny_edges(inputs.content, inputs.config);
    const BinaryMask refined = ref::refine_mask(inputs.mask, edges, inputs.config);
    const AlphaMask alpha = ref::feather_mask(refined, inputs.config.feather_radius);

    const bool any_selected =
        std::find(refined.data.begin(), refined.data.end(), std::uint8_t{1}) != refined.data.end();
    const ImageRGB foreground =
        any_selected ? ref::transfer_colors(inputs.content, inputs.style, &refined)
                     : inputs.content;
    const ImageRGB& background =
        inputs.stylized_background ? *inputs.stylized_background : inputs.content;
    return ref::alpha_blend(foreground, background, alpha);
}

}  // namespace restyle::ref
