#include "restyle/color_transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "restyle/parallel.hpp"

namespace restyle {

namespace {

constexpr double kSignEps = 1e-12;
constexpr double kDegenerateEps = 1e-12;

struct SymEig3 {
    std::array<double, 3> values{};
    // vectors[r][c] = component r of eigenvector c
    double vectors[3][3]{};
};

// Cyclic Jacobi rotations; plenty for a 3x3 symmetric matrix.
SymEig3 jacobi_eig3(const double a_in[3][3]) {
    double a[3][3];
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = a_in[i][j];

    for (int sweep = 0; sweep < 64; ++sweep) {
        const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        const double diag = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2];
        if (off <= 1e-60 * (diag + 1e-300) || off == 0.0) break;

        static constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
        for (const auto& pq : pairs) {
            const int p = pq[0], q = pq[1];
            if (a[p][q] == 0.0) continue;
            const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            const double t =
                (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;

            const double app = a[p][p], aqq = a[q][q], apq = a[p][q];
            a[p][p] = app - t * apq;
            a[q][q] = aqq + t * apq;
            a[p][q] = a[q][p] = 0.0;
            const int r = 3 - p - q;
            const double arp = a[r][p], arq = a[r][q];
            a[r][p] = a[p][r] = c * arp - s * arq;
            a[r][q] = a[q][r] = s * arp + c * arq;

            for (int i = 0; i < 3; ++i) {
                const double vip = v[i][p], viq = v[i][q];
                v[i][p] = c * vip - s * viq;
                v[i][q] = s * vip + c * viq;
            }
        }
    }

    SymEig3 out;
    out.values = {a[0][0], a[1][1], a[2][2]};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.vectors[i][j] = v[i][j];
    return out;
}

PrincipalAxis canonicalize(std::array<double, 3> q) {
    const double norm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
    for (double& c : q) c /= norm;
    for (double c : q) {
        if (std::abs(c) > kSignEps) {
            if (c < 0.0)
                for (double& x : q) x = -x;
            break;
        }
    }
    return PrincipalAxis{q};
}

std::vector<std::size_t> selected_indices(int width, int height, const BinaryMask* selection) {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<std::size_t> idx;
    if (!selection) {
        idx.resize(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        return idx;
    }
    if (selection->width != width || selection->height != height)
        throw ValidationError("selection mask dimensions (" + std::to_string(selection->width) +
                              "x" + std::to_string(selection->height) + ") do not match image (" +
                              std::to_string(width) + "x" + std::to_string(height) + ")");
    idx.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (selection->data[i]) idx.push_back(i);
    return idx;
}

// Per-distinct-value CDF positions of a projection multiset, plus the lowest
// row-major pixel index carrying each value.
struct QuantileLookup {
    std::vector<double> cdf_pos;            // strictly increasing
    std::vector<std::size_t> pixel_index;   // lowest index in the tie group

    explicit QuantileLookup(const std::vector<double>& projections) {
        const std::size_t n = projections.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (projections[a] != projections[b]) return projections[a] < projections[b];
            return a < b;
        });
        std::size_t lo = 0;
        while (lo < n) {
            std::size_t hi = lo + 1;
            while (hi < n && projections[order[hi]] == projections[order[lo]]) ++hi;
            const double pos = (hi - lo >= 2)
                                   ? static_cast<double>(lo + hi) / (2.0 * static_cast<double>(n))
                                   : static_cast<double>(hi) / static_cast<double>(n);
            cdf_pos.push_back(pos);
            pixel_index.push_back(order[lo]);
            lo = hi;
        }
    }

    // Nearest CDF position to u; equidistant cases resolve to the smaller
    // projected value.
    std::size_t match(double u) const {
        const auto it = std::lower_bound(cdf_pos.begin(), cdf_pos.end(), u);
        if (it == cdf_pos.begin()) return pixel_index.front();
        if (it == cdf_pos.end()) return pixel_index.back();
        const std::size_t above = static_cast<std::size_t>(it - cdf_pos.begin());
        const std::size_t below = above - 1;
        return (u - cdf_pos[below] <= cdf_pos[above] - u) ? pixel_index[below]
                                                          : pixel_index[above];
    }
};

}  // namespace

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : samples_(std::move(values)) {
    if (samples_.empty()) throw ValidationError("EmpiricalCdf: at least one sample required");
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::value(double x) const {
    const auto lo = std::lower_bound(samples_.begin(), samples_.end(), x) - samples_.begin();
    const auto hi = std::upper_bound(samples_.begin(), samples_.end(), x) - samples_.begin();
    const double n = static_cast<double>(samples_.size());
    if (hi - lo >= 2) return static_cast<double>(lo + hi) / (2.0 * n);
    return static_cast<double>(hi) / n;
}

EmpiricalCdf build_cdf(std::vector<double> values) { return EmpiricalCdf(std::move(values)); }

PrincipalAxis principal_axis(const LabImage& lab, const BinaryMask* selection,
                             CovarianceMode mode) {
    const std::vector<std::size_t> idx = selected_indices(lab.width, lab.height, selection);
    if (idx.empty()) throw ValidationError("principal_axis: empty selection");
    const double n = static_cast<double>(idx.size());

    struct Sums {
        double v[3] = {0, 0, 0};
    };
    const Sums mean_sums = blocked_reduce<Sums>(
        idx.size(), Sums{},
        [&](std::size_t b, std::size_t e) {
            Sums s;
            for (std::size_t k = b; k < e; ++k) {
                const double* px = lab.data.data() + idx[k] * 3;
                for (int c = 0; c < 3; ++c) s.v[c] += px[c];
            }
            return s;
        },
        [](Sums a, Sums b) {
            for (int c = 0; c < 3; ++c) a.v[c] += b.v[c];
            return a;
        });
    const double mean[3] = {mean_sums.v[0] / n, mean_sums.v[1] / n, mean_sums.v[2] / n};

    const bool center = mode == CovarianceMode::MeanCentered;
    struct Cov {
        double m[6] = {0, 0, 0, 0, 0, 0};  // xx xy xz yy yz zz
        double max_dev = 0.0;
    };
    const Cov cov = blocked_reduce<Cov>(
        idx.size(), Cov{},
        [&](std::size_t b, std::size_t e) {
            Cov c;
            for (std::size_t k = b; k < e; ++k) {
                const double* px = lab.data.data() + idx[k] * 3;
                double d[3];
                for (int i = 0; i < 3; ++i) {
                    const double dev = px[i] - mean[i];
                    if (std::abs(dev) > c.max_dev) c.max_dev = std::abs(dev);
                    d[i] = center ? dev : px[i];
                }
                c.m[0] += d[0] * d[0];
                c.m[1] += d[0] * d[1];
                c.m[2] += d[0] * d[2];
                c.m[3] += d[1] * d[1];
                c.m[4] += d[1] * d[2];
                c.m[5] += d[2] * d[2];
            }
            return c;
        },
        [](Cov a, Cov b) {
            for (int i = 0; i < 6; ++i) a.m[i] += b.m[i];
            a.max_dev = std::max(a.max_dev, b.max_dev);
            return a;
        });

    const bool degenerate =
        center ? cov.max_dev <= kDegenerateEps
               : (cov.m[0] + cov.m[3] + cov.m[5]) / n <= kDegenerateEps * kDegenerateEps;
    if (degenerate) return PrincipalAxis{{1.0, 0.0, 0.0}};

    const double a[3][3] = {{cov.m[0] / n, cov.m[1] / n, cov.m[2] / n},
                            {cov.m[1] / n, cov.m[3] / n, cov.m[4] / n},
                            {cov.m[2] / n, cov.m[4] / n, cov.m[5] / n}};
    const SymEig3 eig = jacobi_eig3(a);
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (eig.values[i] > eig.values[best]) best = i;
    return canonicalize({eig.vectors[0][best], eig.vectors[1][best], eig.vectors[2][best]});
}

std::vector<double> project(const LabImage& lab, const PrincipalAxis& q,
                            const BinaryMask* selection) {
    const std::vector<std::size_t> idx = selected_indices(lab.width, lab.height, selection);
    std::vector<double> out(idx.size());
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < static_cast<long long>(idx.size()); ++k) {
        const double* px = lab.data.data() + idx[k] * 3;
        out[k] = q.dot(px[0], px[1], px[2]);
    }
    return out;
}

ImageRGB transfer_colors(const ImageRGB& content, const ImageRGB& style,
                         const BinaryMask* selection, CovarianceMode mode) {
    const std::vector<std::size_t> idx = selected_indices(content.width, content.height, selection);
    if (idx.empty()) throw ValidationError("transfer_colors: empty content selection");

    const LabImage content_lab = rgb_to_lab(content);
    const LabImage style_lab = rgb_to_lab(style);

    const PrincipalAxis q_content = principal_axis(content_lab, selection, mode);
    const PrincipalAxis q_style = principal_axis(style_lab, nullptr, mode);

    const std::vector<double> content_proj = project(content_lab, q_content, selection);
    const std::vector<double> style_proj = project(style_lab, q_style);

    const EmpiricalCdf content_cdf = build_cdf(content_proj);
    const QuantileLookup style_lookup(style_proj);

    ImageRGB out = content;
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < static_cast<long long>(idx.size()); ++k) {
        const double u = content_cdf.value(content_proj[k]);
        const std::size_t j = style_lookup.match(u);
        const double* src = style.data.data() + j * 3;
        double* dst = out.data.data() + idx[k] * 3;
        dst[0] = src[0];
        dst[1] = src[1];
        dst[2] = src[2];
    }
    return out;
}

}  // namespace restyle
