#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "restyle/errors.hpp"

namespace restyle {

/// One layer's activations: n_filters rows of map_size values.
struct FeatureMap {
    int n_filters = 0;
    int map_size = 0;
    std::vector<double> data;  // n_filters * map_size, row-major

    FeatureMap() = default;
    FeatureMap(int n, int m, double fill = 0.0);

    double& at(int i, int k) { return data[static_cast<std::size_t>(i) * map_size + k]; }
    double at(int i, int k) const { return data[static_cast<std::size_t>(i) * map_size + k]; }

    void validate() const;
};

/// Symmetric positive-semidefinite style statistic G = F F^T.
struct GramMatrix {
    int n = 0;
    std::vector<double> data;  // n * n

    GramMatrix() = default;
    explicit GramMatrix(int n_, double fill = 0.0);

    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * n + j]; }
};

/// Layer weights w_l plus the content/style balance (alpha, beta).
/// Defaults keep the 15/85 balance, normalized to sum to one.
struct LossWeights {
    std::vector<double> layer_weights;
    double alpha = 0.15;
    double beta = 0.85;

    /// Uniform w_l = 1/L over L layers.
    static LossWeights uniform(std::size_t layers);

    void validate() const;
};

GramMatrix gram(const FeatureMap& f);

/// 1/2 sum_ij (F_ij - P_ij)^2.
double content_loss(const FeatureMap& f, const FeatureMap& p);

/// One layer's style term: w / (4 N^2 M^2) * sum_ij (G_ij - A_ij)^2
/// with G = gram(f).
double layer_style_loss(const FeatureMap& f, const GramMatrix& a, double w);

/// Sum of layer_style_loss over all layers.
double style_loss(std::span<const FeatureMap> generated, std::span<const GramMatrix> style_grams,
                  const LossWeights& w);

double total_loss(double l_content, double l_style, const LossWeights& w);

/// d(content_loss)/dF = F - P.
FeatureMap content_loss_grad(const FeatureMap& f, const FeatureMap& p);

/// d(layer_style_loss)/dF = w / (N^2 M^2) * (G - A) F.
FeatureMap style_loss_grad(const FeatureMap& f, const GramMatrix& a, double w);

/// Binary feature-map container: "FMAP", one version byte, little-endian
/// u32 n_filters and map_size, then n*m little-endian IEEE-754 doubles,
/// row-major. Gram matrices travel in the same container with n == m.
FeatureMap load_fmap(const std::string& path);
void save_fmap(const FeatureMap& f, const std::string& path);

/// Loads an FMAP file and requires it square.
GramMatrix load_gram(const std::string& path);
void save_gram(const GramMatrix& g, const std::string& path);

}  // namespace restyle
