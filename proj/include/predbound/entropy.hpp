#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "predbound/spectral.hpp"
#include "predbound/types.hpp"

namespace predbound {

struct EstimatorConfig {
    int k_neighbors = 4;
    std::size_t window = 3;
    std::size_t max_dim = 6;
    /// Worker threads for neighbour searches; 0 picks hardware concurrency.
    /// Results do not depend on this value.
    unsigned threads = 0;

    /// Throws InvalidInput unless k >= 1 and window + 1 <= max_dim.
    void validate() const;
};

/// Row-major set of n points in `dim` dimensions.
struct PointSet {
    std::size_t dim = 1;
    std::vector<double> data;

    [[nodiscard]] std::size_t size() const noexcept { return dim == 0 ? 0 : data.size() / dim; }

    [[nodiscard]] static PointSet from_scalars(std::span<const double> values);
    /// Columns of equal length become the coordinates of each point.
    [[nodiscard]] static PointSet from_columns(const std::vector<std::span<const double>>& columns);
    /// Concatenates coordinates of two sets of equal size.
    [[nodiscard]] static PointSet join(const PointSet& a, const PointSet& b);
};

/// Fraction of points duplicated exactly that makes an estimate ill-posed.
inline constexpr double kMaxTieFraction = 0.01;

/// Kozachenko-Leonenko estimate under the max-coordinate metric:
/// psi(N) - psi(k) + d * <ln 2 eps_k>, reported in bits.
[[nodiscard]] EntropyValue knn_entropy(const PointSet& samples, int k, std::size_t max_dim = 6,
                                       unsigned threads = 0);
[[nodiscard]] EntropyValue knn_entropy(std::span<const double> samples, int k);

/// h(x_k | x_{k-m}, ..., x_{k-m-w+1}) estimated with a shared neighbour radius:
/// the joint k-th neighbour distance fixes eps, and the conditioning space
/// contributes through neighbour counts inside eps.
[[nodiscard]] EntropyValue conditional_entropy(const Series& series, int m, std::size_t window,
                                               const EstimatorConfig& cfg);

/// Kraskov-Stoegbauer-Grassberger estimate (first algorithm) in bits, clamped
/// at zero with the raw value kept in raw_bits.
[[nodiscard]] EntropyValue mutual_information(const PointSet& a, const PointSet& b,
                                              const EstimatorConfig& cfg);

/// conditional_entropy with m = 1 and the configured window.
[[nodiscard]] EntropyValue entropy_rate(const Series& series, const EstimatorConfig& cfg);

/// Szego value of `spectrum` minus the estimated entropy rate, clamped at zero.
[[nodiscard]] EntropyValue negentropy_rate(const Series& series, const EstimatorConfig& cfg,
                                           const SpectrumEstimate& spectrum);

}  // namespace predbound
