#pragma once

#include <cstddef>
#include <vector>

#include "predbound/types.hpp"

namespace predbound {

enum class SpectrumMethod { analytic, welch };

[[nodiscard]] std::string_view to_string(SpectrumMethod m) noexcept;

/// Two-sided power spectral density sampled on a grid over [0, pi], normalised
/// so that (1/pi) * integral_0^pi S = variance.
struct SpectrumEstimate {
    std::vector<double> omegas;
    std::vector<double> values;
    std::size_t n_source = 0;  ///< samples behind a Welch estimate, 0 for analytic
    SpectrumMethod method = SpectrumMethod::analytic;

    /// Clamps round-off negatives to zero and checks the grid: strictly
    /// increasing, covering [0, pi], at least 256 points.
    [[nodiscard]] static SpectrumEstimate make(std::vector<double> omegas, std::vector<double> values,
                                               SpectrumMethod method, std::size_t n_source = 0);

    /// Trapezoidal mean of S over the grid; approximates the variance.
    [[nodiscard]] double mean_level() const;
};

inline constexpr std::size_t kMinSpectrumPoints = 256;
inline constexpr double kSpectrumFloor = 1e-12;  // relative to max(S)
inline constexpr std::size_t kWelchSmoothingSpan = 3;

/// Biased (1/n) sample autocovariances R(0..max_lag) about the sample mean.
[[nodiscard]] std::vector<double> autocorrelation(const Series& series, std::size_t max_lag);

/// Segment-averaged periodogram: Hann-tapered segments of length n_fft with
/// 50% overlap, followed by a short Daniell smoother across frequency.
/// Returns n_fft / 2 + 1 points on [0, pi].
[[nodiscard]] SpectrumEstimate estimate_spectrum(const Series& series, std::size_t n_fft);

/// Closed-form AR spectrum on `points` equally spaced frequencies in [0, pi].
[[nodiscard]] SpectrumEstimate analytic_spectrum_grid(const ProcessModel& model, std::size_t points);

/// Gaussian entropy rate implied by a spectrum:
/// (1/2pi) * integral_{-pi}^{pi} log2 sqrt(2 pi e S(w)) dw, trapezoidal on [0, pi].
[[nodiscard]] EntropyValue szego_gaussian_entropy_rate(const SpectrumEstimate& spec);

/// Support and deviation bounds with exponent (Szego value - J), where J is
/// the negentropy rate.
[[nodiscard]] BoundReport spectral_support_bound(const SpectrumEstimate& spec, const EntropyValue& negentropy);

}  // namespace predbound
