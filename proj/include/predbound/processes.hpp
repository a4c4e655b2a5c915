#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "predbound/types.hpp"

namespace predbound {

/// Name of the generator recorded in reports and sidecars.
inline constexpr std::string_view kRngName = "boost::random::mt19937_64";

/// Throws ModelInvalid when the innovation parameter is not strictly positive
/// or the AR polynomial has a root on or outside the unit circle.
void validate(const ProcessModel& model);

/// Largest modulus among the roots of z^p - a_1 z^(p-1) - ... - a_p.
/// Zero for an empty coefficient list.
[[nodiscard]] double spectral_radius(std::span<const double> ar_coeffs);

/// 10 * (p + 1) * ceil(1 / (1 - rho)); used when `model.burn_in` is absent.
[[nodiscard]] std::size_t default_burn_in(const ProcessModel& model);

/// A generated path together with the innovations that drove it.
///
/// For `ar` models `innovations[k]` is the draw u_k entering x_k. For
/// `recursive_increment` models `innovations[k]` is the noise n_k entering
/// x_{k+1} - x_k, so there is one fewer innovation than samples.
struct Realization {
    Series series;
    std::vector<double> innovations;
};

/// Deterministic in (model, n, seed). Burn-in samples are generated from a
/// zero initial state and discarded.
[[nodiscard]] Realization simulate(const ProcessModel& model, std::size_t n, std::uint64_t seed);

[[nodiscard]] Series generate(const ProcessModel& model, std::size_t n, std::uint64_t seed);

/// psi_0 .. psi_{count-1} of x_k = sum_i psi_i u_{k-i}.
[[nodiscard]] std::vector<double> impulse_response(std::span<const double> ar_coeffs,
                                                   std::size_t count);

/// Differential entropy of one innovation draw, in bits.
[[nodiscard]] double innovation_entropy_bits(const Innovation& law);

/// h(x_k | x_{0..k-m}) for an AR model with i.i.d. innovations, i.e. the
/// entropy of sum_{i<m} psi_i u_{k-i}. Closed form for m = 1 and for Gaussian
/// innovations; otherwise a numerical convolution on a 2^14-point grid (uniform)
/// or 2^16-point grid (Laplace) followed by Riemann quadrature of -p log2 p.
[[nodiscard]] EntropyValue analytic_conditional_entropy(const ProcessModel& model, int m);

/// sigma_u^2 / |1 - sum_j a_j e^{-i omega j}|^2.
[[nodiscard]] double analytic_spectrum(const ProcessModel& model, double omega);

/// Stationary variance sum_i psi_i^2 sigma_u^2 (truncated once terms vanish).
[[nodiscard]] double analytic_variance(const ProcessModel& model);

/// Conditional-mean m-step predictor of an AR model: the first row of the
/// companion matrix raised to the m-th power.
[[nodiscard]] Predictor oracle_predictor(const ProcessModel& model, int m = 1);

enum class IncrementKind {
    difference,         ///< x_{k+1} - x_k
    identity,           ///< x_{k+1}
    second_difference,  ///< x_{k+1} - 2 x_k + x_{k-1}
};

[[nodiscard]] std::size_t increment_order(IncrementKind kind) noexcept;

/// Applies g to every full window; the result is shorter by the order of g.
[[nodiscard]] Series recursive_increments(const Series& series, IncrementKind kind);

}  // namespace predbound
