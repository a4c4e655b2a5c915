#pragma once

#include <span>

#include "predbound/entropy.hpp"
#include "predbound/types.hpp"

namespace predbound {

// Finite-sample calibration of the achievability verdict.
inline constexpr double kWhitenessMinP = 0.01;
inline constexpr double kUniformityMaxStat = 0.02;
inline constexpr double kMaxErrorPastMiBits = 0.05;
inline constexpr std::size_t kWhitenessLags = 20;
inline constexpr std::size_t kMinDiagnosticLength = 1000;
/// Slack on the bound inequality that absorbs entropy-estimator bias.
inline constexpr double kBoundSlack = 0.05;

/// Least-squares coefficients predicting x_k from x_{k-m}, ..., x_{k-m-p+1}
/// (no intercept). Throws DegenerateData on a rank-deficient design.
[[nodiscard]] Predictor fit_ols_ar(const Series& series, std::size_t p, int m = 1);

/// xhat_k = x_{k-m}.
[[nodiscard]] Predictor persistence_predictor(int m = 1);

/// xhat_k = 0.
[[nodiscard]] Predictor zero_predictor(int m = 1);

/// e_k = x_k - xhat_k for every k with a full window; the result has
/// length n - (order + m - 1) and is aligned with the tail of the series.
[[nodiscard]] Series prediction_errors(const Series& series, const Predictor& pred);

/// Ljung-Box portmanteau statistic over `lags` autocorrelations, with its
/// chi-square(lags) upper-tail p-value.
[[nodiscard]] WhitenessTest ljung_box(std::span<const double> x, std::size_t lags);

/// Kolmogorov-Smirnov distance between the empirical CDF of `x` and the
/// uniform law on [min(x), max(x)].
[[nodiscard]] double uniformity_distance(std::span<const double> x);

/// Empirical support, deviation, whiteness, uniformity and error/past mutual
/// information of `errors`, which must be the tail of `series` produced by an
/// m-step predictor. The past is (x_{k-m}, e_{k-m}).
[[nodiscard]] ErrorDiagnostics diagnostics(const Series& errors, const Series& series,
                                           const EstimatorConfig& cfg, int m_step = 1);

/// Verdict rule applied to already computed statistics.
[[nodiscard]] bool achieves_bound(const ErrorDiagnostics& d) noexcept;

struct Certification {
    BoundReport bound;
    ErrorDiagnostics diagnostics;
    Predictor predictor;
    double tau = kBoundSlack;
    /// empirical_max_deviation >= deviation_bound * (1 - tau)
    bool inequality_holds = false;
    /// deviation_bound / empirical_max_deviation
    double tightness_ratio = 0.0;
    bool achieves_bound = false;
    /// The generating innovation has unbounded support, so the observed range
    /// grows with n and the bound is trivially satisfied.
    bool support_unbounded = false;
};

/// Checks a predictor on a series against a bound computed for the same step.
[[nodiscard]] Certification certify(const Series& series, const Predictor& pred, const BoundReport& bound,
                                    const EstimatorConfig& cfg);

}  // namespace predbound
