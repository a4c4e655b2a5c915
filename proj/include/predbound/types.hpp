#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace predbound {

// ---------------------------------------------------------------------------
// Innovation laws and process models
// ---------------------------------------------------------------------------

/// Uniform on [-half_width, half_width].
struct UniformLaw {
    double half_width = 0.5;
};

/// Zero-mean Gaussian with standard deviation sigma.
struct GaussianLaw {
    double sigma = 1.0;
};

/// Zero-mean Laplace with scale b (variance 2 b^2).
struct LaplaceLaw {
    double scale = 1.0;
};

using Innovation = std::variant<UniformLaw, GaussianLaw, LaplaceLaw>;

enum class ProcessKind {
    ar,                   ///< x_k = sum_j a_j x_{k-j} + u_k
    recursive_increment,  ///< x_{k+1} = x_k + sum_j a_j (x_{k+1-j} - x_{k-j}) + n_k
};

/// Declarative description of a synthetic generator.
///
/// For `ar` an empty coefficient list is the i.i.d. case. For
/// `recursive_increment` the coefficients act on the increments, so an empty
/// list is a random walk driven by the innovation law.
struct ProcessModel {
    ProcessKind kind = ProcessKind::ar;
    std::vector<double> ar_coeffs;
    Innovation innovation = UniformLaw{};
    /// Absent means the default derived from the spectral radius.
    std::optional<std::size_t> burn_in;
};

// ---------------------------------------------------------------------------
// Data carriers
// ---------------------------------------------------------------------------

/// Ordered finite sample with optional RNG provenance.
class Series {
public:
    /// Throws InvalidInput if `values` is empty or holds a non-finite entry.
    explicit Series(std::vector<double> values,
                    std::optional<std::uint64_t> seed = std::nullopt,
                    std::optional<ProcessModel> model = std::nullopt);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] const std::optional<std::uint64_t>& seed() const noexcept { return seed_; }
    [[nodiscard]] const std::optional<ProcessModel>& model() const noexcept { return model_; }

private:
    std::vector<double> values_;
    std::optional<std::uint64_t> seed_;
    std::optional<ProcessModel> model_;
};

enum class EntropyMethod { analytic, knn, spectral_gaussian };

/// An entropy or mutual-information quantity in bits, with estimator metadata.
struct EntropyValue {
    double bits = 0.0;
    EntropyMethod method = EntropyMethod::analytic;
    std::optional<int> k_neighbors;
    std::size_t window = 0;
    std::optional<std::size_t> n_samples;
    /// Pre-clamp value for quantities clamped at zero (MI, negentropy).
    std::optional<double> raw_bits;
    /// True when tie-breaking jitter was applied to the samples.
    bool jittered = false;

    [[nodiscard]] static EntropyValue analytic(double bits, std::size_t window = 0);
};

enum class BoundSetting { estimation, prediction, recursive, fitting, spectral };

/// Lower bounds implied by a conditional entropy. Construct through the
/// functions in bounds.hpp so that the 2^h / 2^(h-1) relation always holds.
struct BoundReport {
    EntropyValue conditional_entropy;
    double support_bound = 1.0;
    double deviation_bound = 0.5;
    int m_step = 1;
    BoundSetting setting = BoundSetting::prediction;
};

struct WhitenessTest {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t lags = 0;
};

/// Empirical counterparts of the bound quantities for one error series.
struct ErrorDiagnostics {
    double empirical_support = 0.0;        ///< max(e) - min(e)
    double empirical_max_deviation = 0.0;  ///< max |e - mean(e)|
    double mean = 0.0;
    WhitenessTest whiteness;
    double uniformity_stat = 0.0;  ///< KS distance to Uniform[min, max]
    EntropyValue mi_error_past;
    bool achieves_bound = false;
};

enum class PredictorKind { oracle, ols_ar, persistence, zero };

/// Linear windowed predictor: xhat_k = sum_i coeffs[i] * x_{k - m_step - i}.
struct Predictor {
    PredictorKind kind = PredictorKind::zero;
    std::vector<double> coeffs;
    int m_step = 1;

    [[nodiscard]] std::size_t order() const noexcept { return coeffs.size(); }
};

// ---------------------------------------------------------------------------
// Names used in reports and on the command line
// ---------------------------------------------------------------------------

[[nodiscard]] std::string_view to_string(EntropyMethod m) noexcept;
[[nodiscard]] std::string_view to_string(BoundSetting s) noexcept;
[[nodiscard]] std::string_view to_string(PredictorKind k) noexcept;
[[nodiscard]] std::string_view to_string(ProcessKind k) noexcept;
[[nodiscard]] std::string_view innovation_name(const Innovation& law) noexcept;

/// Variance of a single innovation draw.
[[nodiscard]] double innovation_variance(const Innovation& law) noexcept;

/// True for laws with bounded support (only the uniform one here).
[[nodiscard]] bool innovation_bounded(const Innovation& law) noexcept;

}  // namespace predbound
