#include "predbound/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "predbound/bounds.hpp"
#include "predbound/error.hpp"
#include "predbound/processes.hpp"

namespace predbound {

namespace {

constexpr double kGridTolerance = 1e-9;

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

double sample_mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

}  // namespace

std::string_view to_string(SpectrumMethod m) noexcept {
    return m == SpectrumMethod::analytic ? "analytic" : "welch";
}

SpectrumEstimate SpectrumEstimate::make(std::vector<double> omegas, std::vector<double> values,
                                        SpectrumMethod method, std::size_t n_source) {
    if (omegas.size() != values.size()) throw InvalidInput("spectrum grid and values differ in length");
    if (omegas.size() < kMinSpectrumPoints) {
        throw InvalidInput("spectrum grid needs at least " + std::to_string(kMinSpectrumPoints) +
                           " points, got " + std::to_string(omegas.size()));
    }
    for (std::size_t i = 1; i < omegas.size(); ++i) {
        if (!(omegas[i] > omegas[i - 1])) throw InvalidInput("spectrum grid must be strictly increasing");
    }
    if (std::abs(omegas.front()) > kGridTolerance || std::abs(omegas.back() - std::numbers::pi) > kGridTolerance) {
        throw InvalidInput("spectrum grid must cover [0, pi]");
    }
    for (double& v : values) {
        if (!std::isfinite(v)) throw InvalidInput("spectrum values must be finite");
        v = std::max(0.0, v);
    }
    return SpectrumEstimate{std::move(omegas), std::move(values), n_source, method};
}

double SpectrumEstimate::mean_level() const {
    double integral = 0.0;
    for (std::size_t i = 1; i < omegas.size(); ++i) {
        integral += 0.5 * (values[i] + values[i - 1]) * (omegas[i] - omegas[i - 1]);
    }
    return integral / (omegas.back() - omegas.front());
}

std::vector<double> autocorrelation(const Series& series, std::size_t max_lag) {
    const auto x = series.values();
    const std::size_t n = x.size();
    if (max_lag == 0 || 4 * max_lag >= n) {
        throw InvalidInput("max_lag must be positive and below length/4 (length " + std::to_string(n) + ")");
    }
    const double mean = sample_mean(x);
    std::vector<double> r(max_lag + 1, 0.0);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        double s = 0.0;
        for (std::size_t t = lag; t < n; ++t) s += (x[t] - mean) * (x[t - lag] - mean);
        r[lag] = s / static_cast<double>(n);
    }
    if (!(r[0] > 0.0)) throw DegenerateData("autocorrelation of a constant series is undefined");
    return r;
}

SpectrumEstimate estimate_spectrum(const Series& series, std::size_t n_fft) {
    if (!is_power_of_two(n_fft) || n_fft / 2 + 1 < kMinSpectrumPoints) {
        throw InvalidInput("n_fft must be a power of two of at least " +
                           std::to_string(2 * (kMinSpectrumPoints - 1)));
    }
    const auto x = series.values();
    const std::size_t n = x.size();
    if (n < 4 * n_fft) {
        throw InsufficientData("spectrum with n_fft = " + std::to_string(n_fft) + " needs at least " +
                               std::to_string(4 * n_fft) + " samples, got " + std::to_string(n));
    }

    const double mean = sample_mean(x);
    std::vector<double> taper(n_fft);
    double taper_energy = 0.0;
    for (std::size_t t = 0; t < n_fft; ++t) {
        taper[t] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(t) /
                                         static_cast<double>(n_fft)));
        taper_energy += taper[t] * taper[t];
    }

    const std::size_t bins = n_fft / 2 + 1;
    const std::size_t hop = n_fft / 2;
    std::vector<double> raw(bins, 0.0);
    std::vector<double> segment(n_fft);
    std::size_t segments = 0;
    for (std::size_t start = 0; start + n_fft <= n; start += hop) {
        for (std::size_t t = 0; t < n_fft; ++t) segment[t] = (x[start + t] - mean) * taper[t];
        const auto spec = detail::rfft(segment);
        for (std::size_t j = 0; j < bins; ++j) raw[j] += std::norm(spec[j]) / taper_energy;
        ++segments;
    }
    for (double& v : raw) v /= static_cast<double>(segments);

    // Daniell smoother; the spectrum is even and 2pi-periodic, so neighbours
    // beyond 0 and pi are mirror images.
    const auto half = static_cast<std::ptrdiff_t>(kWelchSmoothingSpan / 2);
    const auto last = static_cast<std::ptrdiff_t>(bins - 1);
    std::vector<double> smooth(bins, 0.0);
    for (std::ptrdiff_t j = 0; j <= last; ++j) {
        double s = 0.0;
        for (std::ptrdiff_t o = -half; o <= half; ++o) {
            std::ptrdiff_t idx = j + o;
            if (idx < 0) idx = -idx;
            if (idx > last) idx = 2 * last - idx;
            s += raw[static_cast<std::size_t>(idx)];
        }
        smooth[static_cast<std::size_t>(j)] = s / static_cast<double>(kWelchSmoothingSpan);
    }

    std::vector<double> omegas(bins);
    for (std::size_t j = 0; j < bins; ++j) {
        omegas[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_fft);
    }
    return SpectrumEstimate::make(std::move(omegas), std::move(smooth), SpectrumMethod::welch, n);
}

SpectrumEstimate analytic_spectrum_grid(const ProcessModel& model, std::size_t points) {
    if (points < 2) throw InvalidInput("spectrum grid needs at least two points");
    std::vector<double> omegas(points);
    std::vector<double> values(points);
    for (std::size_t j = 0; j < points; ++j) {
        omegas[j] = std::numbers::pi * static_cast<double>(j) / static_cast<double>(points - 1);
        values[j] = analytic_spectrum(model, omegas[j]);
    }
    return SpectrumEstimate::make(std::move(omegas), std::move(values), SpectrumMethod::analytic);
}

EntropyValue szego_gaussian_entropy_rate(const SpectrumEstimate& spec) {
    if (spec.values.empty()) throw InvalidInput("empty spectrum");
    const double peak = *std::ranges::max_element(spec.values);
    if (!(peak > 0.0)) throw DegenerateData("spectrum is identically zero");
    const double floor = kSpectrumFloor * peak;

    const double c = 2.0 * std::numbers::pi * std::numbers::e;
    auto integrand = [&](std::size_t i) { return 0.5 * std::log2(c * std::max(spec.values[i], floor)); };
    double integral = 0.0;
    for (std::size_t i = 1; i < spec.omegas.size(); ++i) {
        integral += 0.5 * (integrand(i) + integrand(i - 1)) * (spec.omegas[i] - spec.omegas[i - 1]);
    }

    EntropyValue h;
    h.bits = integral / (spec.omegas.back() - spec.omegas.front());
    h.method = EntropyMethod::spectral_gaussian;
    if (spec.method == SpectrumMethod::welch) h.n_samples = spec.n_source;
    return h;
}

BoundReport spectral_support_bound(const SpectrumEstimate& spec, const EntropyValue& negentropy) {
    if (!std::isfinite(negentropy.bits) || negentropy.bits < 0.0) {
        throw InvalidInput("negentropy rate must be finite and nonnegative");
    }
    EntropyValue exponent = szego_gaussian_entropy_rate(spec);
    exponent.bits -= negentropy.bits;
    return make_bound_report(exponent, BoundSetting::spectral, 1);
}

}  // namespace predbound
