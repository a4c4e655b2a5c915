#include "predbound/processes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "fft.hpp"
#include "predbound/error.hpp"

namespace predbound {

namespace {

constexpr std::size_t kUniformGrid = std::size_t{1} << 14;
constexpr std::size_t kLaplaceGrid = std::size_t{1} << 16;
constexpr double kLaplaceTail = 40.0;  // grid half-width in units of the summed scale

double innovation_parameter(const Innovation& law) {
    return std::visit([](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UniformLaw>) return l.half_width;
        else if constexpr (std::is_same_v<T, GaussianLaw>) return l.sigma;
        else return l.scale;
    }, law);
}

class InnovationSampler {
public:
    InnovationSampler(const Innovation& law, std::uint64_t seed) : law_(law), engine_(seed) {}

    double operator()() {
        return std::visit([this](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, UniformLaw>) {
                boost::random::uniform_real_distribution<double> d(-l.half_width, l.half_width);
                return d(engine_);
            } else if constexpr (std::is_same_v<T, GaussianLaw>) {
                return normal_(engine_) * l.sigma;
            } else {
                // Inverse CDF on v in [-1/2, 1/2).
                boost::random::uniform_real_distribution<double> d(-0.5, 0.5);
                const double v = d(engine_);
                const double mag = -l.scale * std::log1p(-2.0 * std::abs(v));
                return v < 0.0 ? -mag : mag;
            }
        }, law_);
    }

private:
    Innovation law_;
    boost::random::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

// Cell-average density on a uniform grid over [lo, lo + n * dx].
struct GridDensity {
    double lo;
    double dx;
    std::vector<double> p;
};

double riemann_entropy_bits(const GridDensity& g) {
    double h = 0.0;
    for (double v : g.p) {
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h * g.dx;
}

void normalize(GridDensity& g) {
    const double mass = std::accumulate(g.p.begin(), g.p.end(), 0.0) * g.dx;
    for (double& v : g.p) v /= mass;
}

// Entropy of sum_i w_i U_i, U_i ~ Uniform[-1, 1], all w_i > 0. The first box is
// laid down exactly as cell overlaps, every further one is a box convolution
// evaluated through the piecewise-linear CDF.
double uniform_sum_entropy_bits(std::span<const double> half_widths) {
    const double support = std::accumulate(half_widths.begin(), half_widths.end(), 0.0);
    GridDensity g{-support, 2.0 * support / static_cast<double>(kUniformGrid),
                  std::vector<double>(kUniformGrid, 0.0)};

    const double w0 = half_widths[0];
    for (std::size_t j = 0; j < kUniformGrid; ++j) {
        const double a = g.lo + g.dx * static_cast<double>(j);
        const double overlap = std::max(0.0, std::min(a + g.dx, w0) - std::max(a, -w0));
        g.p[j] = overlap / (2.0 * w0 * g.dx);
    }

    std::vector<double> cdf(kUniformGrid + 1);
    for (std::size_t i = 1; i < half_widths.size(); ++i) {
        const double w = half_widths[i];
        cdf[0] = 0.0;
        for (std::size_t j = 0; j < kUniformGrid; ++j) cdf[j + 1] = cdf[j] + g.p[j] * g.dx;
        auto cdf_at = [&](double x) {
            const double t = (x - g.lo) / g.dx;
            if (t <= 0.0) return 0.0;
            if (t >= static_cast<double>(kUniformGrid)) return cdf[kUniformGrid];
            const auto j = static_cast<std::size_t>(t);
            const double frac = t - static_cast<double>(j);
            return cdf[j] + frac * (cdf[j + 1] - cdf[j]);
        };
        for (std::size_t j = 0; j < kUniformGrid; ++j) {
            const double xc = g.lo + g.dx * (static_cast<double>(j) + 0.5);
            g.p[j] = (cdf_at(xc + w) - cdf_at(xc - w)) / (2.0 * w);
        }
        normalize(g);
    }
    return riemann_entropy_bits(g);
}

// Entropy of sum_i s_i L_i, L_i standard Laplace, via FFT convolution of the
// sampled densities on a grid wide enough that wrap-around is below 1e-15.
double laplace_sum_entropy_bits(std::span<const double> scales) {
    const double total = std::accumulate(scales.begin(), scales.end(), 0.0);
    const double half = kLaplaceTail * total;
    const std::size_t n = kLaplaceGrid;
    const double dx = 2.0 * half / static_cast<double>(n);

    // Samples at x_j = (j - n/2) dx, stored with the origin at index 0 so
    // that circular convolution keeps the sum centred.
    auto sampled = [&](double s) {
        std::vector<double> v(n);
        for (std::size_t j = 0; j < n; ++j) {
            const auto idx = static_cast<std::ptrdiff_t>(j);
            const auto off = idx < static_cast<std::ptrdiff_t>(n / 2) ? idx : idx - static_cast<std::ptrdiff_t>(n);
            v[j] = std::exp(-std::abs(static_cast<double>(off) * dx) / s) / (2.0 * s) * dx;
        }
        return v;
    };

    auto acc = detail::rfft(sampled(scales[0]));
    for (std::size_t i = 1; i < scales.size(); ++i) {
        const auto f = detail::rfft(sampled(scales[i]));
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] *= f[j];
    }
    const auto mass = detail::irfft(acc, n);
    GridDensity g{-half, dx, std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) g.p[j] = std::max(0.0, mass[j]) / dx;
    normalize(g);
    return riemann_entropy_bits(g);
}

void require_ar(const ProcessModel& model, const char* what) {
    if (model.kind != ProcessKind::ar) {
        throw NotImplemented(std::string(what) + " is only available for AR models, not " +
                             std::string(to_string(model.kind)));
    }
}

}  // namespace

double spectral_radius(std::span<const double> ar_coeffs) {
    const auto p = static_cast<Eigen::Index>(ar_coeffs.size());
    if (p == 0) return 0.0;
    if (p == 1) return std::abs(ar_coeffs[0]);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = ar_coeffs[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    const Eigen::VectorXcd roots = companion.eigenvalues();
    return roots.cwiseAbs().maxCoeff();
}

void validate(const ProcessModel& model) {
    const double param = innovation_parameter(model.innovation);
    if (!(param > 0.0) || !std::isfinite(param)) {
        throw ModelInvalid("innovation parameter must be strictly positive");
    }
    for (double a : model.ar_coeffs) {
        if (!std::isfinite(a)) throw ModelInvalid("AR coefficients must be finite");
    }
    if (spectral_radius(model.ar_coeffs) >= 1.0) {
        throw ModelInvalid("model unstable: AR polynomial has a root on or outside the unit circle");
    }
}

std::size_t default_burn_in(const ProcessModel& model) {
    const double rho = spectral_radius(model.ar_coeffs);
    const auto mixing = static_cast<std::size_t>(std::ceil(1.0 / (1.0 - rho)));
    return 10 * (model.ar_coeffs.size() + 1) * mixing;
}

Realization simulate(const ProcessModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidInput("series length must be at least 1");
    validate(model);

    const std::size_t burn = model.burn_in.value_or(default_burn_in(model));
    const auto& a = model.ar_coeffs;
    const std::size_t p = a.size();
    // For recursive models the AR recursion runs on the n - 1 increments.
    const std::size_t steps = model.kind == ProcessKind::ar ? n : n - 1;
    const std::size_t total = burn + steps;

    InnovationSampler draw(model.innovation, seed);
    std::vector<double> y(total);
    std::vector<double> u(total);
    for (std::size_t t = 0; t < total; ++t) {
        u[t] = draw();
        double v = u[t];
        for (std::size_t j = 1; j <= p && j <= t; ++j) v += a[j - 1] * y[t - j];
        y[t] = v;
    }

    std::vector<double> innovations(u.begin() + static_cast<std::ptrdiff_t>(burn), u.end());
    std::vector<double> values;
    if (model.kind == ProcessKind::ar) {
        values.assign(y.begin() + static_cast<std::ptrdiff_t>(burn), y.end());
    } else {
        values.resize(n);
        values[0] = 0.0;
        for (std::size_t k = 1; k < n; ++k) values[k] = values[k - 1] + y[burn + k - 1];
    }
    return Realization{Series(std::move(values), seed, model), std::move(innovations)};
}

Series generate(const ProcessModel& model, std::size_t n, std::uint64_t seed) {
    return simulate(model, n, seed).series;
}

std::vector<double> impulse_response(std::span<const double> ar_coeffs, std::size_t count) {
    std::vector<double> psi(count, 0.0);
    if (count == 0) return psi;
    psi[0] = 1.0;
    for (std::size_t i = 1; i < count; ++i) {
        double v = 0.0;
        for (std::size_t j = 1; j <= ar_coeffs.size() && j <= i; ++j) v += ar_coeffs[j - 1] * psi[i - j];
        psi[i] = v;
    }
    return psi;
}

double innovation_entropy_bits(const Innovation& law) {
    return std::visit([](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UniformLaw>) {
            return std::log2(2.0 * l.half_width);
        } else if constexpr (std::is_same_v<T, GaussianLaw>) {
            return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * l.sigma * l.sigma);
        } else {
            return std::log2(2.0 * l.scale * std::numbers::e);
        }
    }, law);
}

EntropyValue analytic_conditional_entropy(const ProcessModel& model, int m) {
    require_ar(model, "analytic conditional entropy");
    if (m < 1) throw InvalidInput("prediction step must be positive");
    validate(model);

    const auto psi = impulse_response(model.ar_coeffs, static_cast<std::size_t>(m));
    std::vector<double> weights;
    for (double w : psi) {
        if (w != 0.0) weights.push_back(std::abs(w));
    }

    const double bits = std::visit([&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, GaussianLaw>) {
            double energy = 0.0;
            for (double w : weights) energy += w * w;
            return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * l.sigma * l.sigma * energy);
        } else if (weights.size() == 1) {
            return innovation_entropy_bits(l) + std::log2(weights[0]);
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
            std::vector<double> halves;
            for (double w : weights) halves.push_back(w * l.half_width);
            return uniform_sum_entropy_bits(halves);
        } else {
            std::vector<double> scales;
            for (double w : weights) scales.push_back(w * l.scale);
            return laplace_sum_entropy_bits(scales);
        }
    }, model.innovation);

    return EntropyValue::analytic(bits);
}

double analytic_spectrum(const ProcessModel& model, double omega) {
    require_ar(model, "analytic spectrum");
    validate(model);
    std::complex<double> denom{1.0, 0.0};
    for (std::size_t j = 0; j < model.ar_coeffs.size(); ++j) {
        const double phase = -omega * static_cast<double>(j + 1);
        denom -= model.ar_coeffs[j] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return innovation_variance(model.innovation) / std::norm(denom);
}

double analytic_variance(const ProcessModel& model) {
    require_ar(model, "analytic variance");
    validate(model);
    const double rho = spectral_radius(model.ar_coeffs);
    // Enough terms for rho^(2n) to fall below 1e-17.
    const std::size_t count =
        rho == 0.0 ? 1 : static_cast<std::size_t>(std::ceil(-40.0 / std::log(rho))) + 1;
    const auto psi = impulse_response(model.ar_coeffs, count);
    double energy = 0.0;
    for (double w : psi) energy += w * w;
    return energy * innovation_variance(model.innovation);
}

Predictor oracle_predictor(const ProcessModel& model, int m) {
    require_ar(model, "oracle predictor");
    if (m < 1) throw InvalidInput("prediction step must be positive");
    validate(model);

    const auto p = static_cast<Eigen::Index>(model.ar_coeffs.size());
    Predictor pred;
    pred.kind = PredictorKind::oracle;
    pred.m_step = m;
    if (p == 0) return pred;

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = model.ar_coeffs[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(p, p);
    for (int i = 0; i < m; ++i) power = companion * power;
    pred.coeffs.resize(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) pred.coeffs[static_cast<std::size_t>(j)] = power(0, j);
    return pred;
}

std::size_t increment_order(IncrementKind kind) noexcept {
    return kind == IncrementKind::second_difference ? 2 : 1;
}

Series recursive_increments(const Series& series, IncrementKind kind) {
    const std::size_t order = increment_order(kind);
    if (series.size() <= order) {
        throw InvalidInput("series of length " + std::to_string(series.size()) +
                           " is too short for an increment of order " + std::to_string(order));
    }
    const auto x = series.values();
    std::vector<double> out;
    out.reserve(x.size() - order);
    for (std::size_t k = order; k < x.size(); ++k) {
        switch (kind) {
            case IncrementKind::difference: out.push_back(x[k] - x[k - 1]); break;
            case IncrementKind::identity: out.push_back(x[k]); break;
            case IncrementKind::second_difference: out.push_back(x[k] - 2.0 * x[k - 1] + x[k - 2]); break;
        }
    }
    return Series(std::move(out), series.seed(), series.model());
}

}  // namespace predbound
