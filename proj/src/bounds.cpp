#include "predbound/bounds.hpp"

#include <cmath>
#include <string>

#include "predbound/error.hpp"

namespace predbound {

namespace {

void require_finite(const EntropyValue& h) {
    if (!std::isfinite(h.bits)) {
        throw InvalidInput("conditional entropy must be finite, got " + std::to_string(h.bits));
    }
}

}  // namespace

Series::Series(std::vector<double> values, std::optional<std::uint64_t> seed,
               std::optional<ProcessModel> model)
    : values_(std::move(values)), seed_(seed), model_(std::move(model)) {
    if (values_.empty()) {
        throw InvalidInput("series must contain at least one sample");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidInput("series sample " + std::to_string(i) + " is not finite");
        }
    }
}

EntropyValue EntropyValue::analytic(double bits, std::size_t window) {
    EntropyValue h;
    h.bits = bits;
    h.method = EntropyMethod::analytic;
    h.window = window;
    return h;
}

double support_bound_from_entropy(const EntropyValue& h) {
    require_finite(h);
    return std::exp2(h.bits);
}

double deviation_bound_from_entropy(const EntropyValue& h) {
    require_finite(h);
    return support_bound_from_entropy(h) / 2.0;
}

double half_support_deviation(double support_length) {
    if (!(support_length >= 0.0) || !std::isfinite(support_length)) {
        throw InvalidInput("support length must be a finite nonnegative number");
    }
    return support_length / 2.0;
}

BoundReport make_bound_report(const EntropyValue& h, BoundSetting setting, int m_step) {
    if (m_step < 1) {
        throw InvalidInput("prediction step must be positive");
    }
    BoundReport r;
    r.conditional_entropy = h;
    r.support_bound = support_bound_from_entropy(h);
    // 2^(h-1) == 2^h / 2 exactly in binary floating point.
    r.deviation_bound = r.support_bound / 2.0;
    r.m_step = m_step;
    r.setting = setting;
    return r;
}

BoundReport recursive_increment_bound(const EntropyValue& h_noise) {
    return make_bound_report(h_noise, BoundSetting::recursive, 1);
}

BoundReport fitting_bound_from_entropy(const EntropyValue& h_cond) {
    return make_bound_report(h_cond, BoundSetting::fitting, 1);
}

std::string_view to_string(EntropyMethod m) noexcept {
    switch (m) {
        case EntropyMethod::analytic: return "analytic";
        case EntropyMethod::knn: return "knn";
        case EntropyMethod::spectral_gaussian: return "spectral-gaussian";
    }
    return "unknown";
}

std::string_view to_string(BoundSetting s) noexcept {
    switch (s) {
        case BoundSetting::estimation: return "estimation";
        case BoundSetting::prediction: return "prediction";
        case BoundSetting::recursive: return "recursive";
        case BoundSetting::fitting: return "fitting";
        case BoundSetting::spectral: return "spectral";
    }
    return "unknown";
}

std::string_view to_string(PredictorKind k) noexcept {
    switch (k) {
        case PredictorKind::oracle: return "oracle";
        case PredictorKind::ols_ar: return "ols-ar";
        case PredictorKind::persistence: return "persistence";
        case PredictorKind::zero: return "zero";
    }
    return "unknown";
}

std::string_view to_string(ProcessKind k) noexcept {
    switch (k) {
        case ProcessKind::ar: return "ar";
        case ProcessKind::recursive_increment: return "recursive-increment";
    }
    return "unknown";
}

std::string_view innovation_name(const Innovation& law) noexcept {
    struct Visitor {
        std::string_view operator()(const UniformLaw&) const { return "uniform"; }
        std::string_view operator()(const GaussianLaw&) const { return "gaussian"; }
        std::string_view operator()(const LaplaceLaw&) const { return "laplace"; }
    };
    return std::visit(Visitor{}, law);
}

double innovation_variance(const Innovation& law) noexcept {
    struct Visitor {
        double operator()(const UniformLaw& u) const {
            return (2.0 * u.half_width) * (2.0 * u.half_width) / 12.0;
        }
        double operator()(const GaussianLaw& g) const { return g.sigma * g.sigma; }
        double operator()(const LaplaceLaw& l) const { return 2.0 * l.scale * l.scale; }
    };
    return std::visit(Visitor{}, law);
}

bool innovation_bounded(const Innovation& law) noexcept {
    return std::holds_alternative<UniformLaw>(law);
}

}  // namespace predbound
