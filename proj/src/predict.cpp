#include "predbound/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "predbound/error.hpp"

namespace predbound {

namespace {

void require_step(int m) {
    if (m < 1) throw InvalidInput("prediction step must be positive");
}

}  // namespace

Predictor fit_ols_ar(const Series& series, std::size_t p, int m) {
    require_step(m);
    if (p == 0) throw InvalidInput("AR order must be positive");
    const std::size_t n = series.size();
    if (n < 10 * p) {
        throw InsufficientData("order " + std::to_string(p) + " fit needs at least " +
                               std::to_string(10 * p) + " samples, got " + std::to_string(n));
    }
    const std::size_t first = static_cast<std::size_t>(m) + p - 1;
    if (n <= first + p) throw InsufficientData("series too short for the requested step");

    const auto x = series.values();
    const auto rows = static_cast<Eigen::Index>(n - first);
    const auto cols = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = first + static_cast<std::size_t>(r);
        target(r) = x[t];
        for (Eigen::Index j = 0; j < cols; ++j) {
            design(r, j) = x[t - static_cast<std::size_t>(m) - static_cast<std::size_t>(j)];
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < cols) throw DegenerateData("AR design matrix is rank deficient");
    const Eigen::VectorXd beta = qr.solve(target);

    Predictor pred;
    pred.kind = PredictorKind::ols_ar;
    pred.m_step = m;
    pred.coeffs.assign(beta.data(), beta.data() + beta.size());
    return pred;
}

Predictor persistence_predictor(int m) {
    require_step(m);
    return Predictor{PredictorKind::persistence, {1.0}, m};
}

Predictor zero_predictor(int m) {
    require_step(m);
    return Predictor{PredictorKind::zero, {}, m};
}

Series prediction_errors(const Series& series, const Predictor& pred) {
    require_step(pred.m_step);
    const std::size_t offset = pred.order() + static_cast<std::size_t>(pred.m_step) - 1;
    const std::size_t n = series.size();
    if (n <= pred.order() + static_cast<std::size_t>(pred.m_step)) {
        throw InvalidInput("series of length " + std::to_string(n) + " is too short for a predictor of order " +
                           std::to_string(pred.order()) + " and step " + std::to_string(pred.m_step));
    }
    const auto x = series.values();
    std::vector<double> e;
    e.reserve(n - offset);
    for (std::size_t t = offset; t < n; ++t) {
        double xhat = 0.0;
        for (std::size_t i = 0; i < pred.order(); ++i) {
            xhat += pred.coeffs[i] * x[t - static_cast<std::size_t>(pred.m_step) - i];
        }
        e.push_back(x[t] - xhat);
    }
    return Series(std::move(e), series.seed(), series.model());
}

WhitenessTest ljung_box(std::span<const double> x, std::size_t lags) {
    const std::size_t n = x.size();
    if (lags == 0 || lags >= n) throw InvalidInput("Ljung-Box lags must be in [1, n)");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (double v : x) c0 += (v - mean) * (v - mean);
    if (!(c0 > 0.0)) throw DegenerateData("whiteness test on a constant series");

    const auto nd = static_cast<double>(n);
    double q = 0.0;
    for (std::size_t k = 1; k <= lags; ++k) {
        double ck = 0.0;
        for (std::size_t t = k; t < n; ++t) ck += (x[t] - mean) * (x[t - k] - mean);
        const double rho = ck / c0;
        q += rho * rho / (nd - static_cast<double>(k));
    }
    q *= nd * (nd + 2.0);

    const boost::math::chi_squared dist(static_cast<double>(lags));
    return WhitenessTest{q, boost::math::cdf(boost::math::complement(dist, q)), lags};
}

double uniformity_distance(std::span<const double> x) {
    if (x.empty()) throw InvalidInput("uniformity test on an empty sample");
    std::vector<double> s(x.begin(), x.end());
    std::ranges::sort(s);
    const double lo = s.front();
    const double width = s.back() - lo;
    if (!(width > 0.0)) throw DegenerateData("uniformity test on a constant sample");
    const auto n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = (s[i] - lo) / width;
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

bool achieves_bound(const ErrorDiagnostics& d) noexcept {
    return d.whiteness.p_value >= kWhitenessMinP && d.uniformity_stat < kUniformityMaxStat &&
           d.mi_error_past.bits < kMaxErrorPastMiBits;
}

ErrorDiagnostics diagnostics(const Series& errors, const Series& series, const EstimatorConfig& cfg,
                             int m_step) {
    require_step(m_step);
    const auto e = errors.values();
    const std::size_t ne = e.size();
    if (ne < kMinDiagnosticLength) {
        throw InsufficientData("diagnostics need at least " + std::to_string(kMinDiagnosticLength) +
                               " errors, got " + std::to_string(ne));
    }
    if (series.size() < ne) throw InvalidInput("errors must be the tail of the series");
    const std::size_t offset = series.size() - ne;
    const auto m = static_cast<std::size_t>(m_step);
    if (offset + ne <= m || ne <= m + cfg.k_neighbors) throw InsufficientData("too few errors for the lagged past");

    ErrorDiagnostics d;
    const auto [lo, hi] = std::ranges::minmax_element(e);
    d.empirical_support = *hi - *lo;
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= static_cast<double>(ne);
    d.mean = mean;
    d.empirical_max_deviation = std::max(*hi - mean, mean - *lo);
    d.whiteness = ljung_box(e, kWhitenessLags);
    d.uniformity_stat = uniformity_distance(e);

    // Pairs e_k against (x_{t-m}, e_{k-m}) with t = k + offset the series index.
    // When offset < m the first few errors lack x_{t-m}, so start later.
    const std::size_t first = std::max(m, m > offset ? m - offset : 0);
    const auto x = series.values();
    std::vector<double> target, past_x, past_e;
    for (std::size_t k = first; k < ne; ++k) {
        target.push_back(e[k]);
        past_x.push_back(x[k + offset - m]);
        past_e.push_back(e[k - m]);
    }
    d.mi_error_past = mutual_information(PointSet::from_scalars(target),
                                         PointSet::from_columns({past_x, past_e}), cfg);
    d.achieves_bound = achieves_bound(d);
    return d;
}

Certification certify(const Series& series, const Predictor& pred, const BoundReport& bound,
                      const EstimatorConfig& cfg) {
    if (bound.m_step != pred.m_step) {
        throw InvalidInput("bound is for step " + std::to_string(bound.m_step) + " but predictor uses step " +
                           std::to_string(pred.m_step));
    }
    const Series errors = prediction_errors(series, pred);

    Certification c;
    c.bound = bound;
    c.predictor = pred;
    c.diagnostics = diagnostics(errors, series, cfg, pred.m_step);
    const double dmax = c.diagnostics.empirical_max_deviation;
    c.inequality_holds = dmax >= bound.deviation_bound * (1.0 - c.tau);
    c.tightness_ratio = dmax > 0.0 ? bound.deviation_bound / dmax : std::numeric_limits<double>::infinity();
    c.achieves_bound = c.diagnostics.achieves_bound;
    c.support_unbounded = series.model().has_value() && !innovation_bounded(series.model()->innovation);
    return c;
}

}  // namespace predbound
