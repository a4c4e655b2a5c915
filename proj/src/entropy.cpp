#include "predbound/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "kdtree.hpp"
#include "predbound/error.hpp"

namespace predbound {

namespace {

constexpr double kJitterScale = 1e-10;

double digamma(double x) { return boost::math::digamma(x); }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::size_t count_duplicate_rows(const PointSet& ps) {
    const std::size_t n = ps.size();
    const std::size_t d = ps.dim;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto row = [&](std::size_t i) { return std::span<const double>(&ps.data[i * d], d); };
    std::ranges::sort(order, [&](std::size_t a, std::size_t b) {
        return std::ranges::lexicographical_compare(row(a), row(b));
    });
    std::size_t dups = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::ranges::equal(row(order[i]), row(order[i - 1]))) ++dups;
    }
    return dups;
}

// Rejects tie-heavy data; otherwise breaks the remaining ties with a
// deterministic perturbation of 1e-10 standard deviations per coordinate.
// Returns whether jitter was applied.
bool prepare(PointSet& ps) {
    const std::size_t n = ps.size();
    const std::size_t dups = count_duplicate_rows(ps);
    if (static_cast<double>(dups) >= kMaxTieFraction * static_cast<double>(n)) {
        throw DegenerateData(std::to_string(dups) + " of " + std::to_string(n) +
                             " samples are exact duplicates; differential entropy is ill-posed");
    }
    if (dups == 0) return false;

    for (std::size_t c = 0; c < ps.dim; ++c) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += ps.data[i * ps.dim + c];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = ps.data[i * ps.dim + c] - mean;
            var += v * v;
        }
        const double sd = std::sqrt(var / static_cast<double>(n));
        const double scale = kJitterScale * (sd > 0.0 ? sd : 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t h = splitmix64(i * ps.dim + c);
            const double u = static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5;
            ps.data[i * ps.dim + c] += scale * u;
        }
    }
    return true;
}

void require_dim(std::size_t dim, std::size_t max_dim) {
    if (dim == 0) throw InvalidInput("points must have at least one coordinate");
    if (dim > max_dim) {
        throw InvalidInput("joint dimension " + std::to_string(dim) + " exceeds the cap of " +
                           std::to_string(max_dim));
    }
}

void require_points(std::size_t n, int k) {
    if (k < 1) throw InvalidInput("neighbour count must be at least 1");
    if (n < static_cast<std::size_t>(k) + 1) {
        throw InsufficientData("need at least k + 1 = " + std::to_string(k + 1) + " samples, got " +
                               std::to_string(n));
    }
}

// Projects coordinates [first, first + count) of every point.
PointSet project(const PointSet& ps, std::size_t first, std::size_t count) {
    PointSet out;
    out.dim = count;
    out.data.resize(ps.size() * count);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::copy_n(&ps.data[i * ps.dim + first], count, &out.data[i * count]);
    }
    return out;
}

}  // namespace

void EstimatorConfig::validate() const {
    if (k_neighbors < 1) throw InvalidInput("k_neighbors must be at least 1");
    if (max_dim < 1) throw InvalidInput("max_dim must be at least 1");
    if (window + 1 > max_dim) {
        throw InvalidInput("window " + std::to_string(window) + " exceeds max_dim - 1 = " +
                           std::to_string(max_dim - 1));
    }
}

PointSet PointSet::from_scalars(std::span<const double> values) {
    return PointSet{1, std::vector<double>(values.begin(), values.end())};
}

PointSet PointSet::from_columns(const std::vector<std::span<const double>>& columns) {
    if (columns.empty()) throw InvalidInput("at least one column is required");
    const std::size_t n = columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != n) throw InvalidInput("columns must have equal length");
    }
    PointSet ps;
    ps.dim = columns.size();
    ps.data.resize(n * ps.dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < ps.dim; ++c) ps.data[i * ps.dim + c] = columns[c][i];
    }
    return ps;
}

PointSet PointSet::join(const PointSet& a, const PointSet& b) {
    if (a.size() != b.size()) {
        throw InvalidInput("point sets differ in length: " + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()));
    }
    PointSet ps;
    ps.dim = a.dim + b.dim;
    ps.data.resize(a.size() * ps.dim);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::copy_n(&a.data[i * a.dim], a.dim, &ps.data[i * ps.dim]);
        std::copy_n(&b.data[i * b.dim], b.dim, &ps.data[i * ps.dim + a.dim]);
    }
    return ps;
}

EntropyValue knn_entropy(const PointSet& samples, int k, std::size_t max_dim, unsigned threads) {
    require_dim(samples.dim, max_dim);
    const std::size_t n = samples.size();
    require_points(n, k);
    for (double v : samples.data) {
        if (!std::isfinite(v)) throw InvalidInput("samples must be finite");
    }

    PointSet ps = samples;
    const bool jittered = prepare(ps);
    const detail::ChebyshevTree tree(ps.data, ps.dim);

    std::vector<double> log_eps(n);
    detail::parallel_for(n, threads, [&](std::size_t i) {
        log_eps[i] = std::log(2.0 * tree.kth_neighbor_distance(i, k));
    });
    const double mean_log = std::accumulate(log_eps.begin(), log_eps.end(), 0.0) / static_cast<double>(n);
    const double nats = digamma(static_cast<double>(n)) - digamma(k) +
                        static_cast<double>(ps.dim) * mean_log;

    EntropyValue h;
    h.bits = nats / std::numbers::ln2;
    h.method = EntropyMethod::knn;
    h.k_neighbors = k;
    h.n_samples = n;
    h.jittered = jittered;
    return h;
}

EntropyValue knn_entropy(std::span<const double> samples, int k) {
    return knn_entropy(PointSet::from_scalars(samples), k);
}

EntropyValue conditional_entropy(const Series& series, int m, std::size_t window,
                                 const EstimatorConfig& cfg) {
    cfg.validate();
    if (m < 1) throw InvalidInput("prediction step must be positive");
    if (window + 1 > cfg.max_dim) {
        throw InsufficientData("window " + std::to_string(window) + " needs joint dimension " +
                               std::to_string(window + 1) + " above the cap " +
                               std::to_string(cfg.max_dim));
    }
    const std::size_t n = series.size();
    if (n < 10 * (window + 1)) {
        throw InsufficientData("window " + std::to_string(window) + " needs at least " +
                               std::to_string(10 * (window + 1)) + " samples, got " +
                               std::to_string(n));
    }
    if (window == 0) {
        EntropyValue h = knn_entropy(PointSet::from_scalars(series.values()), cfg.k_neighbors,
                                     cfg.max_dim, cfg.threads);
        h.window = 0;
        return h;
    }

    // Row t holds (x_t, x_{t-m}, ..., x_{t-m-w+1}).
    const auto x = series.values();
    const std::size_t span = static_cast<std::size_t>(m) + window - 1;
    if (n <= span) throw InsufficientData("series shorter than the conditioning span");
    const std::size_t rows = n - span;
    require_points(rows, cfg.k_neighbors);

    PointSet joint;
    joint.dim = window + 1;
    joint.data.resize(rows * joint.dim);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + span;
        joint.data[r * joint.dim] = x[t];
        for (std::size_t j = 0; j < window; ++j) {
            joint.data[r * joint.dim + 1 + j] = x[t - static_cast<std::size_t>(m) - j];
        }
    }
    const bool jittered = prepare(joint);
    const PointSet past = project(joint, 1, window);

    const detail::ChebyshevTree joint_tree(joint.data, joint.dim);
    const detail::ChebyshevTree past_tree(past.data, past.dim);

    std::vector<double> term(rows);
    detail::parallel_for(rows, cfg.threads, [&](std::size_t i) {
        const double eps = joint_tree.kth_neighbor_distance(i, cfg.k_neighbors);
        const auto n_past = past_tree.count_within(i, eps);
        term[i] = digamma(static_cast<double>(n_past) + 1.0) + std::log(2.0 * eps);
    });
    const double mean = std::accumulate(term.begin(), term.end(), 0.0) / static_cast<double>(rows);
    const double nats = mean - digamma(cfg.k_neighbors);

    EntropyValue h;
    h.bits = nats / std::numbers::ln2;
    h.method = EntropyMethod::knn;
    h.k_neighbors = cfg.k_neighbors;
    h.window = window;
    h.n_samples = rows;
    h.jittered = jittered;
    return h;
}

EntropyValue mutual_information(const PointSet& a, const PointSet& b, const EstimatorConfig& cfg) {
    cfg.validate();
    if (a.size() != b.size()) {
        throw InvalidInput("mutual information needs equal lengths, got " + std::to_string(a.size()) +
                           " and " + std::to_string(b.size()));
    }
    require_dim(a.dim + b.dim, cfg.max_dim);
    const std::size_t n = a.size();
    require_points(n, cfg.k_neighbors);
    if (a.dim == b.dim && a.data == b.data) {
        throw DegenerateData("identical variables have infinite mutual information");
    }

    PointSet joint = PointSet::join(a, b);
    const bool jittered = prepare(joint);
    const PointSet pa = project(joint, 0, a.dim);
    const PointSet pb = project(joint, a.dim, b.dim);

    const detail::ChebyshevTree joint_tree(joint.data, joint.dim);
    const detail::ChebyshevTree tree_a(pa.data, pa.dim);
    const detail::ChebyshevTree tree_b(pb.data, pb.dim);

    std::vector<double> term(n);
    detail::parallel_for(n, cfg.threads, [&](std::size_t i) {
        const double eps = joint_tree.kth_neighbor_distance(i, cfg.k_neighbors);
        const auto na = tree_a.count_within(i, eps);
        const auto nb = tree_b.count_within(i, eps);
        term[i] = digamma(static_cast<double>(na) + 1.0) + digamma(static_cast<double>(nb) + 1.0);
    });
    const double mean = std::accumulate(term.begin(), term.end(), 0.0) / static_cast<double>(n);
    const double nats = digamma(cfg.k_neighbors) + digamma(static_cast<double>(n)) - mean;
    const double raw = nats / std::numbers::ln2;

    EntropyValue mi;
    mi.bits = std::max(0.0, raw);
    mi.raw_bits = raw;
    mi.method = EntropyMethod::knn;
    mi.k_neighbors = cfg.k_neighbors;
    mi.n_samples = n;
    mi.jittered = jittered;
    return mi;
}

EntropyValue entropy_rate(const Series& series, const EstimatorConfig& cfg) {
    return conditional_entropy(series, 1, cfg.window, cfg);
}

EntropyValue negentropy_rate(const Series& series, const EstimatorConfig& cfg,
                             const SpectrumEstimate& spectrum) {
    const EntropyValue gaussian = szego_gaussian_entropy_rate(spectrum);
    EntropyValue j = entropy_rate(series, cfg);
    const double raw = gaussian.bits - j.bits;
    j.raw_bits = raw;
    j.bits = std::max(0.0, raw);
    return j;
}

}  // namespace predbound
