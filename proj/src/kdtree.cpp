#include "kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace predbound::detail {

namespace {
constexpr std::size_t kLeafSize = 12;
}

ChebyshevTree::ChebyshevTree(std::span<const double> points, std::size_t dim)
    : n_(dim == 0 ? 0 : points.size() / dim), dim_(dim) {
    id_.resize(n_);
    std::iota(id_.begin(), id_.end(), std::size_t{0});
    data_.assign(points.begin(), points.end());
    nodes_.reserve(2 * n_ / kLeafSize + 2);
    if (n_ > 0) build(0, n_);

    // Permute coordinates into tree order for cache-friendly leaf scans.
    std::vector<double> ordered(n_ * dim_);
    slot_.resize(n_);
    for (std::size_t s = 0; s < n_; ++s) {
        std::copy_n(&points[id_[s] * dim_], dim_, &ordered[s * dim_]);
        slot_[id_[s]] = s;
    }
    data_ = std::move(ordered);

    lo_.assign(nodes_.size() * dim_, 0.0);
    hi_.assign(nodes_.size() * dim_, 0.0);
    for (std::size_t nd = 0; nd < nodes_.size(); ++nd) {
        for (std::size_t d = 0; d < dim_; ++d) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t s = nodes_[nd].begin; s < nodes_[nd].end; ++s) {
                lo = std::min(lo, data_[s * dim_ + d]);
                hi = std::max(hi, data_[s * dim_ + d]);
            }
            lo_[nd * dim_ + d] = lo;
            hi_[nd * dim_ + d] = hi;
        }
    }
}

std::size_t ChebyshevTree::build(std::size_t begin, std::size_t end) {
    const std::size_t idx = nodes_.size();
    nodes_.push_back(Node{begin, end, 0, 0});
    if (end - begin <= kLeafSize) return idx;

    std::size_t split_dim = 0;
    double best_spread = -1.0;
    for (std::size_t d = 0; d < dim_; ++d) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t s = begin; s < end; ++s) {
            const double v = data_[id_[s] * dim_ + d];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > best_spread) {
            best_spread = hi - lo;
            split_dim = d;
        }
    }
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(id_.begin() + static_cast<std::ptrdiff_t>(begin),
                     id_.begin() + static_cast<std::ptrdiff_t>(mid),
                     id_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                         return data_[a * dim_ + split_dim] < data_[b * dim_ + split_dim];
                     });
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    nodes_[idx].left = left;
    nodes_[idx].right = right;
    return idx;
}

double ChebyshevTree::min_dist(std::size_t node, const double* q) const {
    double d = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
        const double lo = lo_[node * dim_ + k];
        const double hi = hi_[node * dim_ + k];
        d = std::max(d, std::max(lo - q[k], q[k] - hi));
    }
    return d;
}

double ChebyshevTree::max_dist(std::size_t node, const double* q) const {
    double d = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
        d = std::max(d, std::max(q[k] - lo_[node * dim_ + k], hi_[node * dim_ + k] - q[k]));
    }
    return d;
}

// `best` holds the k smallest distances seen so far in ascending order.
void ChebyshevTree::knn(std::size_t node, const double* q, std::size_t self,
                        std::vector<double>& best) const {
    const Node& nd = nodes_[node];
    if (nd.left == 0) {
        for (std::size_t s = nd.begin; s < nd.end; ++s) {
            if (s == self) continue;
            const double* p = point(s);
            double d = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) d = std::max(d, std::abs(p[k] - q[k]));
            if (d < best.back()) {
                auto it = std::upper_bound(best.begin(), best.end(), d);
                best.insert(it, d);
                best.pop_back();
            }
        }
        return;
    }
    const double dl = min_dist(nd.left, q);
    const double dr = min_dist(nd.right, q);
    const auto [first, second] = dl <= dr ? std::pair{nd.left, nd.right} : std::pair{nd.right, nd.left};
    const double d_second = std::max(dl, dr);
    if (std::min(dl, dr) < best.back()) knn(first, q, self, best);
    if (d_second < best.back()) knn(second, q, self, best);
}

double ChebyshevTree::kth_neighbor_distance(std::size_t i, int k) const {
    std::vector<double> best(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
    const std::size_t s = slot_[i];
    knn(0, point(s), s, best);
    return best.back();
}

std::size_t ChebyshevTree::count(std::size_t node, const double* q, double r) const {
    if (min_dist(node, q) >= r) return 0;
    const Node& nd = nodes_[node];
    if (max_dist(node, q) < r) return nd.end - nd.begin;
    if (nd.left == 0) {
        std::size_t c = 0;
        for (std::size_t s = nd.begin; s < nd.end; ++s) {
            const double* p = point(s);
            double d = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) d = std::max(d, std::abs(p[k] - q[k]));
            if (d < r) ++c;
        }
        return c;
    }
    return count(nd.left, q, r) + count(nd.right, q, r);
}

std::size_t ChebyshevTree::count_within(std::size_t i, double r) const {
    if (!(r > 0.0)) return 0;
    // The query point itself lies at distance 0 < r.
    return count(0, point(slot_[i]), r) - 1;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
}

}  // namespace predbound::detail
