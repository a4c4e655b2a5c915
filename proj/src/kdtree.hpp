#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace predbound::detail {

/// Static k-d tree over row-major points under the max-coordinate metric.
/// Every query is relative to a point already stored in the tree and
/// excludes that point itself.
class ChebyshevTree {
public:
    ChebyshevTree(std::span<const double> points, std::size_t dim);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    /// Distance from point i to its k-th nearest other point.
    [[nodiscard]] double kth_neighbor_distance(std::size_t i, int k) const;

    /// Number of other points at distance strictly less than r from point i.
    [[nodiscard]] std::size_t count_within(std::size_t i, double r) const;

private:
    struct Node {
        std::size_t begin = 0;
        std::size_t end = 0;
        std::size_t left = 0;   // 0 marks a leaf; the root is never a child
        std::size_t right = 0;
    };

    std::size_t build(std::size_t begin, std::size_t end);
    [[nodiscard]] const double* point(std::size_t idx) const { return &data_[idx * dim_]; }
    [[nodiscard]] double min_dist(std::size_t node, const double* q) const;
    [[nodiscard]] double max_dist(std::size_t node, const double* q) const;

    void knn(std::size_t node, const double* q, std::size_t self, std::vector<double>& best) const;
    [[nodiscard]] std::size_t count(std::size_t node, const double* q, double r) const;

    std::size_t n_;
    std::size_t dim_;
    std::vector<double> data_;     // points permuted into tree order
    std::vector<std::size_t> id_;  // tree slot -> original index
    std::vector<std::size_t> slot_;  // original index -> tree slot
    std::vector<Node> nodes_;
    std::vector<double> lo_;  // per-node bounding boxes, dim_ entries each
    std::vector<double> hi_;
};

/// Runs fn(i) for i in [0, n) over a fixed chunking. Callers write results to
/// per-index slots, so the outcome does not depend on the thread count.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace predbound::detail
