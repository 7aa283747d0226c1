#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "cmx/core.hpp"

namespace cmx {

// Distance policies. `reduce` folds one per-axis absolute difference into an
// accumulator; `finish` turns the accumulator into a distance. Comparisons
// against a radius happen on accumulators via `to_acc`.
struct Chebyshev {
  static constexpr double reduce(double acc, double d) noexcept { return d > acc ? d : acc; }
  static double finish(double acc) noexcept { return acc; }
  static constexpr double to_acc(double r) noexcept { return r; }
};

struct Euclidean {
  static constexpr double reduce(double acc, double d) noexcept { return acc + d * d; }
  static double finish(double acc) noexcept { return std::sqrt(acc); }
  static constexpr double to_acc(double r) noexcept { return r * r; }
};

// Static kd-tree over a StateSpaceSet with bounding boxes per node. Built once
// per call site; holds a reference to the points, so the set must outlive it.
template <class Metric>
class KdTree {
 public:
  explicit KdTree(const StateSpaceSet& points, std::size_t leaf_size = 12)
      : pts_(points), dim_(points.dimension()), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
    index_.resize(pts_.size());
    std::iota(index_.begin(), index_.end(), std::size_t{0});
    nodes_.reserve(2 * (pts_.size() / leaf_size_ + 1));
    if (!index_.empty()) build(0, index_.size());
  }

  std::size_t size() const noexcept { return index_.size(); }

  // Distances to the k nearest points other than `self` (by index), ascending.
  void knn(std::size_t self, std::size_t k, std::vector<double>& out) const {
    out.clear();
    if (k == 0 || index_.empty()) return;
    Heap heap;
    search_knn(0, pts_[self], self, k, heap);
    out.resize(heap.size());
    for (std::size_t i = out.size(); i-- > 0;) {
      out[i] = Metric::finish(heap.top());
      heap.pop();
    }
  }

  // Distance to the k-th nearest neighbour of point `self`, excluding itself.
  double kth_distance(std::size_t self, std::size_t k) const {
    Heap heap;
    search_knn(0, pts_[self], self, k, heap);
    if (heap.size() < k) return std::numeric_limits<double>::infinity();
    return Metric::finish(heap.top());
  }

  // Calls f(index) for every point within distance <= r of q.
  template <class F>
  void for_each_within(std::span<const double> q, double r, F&& f) const {
    if (!index_.empty()) search_radius(0, q, Metric::to_acc(r), f);
  }

  std::size_t count_within(std::span<const double> q, double r) const {
    std::size_t c = 0;
    for_each_within(q, r, [&](std::size_t) { ++c; });
    return c;
  }

 private:
  struct Node {
    std::size_t begin, end;
    std::size_t left = 0, right = 0;  // 0 means leaf (root is never a child)
    std::size_t box;                  // offset into boxes_ (2*dim values: lo..., hi...)
  };
  using Heap = std::priority_queue<double>;

  double dist_acc(std::span<const double> a, std::span<const double> b) const {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) acc = Metric::reduce(acc, std::abs(a[d] - b[d]));
    return acc;
  }

  double box_acc(const Node& n, std::span<const double> q) const {
    const double* lo = boxes_.data() + n.box;
    const double* hi = lo + dim_;
    double acc = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      double gap = 0.0;
      if (q[d] < lo[d]) gap = lo[d] - q[d];
      else if (q[d] > hi[d]) gap = q[d] - hi[d];
      acc = Metric::reduce(acc, gap);
    }
    return acc;
  }

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(Node{begin, end, 0, 0, boxes_.size()});
    boxes_.resize(boxes_.size() + 2 * dim_);
    double* lo = boxes_.data() + nodes_[id].box;
    double* hi = lo + dim_;
    std::fill(lo, lo + dim_, std::numeric_limits<double>::infinity());
    std::fill(hi, hi + dim_, -std::numeric_limits<double>::infinity());
    for (std::size_t i = begin; i < end; ++i) {
      auto p = pts_[index_[i]];
      for (std::size_t d = 0; d < dim_; ++d) {
        lo[d] = std::min(lo[d], p[d]);
        hi[d] = std::max(hi[d], p[d]);
      }
    }
    if (end - begin <= leaf_size_) return id;

    std::size_t axis = 0;
    double widest = -1.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      if (hi[d] - lo[d] > widest) {
        widest = hi[d] - lo[d];
        axis = d;
      }
    }
    if (widest <= 0.0) return id;  // all points coincide

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(index_.begin() + static_cast<std::ptrdiff_t>(begin),
                     index_.begin() + static_cast<std::ptrdiff_t>(mid),
                     index_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) { return pts_[a][axis] < pts_[b][axis]; });
    const std::size_t l = build(begin, mid);
    const std::size_t r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  void search_knn(std::size_t node, std::span<const double> q, std::size_t self, std::size_t k, Heap& heap) const {
    const Node& n = nodes_[node];
    if (heap.size() == k && box_acc(n, q) > heap.top()) return;
    if (n.left == 0) {
      for (std::size_t i = n.begin; i < n.end; ++i) {
        const std::size_t j = index_[i];
        if (j == self) continue;
        const double d = dist_acc(q, pts_[j]);
        if (heap.size() < k) {
          heap.push(d);
        } else if (d < heap.top()) {
          heap.pop();
          heap.push(d);
        }
      }
      return;
    }
    const double dl = box_acc(nodes_[n.left], q);
    const double dr = box_acc(nodes_[n.right], q);
    if (dl <= dr) {
      search_knn(n.left, q, self, k, heap);
      search_knn(n.right, q, self, k, heap);
    } else {
      search_knn(n.right, q, self, k, heap);
      search_knn(n.left, q, self, k, heap);
    }
  }

  template <class F>
  void search_radius(std::size_t node, std::span<const double> q, double r_acc, F& f) const {
    const Node& n = nodes_[node];
    if (box_acc(n, q) > r_acc) return;
    if (n.left == 0) {
      for (std::size_t i = n.begin; i < n.end; ++i)
        if (dist_acc(q, pts_[index_[i]]) <= r_acc) f(index_[i]);
      return;
    }
    search_radius(n.left, q, r_acc, f);
    search_radius(n.right, q, r_acc, f);
  }

  const StateSpaceSet& pts_;
  std::size_t dim_;
  std::size_t leaf_size_;
  std::vector<std::size_t> index_;
  std::vector<Node> nodes_;
  std::vector<double> boxes_;
};

}  // namespace cmx
