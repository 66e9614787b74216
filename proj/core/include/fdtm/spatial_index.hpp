#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fdtm/measures.hpp"
#include "fdtm/point_cloud.hpp"

namespace fdtm {

struct Neighbor {
  std::uint32_t index;
  double squared_distance;

  friend bool operator<(const Neighbor& a, const Neighbor& b) noexcept {
    return a.squared_distance < b.squared_distance ||
           (a.squared_distance == b.squared_distance && a.index < b.index);
  }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Immutable exact nearest-neighbour structure over a point set with masses.
///
/// Backed by a bucketed kd-tree; sets with fewer than kLinearScanLimit points
/// are scanned linearly. Neighbour lists are ordered by (distance, index), so
/// results are identical to a brute-force scan.
class SpatialIndex {
 public:
  static constexpr std::size_t kLinearScanLimit = 64;
  static constexpr std::size_t kLeafSize = 16;

  explicit SpatialIndex(const WeightedMeasure& measure);
  /// Index over a bare cloud; every point gets mass 1/n.
  explicit SpatialIndex(const PointCloud& cloud);

  [[nodiscard]] std::size_t size() const noexcept { return masses_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return points_.dim(); }
  [[nodiscard]] const PointCloud& points() const noexcept { return points_; }
  [[nodiscard]] std::span<const double> masses() const noexcept { return masses_; }
  [[nodiscard]] bool uniform() const noexcept { return uniform_; }
  [[nodiscard]] bool uses_tree() const noexcept { return !nodes_.empty(); }

  /// The min(k, size()) nearest points, sorted by (distance, index).
  [[nodiscard]] std::vector<Neighbor> knn(PointView query, std::size_t k) const;
  void knn(PointView query, std::size_t k, std::vector<Neighbor>& out) const;

  /// Squared radius of a ball around `query` holding at least min(k, size())
  /// points, found by visiting the nearest leaves first.
  [[nodiscard]] double knn_radius_bound(PointView query, std::size_t k) const;
  /// All points with squared distance <= squared_radius, in index-structure
  /// order: two calls list the points common to both in the same order.
  void within(PointView query, double squared_radius, std::vector<Neighbor>& out) const;
  /// Squared distances of the points within(query, squared_radius) reports,
  /// in the same order.
  void within_distances(PointView query, double squared_radius, std::vector<double>& out) const;

  /// Point indices in kd-tree leaf order; nearby points tend to be adjacent.
  [[nodiscard]] std::vector<std::uint32_t> locality_order() const;

  /// Brute-force reference used by tests.
  [[nodiscard]] std::vector<Neighbor> knn_linear(PointView query, std::size_t k) const;

 private:
  struct Node {
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t left = -1;  // -1 marks a leaf
    std::int32_t right = -1;
  };

  void build();
  std::int32_t build_node(std::uint32_t begin, std::uint32_t end);
  [[nodiscard]] double box_distance(std::size_t node, PointView q) const noexcept;
  template <typename Emit>
  void visit_ball(PointView query, double squared_radius, Emit&& emit) const;
  void check_query(PointView q) const;

  PointCloud points_;
  std::vector<double> masses_;
  bool uniform_ = false;

  std::vector<Node> nodes_;
  std::vector<double> boxes_;           // per node: lo[dim] then hi[dim]
  std::vector<std::uint32_t> order_;    // tree slot -> original index
  std::vector<double> ordered_coords_;  // coordinates in tree order
};

}  // namespace fdtm
