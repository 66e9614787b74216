#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fdtm {

using Point = std::vector<double>;
using PointView = std::span<const double>;

/// Points of a common dimension stored contiguously (row-major).
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::size_t dim);
  PointCloud(std::size_t dim, std::vector<double> coords);

  static PointCloud from_points(const std::vector<Point>& points);

  [[nodiscard]] std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] bool empty() const noexcept { return coords_.empty(); }

  [[nodiscard]] PointView operator[](std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  [[nodiscard]] std::span<double> mutable_point(std::size_t i) noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }

  void push_back(PointView p);
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

double squared_distance(PointView a, PointView b) noexcept;
double distance(PointView a, PointView b) noexcept;
double norm(PointView a) noexcept;

/// Largest pairwise distance, O(n^2).
double diameter(const PointCloud& cloud) noexcept;

}  // namespace fdtm
