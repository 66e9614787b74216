#include "fdtm/point_cloud.hpp"

#include <algorithm>
#include <cmath>

#include "fdtm/error.hpp"

namespace fdtm {

PointCloud::PointCloud(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InvalidInput("point dimension must be at least 1");
}

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim == 0) throw InvalidInput("point dimension must be at least 1");
  if (coords_.size() % dim != 0) throw InvalidInput("coordinate count is not a multiple of the dimension");
}

PointCloud PointCloud::from_points(const std::vector<Point>& points) {
  if (points.empty()) throw InvalidInput("point list is empty");
  PointCloud cloud(points.front().size());
  cloud.reserve(points.size());
  for (const auto& p : points) cloud.push_back(p);
  return cloud;
}

void PointCloud::push_back(PointView p) {
  if (p.size() != dim_) throw InvalidInput("point dimension mismatch");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

double squared_distance(PointView a, PointView b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double distance(PointView a, PointView b) noexcept { return std::sqrt(squared_distance(a, b)); }

double norm(PointView a) noexcept {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return std::sqrt(acc);
}

double diameter(const PointCloud& cloud) noexcept {
  double best = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = i + 1; j < cloud.size(); ++j) best = std::max(best, squared_distance(cloud[i], cloud[j]));
  return std::sqrt(best);
}

}  // namespace fdtm
