#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fdtm/csv_io.hpp"
#include "fdtm/graph.hpp"
#include "fdtm/measures.hpp"
#include "fdtm/oracles.hpp"

namespace fdtm {

enum class ExperimentKind { CircleConvergence, RingOffset, GeodesicDump };
enum class TopologyKind { Complete, KNearest, Yao };
enum class WeightKind { Subdivided, EndpointAverage, Fermat };

std::string to_string(ExperimentKind kind);
std::string to_string(TopologyKind kind);
std::string to_string(WeightKind kind);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::CircleConvergence;
  std::vector<std::size_t> sample_sizes{128, 256, 512, 1024, 2048, 4096};
  std::size_t repetitions = 50;
  std::uint64_t seed = 0;
  DtmParams params;
  /// Unset: Yao for every experiment.
  std::optional<TopologyKind> topology;
  /// k or cone count; unset means default_log_parameter(n).
  std::optional<std::size_t> topology_parameter;
  WeightKind weights = WeightKind::Subdivided;
  /// Unset means default_log_parameter(n).
  std::optional<std::size_t> subdivisions;
  double fermat_alpha = 1.1;
  std::string output_path;
  /// 0 selects the machine's parallelism. Never affects results.
  unsigned threads = 0;

  /// Analytic reference resolution for the circle experiment.
  std::size_t quadrature_points = 2000;
  double ring_inner_radius = 0.7;
  double ring_outer_radius = 1.0;
  /// Geodesic dump: grid cells per axis, query points, and whether to sweep
  /// m in {0.2, 0.1, 0.05} x beta in {1, 2} instead of using `params`.
  std::size_t grid_resolution = 200;
  Point query_x{1.0, 0.0};
  Point query_y{-1.0, 0.0};
  bool sweep = true;

  /// Throws InvalidInput on an inconsistent configuration.
  void validate() const;
  [[nodiscard]] GraphTopology topology_for(std::size_t n) const;
  [[nodiscard]] WeightMode weights_for(std::size_t n) const;
  /// `# key=value` echo of every field plus version and error metric.
  [[nodiscard]] io::Metadata metadata() const;
};

/// Seed of repetition `rep` at sample size `n`.
std::uint64_t derive_seed(std::uint64_t seed, std::size_t n, std::size_t rep) noexcept;

struct CircleRow {
  std::size_t n = 0;
  double mean_abs_error = 0.0;
  double std_error = 0.0;
  double mean_distance = 0.0;
};

struct CircleConvergenceResult {
  oracles::CircleFdtm reference;
  std::vector<CircleRow> rows;
  /// Least-squares slope of log(mean_abs_error) against log(n).
  double slope = 0.0;
};

/// Empirical FDTM between (1, 0) and (-1, 0) on circle samples against the
/// equal-chord analytic value.
CircleConvergenceResult run_circle_convergence(const ExperimentConfig& config);
void write_csv(std::ostream& out, const ExperimentConfig& config, const CircleConvergenceResult& result);

struct RingRow {
  std::size_t n = 0;
  std::size_t shortcut_points = 0;
  double fdtm_rel_offset = 0.0;
  double fermat_rel_offset = 0.0;
  double fdtm_std_error = 0.0;
  double fermat_std_error = 0.0;
};

struct RingOffsetResult {
  std::vector<RingRow> rows;
};

/// Mid-annulus points (0, -c) and (0, c), c the mean radius.
std::pair<Point, Point> ring_query_points(const ExperimentConfig& config);

/// Relative change |l - l'| / l of the distance between opposite ring points
/// when a shortcut is added, under FDTM and sample Fermat weights.
///
/// Both query points are added as graph vertices (the DTM still comes from
/// the n samples) so that no path can jump straight between them.
RingOffsetResult run_ring_offset(const ExperimentConfig& config);
void write_csv(std::ostream& out, const ExperimentConfig& config, const RingOffsetResult& result);

struct DtmGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  /// Row-major, ny rows of nx values; cell centres.
  std::vector<double> values;
};

/// DTM sampled at cell centres of a regular grid over a bounding box.
DtmGrid dtm_grid(const SpatialIndex& index, const DtmParams& params, double x_min, double x_max, double y_min,
                 double y_max, std::size_t nx, std::size_t ny, unsigned threads = 1);
void write_grid(std::ostream& out, const DtmGrid& grid);

struct GeodesicDumpItem {
  DtmParams params;
  GeodesicResult geodesic;
  DtmGrid grid;
  std::string geodesic_path;
  std::string grid_path;
};

/// Geodesic between the configured query points on one circle sample of size
/// sample_sizes.back(), for every swept parameter pair.
std::vector<GeodesicDumpItem> dump_geodesic(const ExperimentConfig& config);
/// Writes each item's geodesic and grid CSV next to config.output_path.
void write_dump(const ExperimentConfig& config, const std::vector<GeodesicDumpItem>& items);

/// Largest distance from a point of the polyline to the unit circle.
double max_circle_deviation(const PointCloud& polyline) noexcept;
/// Lengths of consecutive polyline segments.
std::vector<double> segment_lengths(const PointCloud& polyline);

/// Runs the configured experiment. Circle and ring tables go to
/// config.output_path, or to `fallback` when it is empty; the geodesic dump
/// writes its files and lists their paths on `fallback`.
void run_experiment(const ExperimentConfig& config, std::ostream& fallback);

}  // namespace fdtm
