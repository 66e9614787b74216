#pragma once

#include <cstddef>

#include "fdtm/graph.hpp"
#include "fdtm/measures.hpp"

namespace fdtm {

/// Independent reference computations for validating the main pipeline.
namespace oracles {

struct OracleReport {
  double computed = 0.0;
  double reference = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
};

OracleReport compare(double computed, double reference) noexcept;

/// Exact W_p between two uniform measures with the same number (<= 7) of atoms,
/// by enumerating all bijections.
double wasserstein_bruteforce(const WeightedMeasure& mu, const WeightedMeasure& nu, double p);

/// Minimum weight over all simple s-t paths (graphs with <= 8 vertices).
double exhaustive_shortest(const MetricGraph& graph, std::size_t s, std::size_t t);

/// Pseudo-DTM inf{r > 0 : mu(B(x, r)) > u} evaluated from its definition by
/// scanning all atoms (quadratic).
double pseudo_dtm(const WeightedMeasure& measure, PointView x, double u);

/// DTM as a piecewise-constant quadrature of pseudo_dtm^p over [0, m], one
/// sample per constancy cell. Uses no spatial index.
double dtm_piecewise_quadrature(const WeightedMeasure& measure, PointView x, const DtmParams& params);

/// Pseudo-DTM of the uniform measure on the unit circle at a point of radius
/// rho <= 1: sqrt(1 + rho^2 - 2 rho cos(pi u)).
double circle_pseudo_dtm(double rho, double u) noexcept;
double circle_dtm(double rho, const DtmParams& params, std::size_t quadrature_points);
/// FDTM length of a chord of the unit circle subtending `angle`.
double circle_chord_fdtm(double angle, const DtmParams& params, std::size_t quadrature_points);

struct CircleFdtm {
  double value = 0.0;
  int chords = 0;
  /// True when the best chord count is the search cap (64).
  bool cap_reached = false;
};

/// FDTM between two points of the unit circle separated by `angle` for its
/// uniform measure, assuming geodesics made of k equal chords:
/// min over k in [1, 64] of k * circle_chord_fdtm(angle / k).
CircleFdtm circle_fdtm_analytic(double angle, const DtmParams& params, std::size_t quadrature_points);

/// dtm_segment_integral with 10^4 subdivisions.
double high_resolution_edge_weight(const WeightedMeasure& measure, PointView x, PointView y, const DtmParams& params);

}  // namespace oracles
}  // namespace fdtm
