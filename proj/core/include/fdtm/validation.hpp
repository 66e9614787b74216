#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fdtm {

/// Outcome of one invariant check. `worst` is the largest observed value of
/// the checked quantity and `bound` its allowed maximum, so the slack is
/// bound - worst.
struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double bound = 0.0;
  std::size_t cases = 0;
  std::string detail;

  [[nodiscard]] double slack() const noexcept { return bound - worst; }
};

/// Randomised property checks of the DTM, graph and path layers against the
/// oracles. Each takes its own seed and is deterministic.
namespace checks {

/// Relative error of dtm_value against the piecewise-constant quadrature
/// oracle on random weighted measures.
CheckResult dtm_exactness(std::uint64_t seed, std::size_t measures = 100, std::size_t max_atoms = 20);
/// max(|dtm(x) - dtm(y)| - |x - y|).
CheckResult dtm_lipschitz(std::uint64_t seed, std::size_t measures = 4, std::size_t pairs = 10'000);
/// max over a grid of |d_mu - d_nu| - W_p(mu, nu) / m^(1/p).
CheckResult dtm_wasserstein_stability(std::uint64_t seed, std::size_t pairs = 50, std::size_t atoms = 6);
/// Relative error of dtm(s x) under the scaled measure against s dtm(x).
CheckResult dtm_scaling(std::uint64_t seed);
/// dtm(x) - diam(support) for x in the convex hull.
CheckResult dtm_diameter_bound(std::uint64_t seed);
/// |dtm - nearest-neighbour distance| with m = 1/n.
CheckResult dtm_single_atom_mass(std::uint64_t seed);
/// kd-tree neighbour lists against a linear scan (worst = mismatches).
CheckResult spatial_index_agreement(std::uint64_t seed);
/// dtm_batch on several threads against sequential dtm_value (bitwise).
CheckResult batch_determinism(std::uint64_t seed);
/// |I(2r) - I(r)| - |I(r) - I(r/2)| for segment integrals of smooth cases.
CheckResult segment_contraction(std::uint64_t seed);
/// Relative error of single_source against exhaustive path enumeration.
CheckResult shortest_path_oracle(std::uint64_t seed, std::size_t graphs = 500);

/// Symmetry, zero diagonal and triangle inequality of all-pairs empirical
/// FDTM on a circle sample. `inject_fault` inflates one distance pair after
/// the computation, which must break the triangle inequality.
std::vector<CheckResult> metric_axioms(std::uint64_t seed, std::size_t n = 200, std::size_t triples = 100'000,
                                       bool inject_fault = false);
/// euclidean_length / ((max dtm on [x,y] / min dtm)^beta |x - y|) on
/// Complete graphs; bounded by 1.05.
CheckResult geodesic_length_bound(std::uint64_t seed, std::size_t clouds = 20);
/// Query distance never exceeds the direct x-y edge weight.
CheckResult straight_segment_bound(std::uint64_t seed);
/// Relative error of the scaled query distance against s^(beta+1) times the
/// original, s in {0.5, 3}.
CheckResult query_scaling(std::uint64_t seed);
/// Edge weights scale by s^(beta+1) (subdivided DTM) and s^alpha (Fermat).
CheckResult edge_weight_scaling(std::uint64_t seed);
/// Edge-set inclusion knn(k) in knn(k+1) in complete, and the matching
/// distance decrease.
CheckResult topology_monotonicity(std::uint64_t seed);
/// Relative difference of endpoint-average and subdivided weights on short
/// edges of a 512-point circle sample; bounded by 10%.
CheckResult endpoint_average_agreement(std::uint64_t seed);
/// Symmetry and triangle inequality of the brute-force Wasserstein distance.
CheckResult wasserstein_axioms(std::uint64_t seed);
/// Best equal-chord value never exceeds the single chord.
CheckResult circle_oracle_refinement();
/// |mass difference - 2 m eps^b| for the Le Cam pair, bounded by 2 m eps^b / atoms.
CheckResult lecam_mass_difference(double b = 1.0, double epsilon = 0.05);
/// D_nu(-x, x) - D_mu(-x, x), must be negative.
CheckResult lecam_fdtm_order(double b = 1.0, double epsilon = 0.05);

}  // namespace checks

struct ValidationOptions {
  std::uint64_t seed = 20240601;
  bool inject_fault = false;
};

std::vector<CheckResult> run_validation(const ValidationOptions& options);
void print_table(std::ostream& out, const std::vector<CheckResult>& results);
bool all_passed(const std::vector<CheckResult>& results) noexcept;

}  // namespace fdtm
