#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "marg/errors.hpp"

namespace marg {

/// Exact coordinate as a reduced-form fraction num/den, den > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

enum class PointSetKind { Grid, Rank1Lattice, Korobov, MaximalRank, Random };

/// Identity string of the pseudo-random generator behind random_points().
/// Part of the file-format contract: files produced with a given rng id
/// reproduce bit-identically.
inline constexpr const char* kRandomGeneratorId = "splitmix64/53bit/v1";

/// Total scalar budget (N * s) a single generator call may materialize.
inline constexpr std::uint64_t kPointScalarBudget = std::uint64_t{1} << 26;

/// N points in [0,1)^s (grids alone may reach 1.0 exactly), row-major.
/// Grids and lattices also carry exact coordinates as fractions with a
/// shared denominator: coords[i*dim+j] == double(rational_num[i*dim+j]) / den.
struct PointSet {
  int dim = 0;               // s
  std::size_t count = 0;     // N
  std::vector<double> coords;  // count * dim, row-major

  // exact coordinates; empty when unavailable (random sets)
  std::vector<std::uint32_t> rational_num;
  std::int64_t rational_den = 0;

  PointSetKind kind = PointSetKind::Random;
  std::uint64_t grid_n = 0;              // Grid
  std::vector<std::uint64_t> gen;        // Rank1Lattice / Korobov / MaximalRank
  std::uint64_t alpha = 0;               // Korobov
  std::uint64_t base_count = 0;          // MaximalRank l
  std::uint64_t refinement = 0;          // MaximalRank r
  std::uint64_t seed = 0;                // Random

  double at(std::size_t i, int j) const { return coords[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)]; }
  bool has_rational() const { return rational_den != 0; }
  Rational rational_at(std::size_t i, int j) const;

  std::string kind_label() const;
  /// Key-value descriptor used in CSV headers, e.g. "kind=grid,N=25,s=2,n=5".
  std::string descriptor() const;
};

/// Per-axis decomposition of a point set into n distinct abscissae z_k and
/// their multiplicities m_k, with sum(m_k) == N.
struct ProjectionProfile {
  int axis = 0;  // 0-based
  std::vector<double> nodes;            // strictly increasing
  std::vector<std::size_t> multiplicities;
  bool fully_projection_regular = false;  // true iff nodes.size() == N

  std::size_t node_count() const { return nodes.size(); }
};

/// Number of points of an n-per-axis grid in s dimensions (n^s), with
/// overflow checking. Does not materialize anything.
std::uint64_t grid_point_count(std::uint64_t n, int s);

/// Regular grid: all n^s points ((i_1-1)/(n-1), ..., (i_s-1)/(n-1)),
/// last axis varying fastest. Requires n >= 2; the budget applies.
PointSet grid_points(std::uint64_t n, int s);

/// Rank-1 lattice x_i = {i z / N} for i = 1..N, computed in integer
/// arithmetic. Each z_j must lie in [1, N-1].
PointSet rank1_lattice(std::uint64_t point_count, const std::vector<std::uint64_t>& z);

/// Korobov lattice: rank-1 lattice with z = (1, alpha, alpha^2, ...) mod N.
PointSet korobov_lattice(std::uint64_t point_count, std::uint64_t alpha, int s);

/// Maximal-rank lattice rule {i z / l + k / r}, i = 1..l, k in {0..r-1}^s,
/// N = l r^s. Requires gcd(r, l) = 1 and every z_j coprime with l.
PointSet maximal_rank_lattice(std::uint64_t base_count, std::uint64_t refinement,
                              const std::vector<std::uint64_t>& z);

/// N i.i.d.-uniform points from the deterministic generator named by
/// kRandomGeneratorId. Same seed, same bits, on any platform.
PointSet random_points(std::size_t point_count, int s, std::uint64_t seed);

/// Distinct abscissae with multiplicities along one axis. Exact sets group
/// by the rational key; float sets group sorted values whose gap to the
/// previous value is at most 1e-12 (the node is the smallest member).
ProjectionProfile projection_profile(const PointSet& ps, int axis);

namespace detail {
/// Profile plus the node index of every row, in row order.
struct ProfileWithIndex {
  ProjectionProfile profile;
  std::vector<std::uint32_t> node_index;
};
ProfileWithIndex projection_profile_with_index(const PointSet& ps, int axis);
}  // namespace detail

}  // namespace marg
