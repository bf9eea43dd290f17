#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "marg/distributions.hpp"
#include "marg/marginal.hpp"

namespace marg {

/// Errors of a fitted polynomial against a reference curve over an
/// equidistant evaluation grid on [0, 1] (endpoints included): the grid
/// maximum and the root-mean-square.
struct ErrorReport {
  int axis = 0;
  double sup_error = 0.0;
  double l2_error = 0.0;
  std::size_t grid_size = 0;
};

inline constexpr std::size_t kDefaultEvalGrid = 1001;

ErrorReport sup_error(const MarginalPoly& poly, const std::function<double(double)>& truth,
                      std::size_t grid_size = kDefaultEvalGrid);

/// Interpolation error bound C / (4 n (n-1)^n) for n equidistant nodes on
/// [0, 1] and an n-th derivative bounded by C.
double interp_error_bound(double deriv_bound, int n);

enum class Family { Korobov, Grid, Random };

/// One schedule row of a convergence study.
struct StudyRow {
  std::string kind;        // descriptor, e.g. "korobov[alpha=1799]"
  std::uint64_t point_count = 0;  // N
  int nodes = 0;                  // n: partitions (Algorithm II) or grid n (Algorithm I)
  double multiplicity = 0.0;      // m = N / n
  std::vector<ErrorReport> per_axis;
  std::vector<double> sup_error_std;  // per axis, over seeds; empty for deterministic rows
  int seeds = 1;
};

struct ConvergenceReport {
  std::vector<StudyRow> rows;        // sorted by N
  std::vector<bool> trend_ok;        // per axis: sup error non-increasing within 10% slack
  std::size_t grid_size = kDefaultEvalGrid;
};

struct StudySpec {
  ProductDistribution dist;
  Family family = Family::Korobov;
  /// Point counts N for Korobov/Random, points-per-axis n for Grid.
  std::vector<std::uint64_t> schedule;
  int partitions = 8;  // Algorithm II bins (Korobov/Random families)
  int seeds = 20;            // Random family: runs averaged per row
  std::uint64_t base_seed = 1;
  std::size_t grid_size = kDefaultEvalGrid;
  int threads = 0;
};

/// Runs Algorithm I (grids) or II (lattices, random sets) per schedule row
/// and measures every axis against the closed-form marginal. Rows are
/// reported in increasing N. Random rows average over `seeds` runs and carry
/// the per-axis sample standard deviation of the sup error.
ConvergenceReport convergence_study(const StudySpec& spec);

/// Same distribution approximated with a Korobov lattice (Algorithm II)
/// and a grid (Algorithm I) at comparable point counts.
struct ComparisonReport {
  StudyRow lattice;
  StudyRow grid;
  std::vector<bool> lattice_better;  // per axis: lattice sup error strictly smaller
  std::size_t grid_size = kDefaultEvalGrid;
};

ComparisonReport compare_grid_vs_lattice(const ProductDistribution& dist,
                                         std::uint64_t lattice_count, int partitions,
                                         std::uint64_t grid_n,
                                         std::size_t grid_size = kDefaultEvalGrid,
                                         int threads = 0);

}  // namespace marg
