#include "marg/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "marg/korobov.hpp"

namespace marg {

namespace {

std::vector<ErrorReport> measure_axes(const std::vector<MarginalPoly>& polys,
                                      const ProductDistribution& dist, std::size_t grid_size) {
  std::vector<ErrorReport> out;
  out.reserve(polys.size());
  for (std::size_t j = 0; j < polys.size(); ++j)
    out.push_back(sup_error(polys[j], true_marginal(dist, static_cast<int>(j)), grid_size));
  return out;
}

StudyRow run_lattice_row(const ProductDistribution& dist, std::uint64_t n_points, int partitions,
                         std::size_t grid_size, int threads) {
  const int s = dist.dim();
  const std::uint64_t alpha = korobov_search(n_points, s, threads);
  PointSet ps = korobov_lattice(n_points, alpha, s);
  EvaluatedSet es = evaluate(joint_density(dist), std::move(ps), threads);
  const auto polys = algorithm_II(es, partitions);

  StudyRow row;
  row.kind = "korobov[alpha=" + std::to_string(alpha) + "]";
  row.point_count = n_points;
  row.nodes = partitions;
  row.multiplicity = static_cast<double>(n_points) / partitions;
  row.per_axis = measure_axes(polys, dist, grid_size);
  return row;
}

StudyRow run_grid_row(const ProductDistribution& dist, std::uint64_t grid_n,
                      std::size_t grid_size, int threads) {
  const int s = dist.dim();
  PointSet ps = grid_points(grid_n, s);
  const std::uint64_t n_points = ps.count;
  EvaluatedSet es = evaluate(joint_density(dist), std::move(ps), threads);

  std::vector<MarginalPoly> polys;
  if (s == 1) {
    // a one-dimensional grid is fully projection regular; the point-wise
    // means are the raw values, so fit the interpolant directly
    Projection p = project(es, 0);
    polys.push_back(fit_ls_poly(p));
  } else {
    polys = algorithm_I(es);
  }

  StudyRow row;
  row.kind = "grid[n=" + std::to_string(grid_n) + "]";
  row.point_count = n_points;
  row.nodes = static_cast<int>(grid_n);
  row.multiplicity = static_cast<double>(n_points) / static_cast<double>(grid_n);
  row.per_axis = measure_axes(polys, dist, grid_size);
  return row;
}

StudyRow run_random_row(const ProductDistribution& dist, std::uint64_t n_points, int partitions,
                        int seeds, std::uint64_t base_seed, std::size_t grid_size, int threads) {
  const int s = dist.dim();
  const RealFunction f = joint_density(dist);

  std::vector<std::vector<double>> sup_samples(static_cast<std::size_t>(s));
  std::vector<std::vector<double>> l2_samples(static_cast<std::size_t>(s));
  for (int run = 0; run < seeds; ++run) {
    PointSet ps = random_points(static_cast<std::size_t>(n_points), s, base_seed + static_cast<std::uint64_t>(run));
    EvaluatedSet es = evaluate(f, std::move(ps), threads);
    const auto polys = algorithm_II(es, partitions);
    const auto reports = measure_axes(polys, dist, grid_size);
    for (int j = 0; j < s; ++j) {
      sup_samples[static_cast<std::size_t>(j)].push_back(reports[static_cast<std::size_t>(j)].sup_error);
      l2_samples[static_cast<std::size_t>(j)].push_back(reports[static_cast<std::size_t>(j)].l2_error);
    }
  }

  StudyRow row;
  row.kind = "random[seeds=" + std::to_string(seeds) + "]";
  row.point_count = n_points;
  row.nodes = partitions;
  row.multiplicity = static_cast<double>(n_points) / partitions;
  row.seeds = seeds;
  for (int j = 0; j < s; ++j) {
    const auto& sup = sup_samples[static_cast<std::size_t>(j)];
    const auto& l2 = l2_samples[static_cast<std::size_t>(j)];
    ErrorReport r;
    r.axis = j;
    r.grid_size = grid_size;
    for (double v : sup) r.sup_error += v;
    for (double v : l2) r.l2_error += v;
    r.sup_error /= seeds;
    r.l2_error /= seeds;
    double var = 0.0;
    for (double v : sup) var += (v - r.sup_error) * (v - r.sup_error);
    row.sup_error_std.push_back(seeds > 1 ? std::sqrt(var / (seeds - 1)) : 0.0);
    row.per_axis.push_back(r);
  }
  return row;
}

}  // namespace

ErrorReport sup_error(const MarginalPoly& poly, const std::function<double(double)>& truth,
                      std::size_t grid_size) {
  if (grid_size < 2) throw ArgError("sup_error: grid size must be >= 2");
  if (!truth) throw ArgError("sup_error: empty reference function");
  ErrorReport r;
  r.axis = poly.axis;
  r.grid_size = grid_size;
  double sq_sum = 0.0;
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double x = static_cast<double>(g) / static_cast<double>(grid_size - 1);
    const double diff = std::abs(eval_poly(poly, x) - truth(x));
    r.sup_error = std::max(r.sup_error, diff);
    sq_sum += diff * diff;
  }
  r.l2_error = std::sqrt(sq_sum / static_cast<double>(grid_size));
  return r;
}

double interp_error_bound(double deriv_bound, int n) {
  if (n < 2) throw ArgError("interp_error_bound: need n >= 2 nodes");
  if (deriv_bound < 0.0) throw ArgError("interp_error_bound: derivative bound must be >= 0");
  return deriv_bound / (4.0 * n * std::pow(static_cast<double>(n - 1), n));
}

ConvergenceReport convergence_study(const StudySpec& spec) {
  validate(spec.dist);
  if (spec.schedule.empty()) throw ArgError("convergence_study: empty schedule");
  if (spec.partitions < 1) throw ArgError("convergence_study: partitions must be >= 1");
  if (spec.family == Family::Random && spec.seeds < 1)
    throw ArgError("convergence_study: need at least one seed");

  std::vector<std::uint64_t> schedule = spec.schedule;
  std::sort(schedule.begin(), schedule.end());

  ConvergenceReport report;
  report.grid_size = spec.grid_size;
  for (std::uint64_t entry : schedule) {
    switch (spec.family) {
      case Family::Korobov:
        report.rows.push_back(run_lattice_row(spec.dist, entry, spec.partitions, spec.grid_size,
                                              spec.threads));
        break;
      case Family::Grid:
        report.rows.push_back(run_grid_row(spec.dist, entry, spec.grid_size, spec.threads));
        break;
      case Family::Random:
        report.rows.push_back(run_random_row(spec.dist, entry, spec.partitions, spec.seeds,
                                             spec.base_seed, spec.grid_size, spec.threads));
        break;
    }
  }

  const int s = spec.dist.dim();
  report.trend_ok.assign(static_cast<std::size_t>(s), true);
  for (int j = 0; j < s; ++j) {
    for (std::size_t r = 1; r < report.rows.size(); ++r) {
      const double prev = report.rows[r - 1].per_axis[static_cast<std::size_t>(j)].sup_error;
      const double cur = report.rows[r].per_axis[static_cast<std::size_t>(j)].sup_error;
      if (cur > 1.1 * prev) report.trend_ok[static_cast<std::size_t>(j)] = false;
    }
  }
  return report;
}

ComparisonReport compare_grid_vs_lattice(const ProductDistribution& dist,
                                         std::uint64_t lattice_count, int partitions,
                                         std::uint64_t grid_n, std::size_t grid_size,
                                         int threads) {
  validate(dist);
  ComparisonReport cmp;
  cmp.grid_size = grid_size;
  cmp.lattice = run_lattice_row(dist, lattice_count, partitions, grid_size, threads);
  cmp.grid = run_grid_row(dist, grid_n, grid_size, threads);
  for (int j = 0; j < dist.dim(); ++j) {
    cmp.lattice_better.push_back(cmp.lattice.per_axis[static_cast<std::size_t>(j)].sup_error <
                                 cmp.grid.per_axis[static_cast<std::size_t>(j)].sup_error);
  }
  return cmp;
}

}  // namespace marg
