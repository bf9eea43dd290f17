// Command-line front end: generate point sets, fit per-axis marginal
// polynomials on configured product distributions, and emit CSV/JSON plot
// data for convergence and grid-versus-lattice studies.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "marg/analysis.hpp"
#include "marg/io.hpp"
#include "marg/korobov.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitStrict = 4;

struct PointFlags {
  std::uint64_t grid_n = 0;
  std::uint64_t korobov_n = 0;
  std::uint64_t alpha = 0;
  bool auto_alpha = false;
  std::vector<std::uint64_t> maximal;  // l r
  std::uint64_t random_n = 0;
  std::vector<std::uint64_t> gen;      // maximal-rank generating vector
  int dims = 0;
  std::uint64_t seed = 1;
};

void add_point_flags(CLI::App* cmd, PointFlags& pf) {
  cmd->add_option("--grid", pf.grid_n, "regular grid with n points per axis");
  cmd->add_option("--korobov", pf.korobov_n, "Korobov lattice with N points");
  cmd->add_option("--alpha", pf.alpha, "Korobov generator alpha");
  cmd->add_flag("--auto-alpha", pf.auto_alpha, "search for the best Korobov alpha");
  cmd->add_option("--maximal", pf.maximal, "maximal-rank lattice: l r")->expected(2);
  cmd->add_option("--random", pf.random_n, "N pseudo-random points");
  cmd->add_option("--gen", pf.gen, "generating vector for --maximal (default all ones)");
  cmd->add_option("--dims", pf.dims, "dimension s");
  cmd->add_option("--seed", pf.seed, "seed for --random");
}

marg::PointSet build_point_set(const PointFlags& pf, int threads) {
  const int kinds = (pf.grid_n > 0) + (pf.korobov_n > 0) + (!pf.maximal.empty()) + (pf.random_n > 0);
  if (kinds != 1)
    throw marg::ArgError("pick exactly one of --grid, --korobov, --maximal, --random");
  if (pf.dims < 1 && pf.gen.empty()) throw marg::ArgError("--dims is required");

  if (pf.grid_n > 0) return marg::grid_points(pf.grid_n, pf.dims);
  if (pf.korobov_n > 0) {
    std::uint64_t alpha = pf.alpha;
    if (pf.auto_alpha) {
      if (alpha != 0) throw marg::ArgError("give either --alpha or --auto-alpha, not both");
      alpha = marg::korobov_search(pf.korobov_n, pf.dims, threads);
      std::cout << "auto-alpha: " << alpha << "\n";
    }
    if (alpha == 0) throw marg::ArgError("--korobov needs --alpha or --auto-alpha");
    return marg::korobov_lattice(pf.korobov_n, alpha, pf.dims);
  }
  if (!pf.maximal.empty()) {
    std::vector<std::uint64_t> z = pf.gen;
    if (z.empty()) {
      if (pf.dims < 1) throw marg::ArgError("--maximal needs --dims or --gen");
      z.assign(static_cast<std::size_t>(pf.dims), 1);
    } else if (pf.dims > 0 && static_cast<int>(z.size()) != pf.dims) {
      throw marg::ArgError("--gen length must match --dims");
    }
    return marg::maximal_rank_lattice(pf.maximal[0], pf.maximal[1], z);
  }
  return marg::random_points(static_cast<std::size_t>(pf.random_n), pf.dims, pf.seed);
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw marg::ArgError("cannot open output file '" + path.string() + "'");
  writer(os);
}

std::string multiplicity_label(const marg::ProjectionProfile& profile) {
  const auto [lo, hi] = std::minmax_element(profile.multiplicities.begin(), profile.multiplicities.end());
  if (*lo == *hi) return std::to_string(*lo);
  return std::to_string(*lo) + ".." + std::to_string(*hi);
}

void print_profiles(const marg::PointSet& ps) {
  for (int j = 0; j < ps.dim; ++j) {
    const marg::ProjectionProfile profile = marg::projection_profile(ps, j);
    std::cout << "axis " << j << ": n=" << profile.node_count()
              << " m=" << multiplicity_label(profile)
              << " fully_projection_regular=" << (profile.fully_projection_regular ? "yes" : "no")
              << "\n";
  }
}

int cmd_points(const PointFlags& pf, const std::string& out, int threads) {
  const marg::PointSet ps = build_point_set(pf, threads);
  const fs::path dir = prepare_out_dir(out);
  write_file(dir / "points.csv", [&](std::ostream& os) { marg::write_pointset_csv(os, ps); });
  if (ps.has_rational())
    write_file(dir / "points_rational.csv",
               [&](std::ostream& os) { marg::write_rational_sidecar(os, ps); });
  print_profiles(ps);
  std::cout << "wrote " << (dir / "points.csv").string() << "\n";
  return kExitOk;
}

int cmd_approx(const PointFlags& pf, const std::string& dist_path, const std::string& algorithm,
               int partitions, std::size_t eval_grid, const std::string& out, int threads) {
  const marg::ProductDistribution dist = marg::load_distribution_config(dist_path);
  PointFlags flags = pf;
  if (flags.dims == 0) flags.dims = dist.dim();
  if (flags.dims != dist.dim())
    throw marg::ArgError("--dims does not match the distribution dimension " +
                         std::to_string(dist.dim()));

  marg::PointSet ps = build_point_set(flags, threads);
  marg::EvaluatedSet es = marg::evaluate(marg::joint_density(dist), std::move(ps), threads);

  std::string chosen = algorithm;
  if (chosen == "auto") {
    chosen = "I";
    for (int j = 0; j < es.points.dim; ++j)
      if (marg::projection_profile(es.points, j).fully_projection_regular) chosen = "II";
  }
  std::vector<marg::MarginalPoly> polys;
  if (chosen == "I") {
    polys = marg::algorithm_I(es);
  } else if (chosen == "II") {
    polys = marg::algorithm_II(es, partitions);
  } else {
    throw marg::ArgError("--algorithm must be auto, I or II");
  }

  const fs::path dir = prepare_out_dir(out);
  for (int j = 0; j < dist.dim(); ++j) {
    const marg::MarginalPoly& poly = polys[static_cast<std::size_t>(j)];
    const auto truth = marg::true_marginal(dist, j);
    write_file(dir / ("marginal_axis" + std::to_string(j) + ".json"), [&](std::ostream& os) {
      os << marg::poly_to_json(poly).dump(2) << '\n';
    });
    write_file(dir / ("marginal_axis" + std::to_string(j) + ".csv"), [&](std::ostream& os) {
      marg::write_poly_csv(os, poly, &truth, eval_grid);
    });
    const marg::ErrorReport err = marg::sup_error(poly, truth, eval_grid);
    std::cout << "axis " << j << ": algorithm " << chosen << ", degree " << poly.degree()
              << ", sup_error=" << marg::fmt_g17(err.sup_error)
              << ", l2_error=" << marg::fmt_g17(err.l2_error) << "\n";
  }
  std::cout << "wrote per-axis JSON/CSV under " << dir.string() << "\n";
  return kExitOk;
}

int cmd_converge(const std::string& dist_path, const std::string& family_name,
                 const std::vector<std::uint64_t>& schedule, int partitions, int seeds,
                 std::uint64_t seed, std::size_t eval_grid, const std::string& out, bool strict,
                 int threads) {
  marg::StudySpec spec;
  spec.dist = marg::load_distribution_config(dist_path);
  if (family_name == "korobov") spec.family = marg::Family::Korobov;
  else if (family_name == "grid") spec.family = marg::Family::Grid;
  else if (family_name == "random") spec.family = marg::Family::Random;
  else throw marg::ArgError("--family must be korobov, grid or random");
  spec.schedule = schedule;
  spec.partitions = partitions;
  spec.seeds = seeds;
  spec.base_seed = seed;
  spec.grid_size = eval_grid;
  spec.threads = threads;

  const marg::ConvergenceReport report = marg::convergence_study(spec);
  const fs::path dir = prepare_out_dir(out);
  write_file(dir / "convergence.csv", [&](std::ostream& os) { marg::write_report_csv(os, report); });
  write_file(dir / "convergence.json",
             [&](std::ostream& os) { os << marg::report_to_json(report).dump(2) << '\n'; });
  marg::write_report_csv(std::cout, report);

  bool all_ok = true;
  for (std::size_t j = 0; j < report.trend_ok.size(); ++j) {
    if (!report.trend_ok[j]) all_ok = false;
    std::cout << "trend axis " << j << ": " << (report.trend_ok[j] ? "ok" : "violated") << "\n";
  }
  std::cout << "wrote " << (dir / "convergence.csv").string() << "\n";
  return strict && !all_ok ? kExitStrict : kExitOk;
}

int cmd_compare(const std::string& dist_path, std::uint64_t korobov_n, int partitions,
                std::uint64_t grid_n, std::size_t eval_grid, const std::string& out, bool strict,
                int threads) {
  const marg::ProductDistribution dist = marg::load_distribution_config(dist_path);
  const marg::ComparisonReport report = marg::compare_grid_vs_lattice(
      dist, korobov_n, partitions, grid_n, eval_grid, threads);

  const fs::path dir = prepare_out_dir(out);
  write_file(dir / "compare.csv", [&](std::ostream& os) { marg::write_comparison_csv(os, report); });
  write_file(dir / "compare.json",
             [&](std::ostream& os) { os << marg::comparison_to_json(report).dump(2) << '\n'; });
  marg::write_comparison_csv(std::cout, report);

  bool all_better = true;
  for (std::size_t j = 0; j < report.lattice_better.size(); ++j) {
    if (!report.lattice_better[j]) all_better = false;
    std::cout << "axis " << j << ": lattice "
              << (report.lattice_better[j] ? "beats" : "does not beat") << " grid\n";
  }
  std::cout << "wrote " << (dir / "compare.csv").string() << "\n";
  return strict && !all_better ? kExitStrict : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"marginal-shape approximation from structured point sets"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  int threads = 0;
  app.add_option("--threads", threads, "worker cap (0 = all hardware threads)");

  PointFlags pf;
  std::string out = "marg_out";
  std::string dist_path;
  std::string algorithm = "auto";
  int partitions = 8;
  std::size_t eval_grid = marg::kDefaultEvalGrid;
  std::string family_name = "korobov";
  std::vector<std::uint64_t> schedule;
  int seeds = 20;
  bool strict = false;
  std::uint64_t korobov_n = 0, grid_n = 0;

  CLI::App* points = app.add_subcommand("points", "generate a point set and its axis profiles");
  add_point_flags(points, pf);
  points->add_option("--out", out, "output directory");

  CLI::App* approx = app.add_subcommand("approx", "fit per-axis marginal polynomials");
  add_point_flags(approx, pf);
  approx->add_option("--dist", dist_path, "distribution config file")->required();
  approx->add_option("--algorithm", algorithm, "auto, I or II");
  approx->add_option("--partitions", partitions, "Algorithm II bin count");
  approx->add_option("--eval-grid", eval_grid, "evaluation grid size");
  approx->add_option("--out", out, "output directory");

  CLI::App* converge = app.add_subcommand("converge", "run a convergence study");
  converge->add_option("--dist", dist_path, "distribution config file")->required();
  converge->add_option("--family", family_name, "korobov, grid or random");
  converge->add_option("--schedule", schedule, "N per row (grid: n per axis)")->required();
  converge->add_option("--partitions", partitions, "Algorithm II bin count");
  converge->add_option("--seeds", seeds, "random family: seeds per row");
  converge->add_option("--seed", pf.seed, "random family: base seed");
  converge->add_option("--eval-grid", eval_grid, "evaluation grid size");
  converge->add_option("--out", out, "output directory");
  converge->add_flag("--strict", strict, "exit 4 on trend violations");

  CLI::App* compare = app.add_subcommand("compare", "grid versus lattice at comparable N");
  compare->add_option("--dist", dist_path, "distribution config file")->required();
  compare->add_option("--korobov", korobov_n, "lattice point count")->required();
  compare->add_option("--partitions", partitions, "Algorithm II bin count");
  compare->add_option("--grid", grid_n, "grid points per axis")->required();
  compare->add_option("--eval-grid", eval_grid, "evaluation grid size");
  compare->add_option("--out", out, "output directory");
  compare->add_flag("--strict", strict, "exit 4 when the lattice loses on any axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (points->parsed()) return cmd_points(pf, out, threads);
    if (approx->parsed())
      return cmd_approx(pf, dist_path, algorithm, partitions, eval_grid, out, threads);
    if (converge->parsed())
      return cmd_converge(dist_path, family_name, schedule, partitions, seeds, pf.seed, eval_grid,
                          out, strict, threads);
    if (compare->parsed())
      return cmd_compare(dist_path, korobov_n, partitions, grid_n, eval_grid, out, strict,
                         threads);
  } catch (const marg::ArgError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const marg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
