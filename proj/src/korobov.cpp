#include "marg/korobov.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "marg/errors.hpp"
#include "parallel.hpp"

namespace marg {

namespace {

// 1 + gamma * 2 pi^2 B2(c / N), tabulated over residues; B2 is symmetric
// about N/2, so reflected generators N - alpha score identically and the
// search over alpha <= N/2 is lossless.
std::vector<double> kernel_table(std::uint64_t n, double gamma) {
  const double two_pi2 = 2.0 * std::numbers::pi * std::numbers::pi;
  std::vector<double> tab(static_cast<std::size_t>(n));
  for (std::uint64_t c = 0; c < n; ++c) {
    const double x = static_cast<double>(c) / static_cast<double>(n);
    tab[static_cast<std::size_t>(c)] = 1.0 + gamma * two_pi2 * (x * x - x + 1.0 / 6.0);
  }
  return tab;
}

double merit_sum(std::uint64_t n, const std::vector<std::uint64_t>& z,
                 const std::vector<std::vector<double>>& tables) {
  const std::size_t s = z.size();
  std::vector<std::uint64_t> res(s), step(s);
  for (std::size_t j = 0; j < s; ++j) res[j] = step[j] = z[j] % n;
  double acc = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < s; ++j) prod *= tables[j][static_cast<std::size_t>(res[j])];
    acc += prod;
    for (std::size_t j = 0; j < s; ++j) {
      res[j] += step[j];
      if (res[j] >= n) res[j] -= n;
    }
  }
  return acc / static_cast<double>(n) - 1.0;
}

std::vector<std::uint64_t> korobov_generator(std::uint64_t n, std::uint64_t alpha, int s) {
  std::vector<std::uint64_t> z(static_cast<std::size_t>(s));
  std::uint64_t p = 1;
  for (int j = 0; j < s; ++j) {
    z[static_cast<std::size_t>(j)] = p;
    p = static_cast<std::uint64_t>((static_cast<unsigned __int128>(p) * alpha) % n);
  }
  return z;
}

}  // namespace

double korobov_weight(int axis) { return std::pow(0.85, axis); }

double korobov_merit(std::uint64_t point_count, const std::vector<std::uint64_t>& z) {
  if (point_count < 2) throw ArgError("korobov_merit: N must be >= 2");
  if (z.empty()) throw ArgError("korobov_merit: empty generating vector");
  std::vector<std::vector<double>> tables(z.size());
  for (std::size_t j = 0; j < z.size(); ++j)
    tables[j] = kernel_table(point_count, korobov_weight(static_cast<int>(j)));
  return merit_sum(point_count, z, tables);
}

std::uint64_t korobov_search(std::uint64_t point_count, int s, int threads) {
  if (point_count < 4) throw ArgError("korobov_search: N must be >= 4");
  if (s < 1) throw ArgError("korobov_search: dimension must be >= 1");
  if (s == 1) return 1;  // z = (1) regardless of alpha

  std::vector<std::vector<double>> tables(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j)
    tables[static_cast<std::size_t>(j)] = kernel_table(point_count, korobov_weight(j));

  // merit(alpha) == merit(N - alpha), so the lower half suffices; the
  // smallest-alpha tie-break then matches a full scan
  std::vector<std::uint64_t> candidates;
  for (std::uint64_t a = 1; a <= point_count / 2; ++a)
    if (std::gcd(a, point_count) == 1) candidates.push_back(a);

  std::vector<double> score(candidates.size());
  detail::parallel_ranges(candidates.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx)
      score[idx] = merit_sum(point_count, korobov_generator(point_count, candidates[idx], s), tables);
  });

  std::size_t best = 0;
  for (std::size_t idx = 1; idx < candidates.size(); ++idx)
    if (score[idx] < score[best]) best = idx;
  return candidates[best];
}

}  // namespace marg
