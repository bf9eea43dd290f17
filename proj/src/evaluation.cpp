#include "marg/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <utility>

#include "parallel.hpp"

namespace marg {

EvaluatedSet evaluate(const RealFunction& f, PointSet ps, int threads) {
  if (!f) throw ArgError("evaluate: function is empty");
  const std::size_t n = ps.count;
  const std::size_t s = static_cast<std::size_t>(ps.dim);

  EvaluatedSet es;
  es.values.resize(n);
  const double* coords = ps.coords.data();
  double* out = es.values.data();

  constexpr std::size_t kNoBadRow = std::numeric_limits<std::size_t>::max();
  const int workers = detail::resolve_threads(threads);
  std::vector<std::size_t> first_bad(static_cast<std::size_t>(workers), kNoBadRow);

  std::atomic<int> next_worker{0};
  detail::parallel_ranges(n, threads, [&](std::size_t begin, std::size_t end) {
    const int w = next_worker.fetch_add(1);
    for (std::size_t i = begin; i < end; ++i) {
      const double v = f(std::span<const double>(coords + i * s, s));
      out[i] = v;
      if (!std::isfinite(v) && first_bad[static_cast<std::size_t>(w)] == kNoBadRow)
        first_bad[static_cast<std::size_t>(w)] = i;
    }
  });

  std::size_t bad = kNoBadRow;
  for (std::size_t b : first_bad) bad = std::min(bad, b);
  if (bad != kNoBadRow)
    throw EvalError("evaluate: f returned a non-finite value at point index " + std::to_string(bad));

  es.points = std::move(ps);
  return es;
}

Projection project(const EvaluatedSet& es, int axis) {
  const PointSet& ps = es.points;
  if (axis < 0 || axis >= ps.dim)
    throw ArgError("project: axis " + std::to_string(axis) + " outside [0, " +
                   std::to_string(ps.dim) + ")");
  auto pwi = detail::projection_profile_with_index(ps, axis);

  Projection p;
  p.axis = axis;
  p.profile = std::move(pwi.profile);
  p.node_index = std::move(pwi.node_index);
  p.values = es.values;
  p.abscissae.resize(ps.count);
  const std::size_t s = static_cast<std::size_t>(ps.dim);
  for (std::size_t i = 0; i < ps.count; ++i)
    p.abscissae[i] = ps.coords[i * s + static_cast<std::size_t>(axis)];
  return p;
}

RealFunction transform_domain(RealFunction f, std::vector<double> lo, std::vector<double> hi) {
  if (!f) throw ArgError("transform_domain: function is empty");
  if (lo.size() != hi.size() || lo.empty())
    throw ArgError("transform_domain: bound vectors must be nonempty and of equal length");
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (!(lo[j] < hi[j]))
      throw ArgError("transform_domain: need lo < hi on axis " + std::to_string(j));
  }
  std::vector<double> span(lo.size());
  for (std::size_t j = 0; j < lo.size(); ++j) span[j] = hi[j] - lo[j];

  return [f = std::move(f), lo = std::move(lo), span = std::move(span)](
             std::span<const double> u) -> double {
    std::vector<double> x(lo.size());
    for (std::size_t j = 0; j < lo.size(); ++j) x[j] = lo[j] + u[j] * span[j];
    return f(std::span<const double>(x.data(), x.size()));
  };
}

}  // namespace marg
