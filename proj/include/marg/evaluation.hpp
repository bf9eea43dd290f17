#pragma once

#include <functional>
#include <span>
#include <vector>

#include "marg/pointset.hpp"

namespace marg {

/// s-dimensional real function on the unit cube. Must be pure and safe for
/// concurrent invocation.
using RealFunction = std::function<double(std::span<const double>)>;

/// A point set together with the cached function values f(x_i); the
/// coordinate columns plus the value column form the N x (s+1) sample matrix.
struct EvaluatedSet {
  PointSet points;
  std::vector<double> values;
};

/// All N projected pairs (x_{i,axis}, f(x_i)) in row order, plus the axis
/// profile and the node index of every row.
struct Projection {
  int axis = 0;
  std::vector<double> abscissae;
  std::vector<double> values;
  ProjectionProfile profile;
  std::vector<std::uint32_t> node_index;  // row -> profile node
};

/// Evaluates f on every point, fanning out over `threads` workers
/// (0 = all hardware threads). The result is identical for any worker
/// count. A non-finite value raises EvalError naming the smallest
/// offending row index.
EvaluatedSet evaluate(const RealFunction& f, PointSet ps, int threads = 0);

/// Orthogonal projection of the evaluations onto one axis.
Projection project(const EvaluatedSet& es, int axis);

/// Wraps f defined on the box [lo, hi] as a function of the unit cube:
/// g(u) = f(lo + u * (hi - lo)). No Jacobian factor is applied, so g carries
/// the original function's scale, not a transformed density's.
RealFunction transform_domain(RealFunction f, std::vector<double> lo, std::vector<double> hi);

}  // namespace marg
