#include "marg/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace marg {

namespace {

// Barycentric weights w_k = 1 / prod_{j != k} (z_k - z_j), computed with the
// differences rescaled by 4/span so moderate node counts stay in range. The
// common factor cancels in the second barycentric form. If a weight still
// overflows, recompute in log space.
std::vector<double> barycentric_weights(const std::vector<double>& z) {
  const std::size_t n = z.size();
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  const double scale = 4.0 / (z.back() - z.front());
  bool ok = true;
  for (std::size_t k = 0; k < n; ++k) {
    double prod = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      prod *= (z[k] - z[j]) * scale;
    }
    w[k] = 1.0 / prod;
    if (!std::isfinite(w[k])) ok = false;
  }
  if (ok) return w;

  std::vector<double> logmag(n, 0.0);
  std::vector<int> sign(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    double lm = 0.0;
    int sg = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const double d = z[k] - z[j];
      lm += std::log(std::abs(d));
      if (d < 0) sg = -sg;
    }
    logmag[k] = -lm;
    sign[k] = sg;
  }
  const double top = *std::max_element(logmag.begin(), logmag.end());
  for (std::size_t k = 0; k < n; ++k) w[k] = sign[k] * std::exp(logmag[k] - top);
  return w;
}

void check_strictly_increasing(const std::vector<double>& z, const char* what) {
  for (std::size_t k = 1; k < z.size(); ++k)
    if (!(z[k] > z[k - 1])) throw ArgError(std::string(what) + " must be strictly increasing");
}

// Newton divided differences expanded to monomial coefficients in t = 2x - 1.
std::vector<double> monomial_image(const std::vector<double>& nodes,
                                   const std::vector<double>& values) {
  const std::size_t n = nodes.size();
  std::vector<double> t(n), dd(values);
  for (std::size_t k = 0; k < n; ++k) t[k] = 2.0 * nodes[k] - 1.0;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (t[i] - t[i - j]);

  std::vector<double> coef(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    // coef := coef * (t - t_i) + dd_i
    for (std::size_t p = n - 1; p >= 1; --p) coef[p] = coef[p - 1] - t[i] * coef[p];
    coef[0] = dd[i] - t[i] * coef[0];
  }
  return coef;
}

MeanProfile means_from_projection(const Projection& p) {
  MeanProfile mp;
  mp.axis = p.axis;
  mp.mode = MeanMode::PointwiseMean;
  mp.nodes = p.profile.nodes;
  mp.counts = p.profile.multiplicities;
  const std::size_t n = mp.nodes.size();
  std::vector<double> sums(n, 0.0);
  for (std::size_t i = 0; i < p.values.size(); ++i) sums[p.node_index[i]] += p.values[i];
  mp.means.resize(n);
  for (std::size_t k = 0; k < n; ++k) mp.means[k] = sums[k] / static_cast<double>(mp.counts[k]);
  return mp;
}

long double horner_ld(const std::vector<long double>& c, long double t) {
  long double v = 0.0L;
  for (std::size_t p = c.size(); p-- > 0;) v = v * t + c[p];
  return v;
}

// Gaussian elimination with partial pivoting, in long double.
std::vector<long double> solve_dense_ld(std::vector<std::vector<long double>> a,
                                        std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs((double)a[r][col]) > std::abs((double)a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    if (a[col][col] == 0.0L) throw ArgError("normal equations are singular");
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double factor = a[r][col] / a[col][col];
      if (factor == 0.0L) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<long double> x(n, 0.0L);
  for (std::size_t r = n; r-- > 0;) {
    long double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

// Normal equations of a (possibly node-weighted) polynomial least-squares
// fit over all rows, in t = 2x - 1, accumulated and solved in extended
// precision. node_weights may be null for unit weights.
std::vector<long double> solve_normal_equations(const Projection& p, std::size_t n_coef,
                                                const std::vector<double>* node_weights) {
  std::vector<long double> pow_sums(2 * n_coef - 1, 0.0L), rhs(n_coef, 0.0L);
  for (std::size_t i = 0; i < p.abscissae.size(); ++i) {
    const long double wi = node_weights ? (*node_weights)[p.node_index[i]] : 1.0L;
    const long double t = 2.0L * static_cast<long double>(p.abscissae[i]) - 1.0L;
    const long double fi = p.values[i];
    long double tp = 1.0L;
    for (std::size_t q = 0; q < 2 * n_coef - 1; ++q) {
      pow_sums[q] += wi * tp;
      if (q < n_coef) rhs[q] += wi * fi * tp;
      tp *= t;
    }
  }
  std::vector<std::vector<long double>> a(n_coef, std::vector<long double>(n_coef));
  for (std::size_t r = 0; r < n_coef; ++r)
    for (std::size_t c = 0; c < n_coef; ++c) a[r][c] = pow_sums[r + c];
  return solve_dense_ld(std::move(a), std::move(rhs));
}

}  // namespace

MarginalPoly make_interpolant(std::vector<double> nodes, std::vector<double> values) {
  if (nodes.empty() || nodes.size() != values.size())
    throw ArgError("make_interpolant: need equally many nodes and values, at least one");
  check_strictly_increasing(nodes, "interpolation nodes");
  MarginalPoly poly;
  poly.bary_weights = barycentric_weights(nodes);
  if (nodes.size() <= 20) poly.monomial = monomial_image(nodes, values);
  poly.nodes = std::move(nodes);
  poly.node_values = std::move(values);
  return poly;
}

MeanProfile pointwise_means(const Projection& p) { return means_from_projection(p); }

std::vector<double> equidistant_breakpoints(int n) {
  if (n < 1) throw ArgError("partition count must be >= 1");
  std::vector<double> b(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) b[static_cast<std::size_t>(k)] = static_cast<double>(k) / n;
  return b;
}

MeanProfile partition_means(const Projection& p, std::span<const double> breakpoints) {
  if (breakpoints.size() < 2) throw ArgError("partition_means: need at least 2 breakpoints");
  for (std::size_t k = 1; k < breakpoints.size(); ++k)
    if (!(breakpoints[k] > breakpoints[k - 1]))
      throw ArgError("partition_means: breakpoints must be strictly increasing");
  if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
    throw ArgError("partition_means: breakpoints must span [0, 1]");

  const std::size_t n = breakpoints.size() - 1;
  std::vector<double> sums(n, 0.0);
  std::vector<std::size_t> counts(n, 0);
  for (std::size_t i = 0; i < p.abscissae.size(); ++i) {
    const double x = p.abscissae[i];
    // bin k: [z_k, z_{k+1}); the last bin also takes x == 1
    std::size_t k = static_cast<std::size_t>(
        std::upper_bound(breakpoints.begin() + 1, breakpoints.end(), x) - (breakpoints.begin() + 1));
    if (k >= n) k = n - 1;
    sums[k] += p.values[i];
    counts[k]++;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (counts[k] == 0) {
      std::ostringstream os;
      os << "partition bin " << k << " [" << breakpoints[k] << ", " << breakpoints[k + 1]
         << ") is empty; use fewer partitions";
      throw EmptyBinError(os.str());
    }
  }

  MeanProfile mp;
  mp.axis = p.axis;
  mp.mode = MeanMode::PartitionMean;
  mp.breakpoints.assign(breakpoints.begin(), breakpoints.end());
  mp.nodes.assign(breakpoints.begin(), breakpoints.end() - 1);
  mp.counts = std::move(counts);
  mp.means.resize(n);
  for (std::size_t k = 0; k < n; ++k) mp.means[k] = sums[k] / static_cast<double>(mp.counts[k]);
  return mp;
}

MarginalPoly fit_ls_poly(const Projection& p) {
  const MeanProfile mp = pointwise_means(p);
  MarginalPoly poly = make_interpolant(mp.nodes, mp.means);
  poly.axis = p.axis;
  poly.mode = PolyMode::PointwiseMean;
  return poly;
}

MarginalPoly fit_wls_poly(const Projection& p, const Weights& w) {
  const std::size_t n = p.profile.nodes.size();
  if (w.w.size() != n)
    throw ArgError("fit_wls_poly: need one weight per node (" + std::to_string(n) + ")");
  for (double wk : w.w)
    if (!(wk > 0.0) || !std::isfinite(wk)) throw ArgError("fit_wls_poly: weights must be positive and finite");

  // explicit weighted normal equations (M^T W M) c = M^T W f over all N rows
  const std::vector<long double> coef = solve_normal_equations(p, n, &w.w);
  std::vector<double> node_values(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long double t = 2.0L * static_cast<long double>(p.profile.nodes[k]) - 1.0L;
    node_values[k] = static_cast<double>(horner_ld(coef, t));
  }
  MarginalPoly poly = make_interpolant(p.profile.nodes, std::move(node_values));
  poly.axis = p.axis;
  poly.mode = PolyMode::PointwiseMean;
  return poly;
}

MarginalPoly fit_projection_ls(const Projection& p, int degree) {
  if (degree < 0) throw ArgError("fit_projection_ls: degree must be >= 0");
  if (degree > 23)
    throw ArgError("fit_projection_ls: degree " + std::to_string(degree) +
                   " exceeds the conditioning cap of 23");
  const std::size_t n = static_cast<std::size_t>(degree) + 1;
  if (p.abscissae.size() < n)
    throw ArgError("fit_projection_ls: need at least degree+1 points");
  const std::vector<long double> coef = solve_normal_equations(p, n, nullptr);

  // represent through its values at n interior equidistant abscissae
  std::vector<double> nodes(n), node_values(n);
  for (std::size_t k = 0; k < n; ++k) {
    nodes[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    node_values[k] = static_cast<double>(horner_ld(coef, 2.0L * static_cast<long double>(nodes[k]) - 1.0L));
  }
  MarginalPoly poly = make_interpolant(std::move(nodes), std::move(node_values));
  poly.axis = p.axis;
  poly.mode = PolyMode::ProjectionLs;
  return poly;
}

MarginalPoly fit_partition_poly(const Projection& p, std::span<const double> breakpoints,
                                PartitionNodeRule node_rule) {
  const MeanProfile mp = partition_means(p, breakpoints);
  const std::size_t n = mp.means.size();
  std::vector<double> nodes(n);
  for (std::size_t k = 0; k < n; ++k) {
    nodes[k] = node_rule == PartitionNodeRule::LeftBreakpoint
                   ? mp.breakpoints[k]
                   : 0.5 * (mp.breakpoints[k] + mp.breakpoints[k + 1]);
  }
  MarginalPoly poly = make_interpolant(std::move(nodes), mp.means);
  poly.axis = p.axis;
  poly.mode = PolyMode::PartitionMean;
  poly.breakpoints = mp.breakpoints;
  return poly;
}

std::vector<MarginalPoly> algorithm_I(const EvaluatedSet& es) {
  std::vector<MarginalPoly> polys;
  polys.reserve(static_cast<std::size_t>(es.points.dim));
  for (int axis = 0; axis < es.points.dim; ++axis) {
    Projection p = project(es, axis);
    if (p.profile.fully_projection_regular)
      throw ArgError("algorithm_I: axis " + std::to_string(axis) +
                     " is fully projection regular (every abscissa distinct); use algorithm_II");
    polys.push_back(fit_ls_poly(p));
  }
  return polys;
}

std::vector<MarginalPoly> algorithm_II(const EvaluatedSet& es, int n_partitions) {
  const std::vector<double> breaks = equidistant_breakpoints(n_partitions);
  std::vector<MarginalPoly> polys;
  polys.reserve(static_cast<std::size_t>(es.points.dim));
  for (int axis = 0; axis < es.points.dim; ++axis) {
    Projection p = project(es, axis);
    partition_means(p, breaks);  // enforces that every equal-width bin is occupied
    MarginalPoly poly = fit_projection_ls(p, n_partitions - 1);
    poly.breakpoints = breaks;
    polys.push_back(std::move(poly));
  }
  return polys;
}

double eval_poly(const MarginalPoly& poly, double x) {
  const std::size_t n = poly.nodes.size();
  if (n == 0) throw ArgError("eval_poly: empty polynomial");
  if (n == 1) return poly.node_values[0];

  // exact node hit
  const auto it = std::lower_bound(poly.nodes.begin(), poly.nodes.end(), x);
  if (it != poly.nodes.end() && *it == x)
    return poly.node_values[static_cast<std::size_t>(it - poly.nodes.begin())];

  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double q = poly.bary_weights[k] / (x - poly.nodes[k]);
    num += q * poly.node_values[k];
    den += q;
  }
  return num / den;
}

double eval_poly_monomial(const MarginalPoly& poly, double x) {
  if (poly.monomial.empty())
    throw ArgError("eval_poly_monomial: no monomial image (more than 20 nodes)");
  const double t = 2.0 * x - 1.0;
  double v = 0.0;
  for (std::size_t p = poly.monomial.size(); p-- > 0;) v = v * t + poly.monomial[p];
  return v;
}

}  // namespace marg
