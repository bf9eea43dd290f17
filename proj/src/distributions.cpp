#include "marg/distributions.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

namespace marg {

namespace {

// Regularized lower incomplete gamma P(a, x): series for x < a + 1,
// continued fraction otherwise.
double gammp(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw ArgError("gammp: bad arguments");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // Lentz continued fraction for Q(a, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - gln) * h;
  return 1.0 - q;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double exp_upper(const ExponentialFactor& f) { return f.upper > 0.0 ? f.upper : 14.0 / f.lambda; }

// mean + 10 sigma, padded so shapes near 1 also stay under 1e-6 lost mass
double gamma_upper(const GammaFactor& f) {
  return f.upper > 0.0 ? f.upper : (f.shape + 10.0 * std::sqrt(f.shape) + 4.0) / f.rate;
}

void validate_factor(const Factor& f, int axis) {
  const std::string where = "factor " + std::to_string(axis);
  if (const auto* e = std::get_if<ExponentialFactor>(&f)) {
    if (!(e->lambda > 0.0)) throw ArgError(where + ": exponential needs lambda > 0");
    if (e->upper < 0.0) throw ArgError(where + ": exponential needs upper >= 0");
  } else if (const auto* b = std::get_if<BetaFactor>(&f)) {
    if (!(b->alpha > 0.0) || !(b->beta > 0.0)) throw ArgError(where + ": beta needs alpha, beta > 0");
  } else if (const auto* g = std::get_if<GammaFactor>(&f)) {
    if (!(g->shape > 0.0) || !(g->rate > 0.0)) throw ArgError(where + ": gamma needs shape, rate > 0");
    if (g->upper < 0.0) throw ArgError(where + ": gamma needs upper >= 0");
  } else if (const auto* m = std::get_if<GaussianMixtureFactor>(&f)) {
    if (m->components.empty()) throw ArgError(where + ": mixture needs at least one component");
    double wsum = 0.0;
    for (const auto& c : m->components) {
      if (!(c.weight > 0.0)) throw ArgError(where + ": mixture weights must be positive");
      if (!(c.sigma > 0.0)) throw ArgError(where + ": mixture sigmas must be positive");
      wsum += c.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw ArgError(where + ": mixture weights must sum to 1");
    if (!(m->lower < m->upper)) throw ArgError(where + ": mixture needs lower < upper");
  }
}

}  // namespace

void validate(const ProductDistribution& d) {
  if (d.factors.empty()) throw ArgError("distribution has no factors");
  for (int j = 0; j < d.dim(); ++j) validate_factor(d.factors[static_cast<std::size_t>(j)], j);
}

double factor_lower(const Factor& f) {
  if (const auto* m = std::get_if<GaussianMixtureFactor>(&f)) return m->lower;
  return 0.0;
}

double factor_upper(const Factor& f) {
  if (const auto* e = std::get_if<ExponentialFactor>(&f)) return exp_upper(*e);
  if (std::holds_alternative<BetaFactor>(f)) return 1.0;
  if (const auto* g = std::get_if<GammaFactor>(&f)) return gamma_upper(*g);
  return std::get<GaussianMixtureFactor>(f).upper;
}

double factor_density(const Factor& f, double x) {
  if (const auto* e = std::get_if<ExponentialFactor>(&f)) {
    return e->lambda * std::exp(-e->lambda * x);
  }
  if (const auto* b = std::get_if<BetaFactor>(&f)) {
    const double lnB = std::lgamma(b->alpha) + std::lgamma(b->beta) - std::lgamma(b->alpha + b->beta);
    if (x == 0.0) {
      if (b->alpha > 1.0) return 0.0;
      if (b->alpha == 1.0) return std::exp((b->beta - 1.0) * std::log1p(-x) - lnB);
      return std::numeric_limits<double>::infinity();
    }
    if (x == 1.0) {
      if (b->beta > 1.0) return 0.0;
      if (b->beta == 1.0) return std::exp((b->alpha - 1.0) * std::log(x) - lnB);
      return std::numeric_limits<double>::infinity();
    }
    return std::exp((b->alpha - 1.0) * std::log(x) + (b->beta - 1.0) * std::log1p(-x) - lnB);
  }
  if (const auto* g = std::get_if<GammaFactor>(&f)) {
    if (x == 0.0) {
      if (g->shape > 1.0) return 0.0;
      if (g->shape == 1.0) return g->rate;
      return std::numeric_limits<double>::infinity();
    }
    return std::exp(g->shape * std::log(g->rate) + (g->shape - 1.0) * std::log(x) -
                    g->rate * x - std::lgamma(g->shape));
  }
  const auto& m = std::get<GaussianMixtureFactor>(f);
  double acc = 0.0;
  for (const auto& c : m.components) {
    const double t = (x - c.mean) / c.sigma;
    acc += c.weight * std::exp(-0.5 * t * t) / (c.sigma * std::sqrt(2.0 * std::numbers::pi));
  }
  return acc;
}

double factor_mass(const Factor& f) {
  if (const auto* e = std::get_if<ExponentialFactor>(&f)) {
    return -std::expm1(-e->lambda * exp_upper(*e));
  }
  if (std::holds_alternative<BetaFactor>(f)) return 1.0;
  if (const auto* g = std::get_if<GammaFactor>(&f)) {
    return gammp(g->shape, g->rate * gamma_upper(*g));
  }
  const auto& m = std::get<GaussianMixtureFactor>(f);
  double acc = 0.0;
  for (const auto& c : m.components)
    acc += c.weight * (normal_cdf((m.upper - c.mean) / c.sigma) - normal_cdf((m.lower - c.mean) / c.sigma));
  return acc;
}

double factor_cube_mass(const Factor& f) {
  return factor_mass(f) / (factor_upper(f) - factor_lower(f));
}

double factor_mass_loss(const Factor& f) { return 1.0 - factor_mass(f); }

RealFunction joint_density(const ProductDistribution& d) {
  validate(d);
  std::vector<double> lo(d.factors.size()), hi(d.factors.size());
  for (std::size_t j = 0; j < d.factors.size(); ++j) {
    lo[j] = factor_lower(d.factors[j]);
    hi[j] = factor_upper(d.factors[j]);
  }
  auto on_box = [factors = d.factors](std::span<const double> x) -> double {
    double prod = 1.0;
    for (std::size_t j = 0; j < factors.size(); ++j) prod *= factor_density(factors[j], x[j]);
    return prod;
  };
  return transform_domain(std::move(on_box), std::move(lo), std::move(hi));
}

std::function<double(double)> true_marginal(const ProductDistribution& d, int axis) {
  validate(d);
  if (axis < 0 || axis >= d.dim())
    throw ArgError("true_marginal: axis " + std::to_string(axis) + " outside [0, " +
                   std::to_string(d.dim()) + ")");
  double constant = 1.0;
  for (int k = 0; k < d.dim(); ++k)
    if (k != axis) constant *= factor_cube_mass(d.factors[static_cast<std::size_t>(k)]);
  const Factor f = d.factors[static_cast<std::size_t>(axis)];
  const double lo = factor_lower(f);
  const double span = factor_upper(f) - lo;
  return [f, lo, span, constant](double u) { return factor_density(f, lo + u * span) * constant; };
}

double derivative_bound(const ExponentialFactor& f, int order) {
  if (!(f.lambda > 0.0)) throw ArgError("derivative_bound: lambda must be positive");
  if (order < 0) throw ArgError("derivative_bound: order must be >= 0");
  return std::pow(f.lambda, order + 1);
}

namespace {

std::vector<double> parse_list(const std::string& text, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ArgError(where + ": cannot parse number '" + item + "'");
    }
  }
  if (out.empty()) throw ArgError(where + ": empty list");
  return out;
}

Factor parse_factor(const std::string& text, int line_no) {
  const std::string where = "config line " + std::to_string(line_no);
  std::stringstream ss(text);
  std::string type;
  ss >> type;
  std::vector<std::pair<std::string, std::string>> kv;
  std::string tok;
  while (ss >> tok) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos) throw ArgError(where + ": expected key=value, got '" + tok + "'");
    kv.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  auto get = [&](const std::string& key, double fallback, bool* found = nullptr) {
    for (const auto& [k, v] : kv)
      if (k == key) {
        if (found) *found = true;
        return parse_list(v, where).at(0);
      }
    if (found) *found = false;
    return fallback;
  };
  auto get_list = [&](const std::string& key) -> std::vector<double> {
    for (const auto& [k, v] : kv)
      if (k == key) return parse_list(v, where);
    throw ArgError(where + ": mixture needs '" + key + "='");
  };

  if (type == "exponential") {
    ExponentialFactor f;
    f.lambda = get("lambda", 1.0);
    f.upper = get("upper", 0.0);
    return f;
  }
  if (type == "beta") {
    BetaFactor f;
    f.alpha = get("alpha", 1.0);
    f.beta = get("beta", 1.0);
    return f;
  }
  if (type == "gamma") {
    GammaFactor f;
    f.shape = get("shape", 1.0);
    f.rate = get("rate", 1.0);
    f.upper = get("upper", 0.0);
    return f;
  }
  if (type == "mixture") {
    GaussianMixtureFactor f;
    const auto w = get_list("w");
    const auto mean = get_list("mean");
    const auto sigma = get_list("sigma");
    if (w.size() != mean.size() || w.size() != sigma.size())
      throw ArgError(where + ": mixture lists w/mean/sigma must have equal length");
    for (std::size_t i = 0; i < w.size(); ++i)
      f.components.push_back({w[i], mean[i], sigma[i]});
    f.lower = get("lower", 0.0);
    f.upper = get("upper", 1.0);
    return f;
  }
  throw ArgError(where + ": unknown factor type '" + type +
                 "' (expected exponential, beta, gamma or mixture)");
}

}  // namespace

ProductDistribution parse_distribution_config(std::istream& in) {
  ProductDistribution d;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ArgError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const std::size_t a = s.find_first_not_of(" \t\r");
      const std::size_t b = s.find_last_not_of(" \t\r");
      s = a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    trim(key);
    trim(value);
    if (key == "factor") {
      d.factors.push_back(parse_factor(value, line_no));
    } else {
      throw ArgError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  validate(d);
  return d;
}

ProductDistribution load_distribution_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgError("cannot open distribution config '" + path + "'");
  return parse_distribution_config(in);
}

}  // namespace marg
