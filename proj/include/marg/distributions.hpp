#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "marg/evaluation.hpp"

namespace marg {

/// lambda e^(-lambda x) on [0, upper]; upper defaults to 14/lambda, losing
/// under 1e-6 of the mass.
struct ExponentialFactor {
  double lambda = 1.0;
  double upper = 0.0;  // 0 -> default
};

/// x^(a-1) (1-x)^(b-1) / B(a, b) on [0, 1].
struct BetaFactor {
  double alpha = 1.0;
  double beta = 1.0;
};

/// rate^shape x^(shape-1) e^(-rate x) / Gamma(shape) on [0, upper]; upper
/// defaults to (shape + 10 sqrt(shape) + 4)/rate, losing under 1e-6 of the
/// mass for any shape.
struct GammaFactor {
  double shape = 1.0;
  double rate = 1.0;
  double upper = 0.0;  // 0 -> default
};

struct MixtureComponent {
  double weight = 1.0;
  double mean = 0.5;
  double sigma = 0.1;
};

/// Weighted sum of normal densities restricted to [lower, upper].
struct GaussianMixtureFactor {
  std::vector<MixtureComponent> components;
  double lower = 0.0;
  double upper = 1.0;
};

using Factor = std::variant<ExponentialFactor, BetaFactor, GammaFactor, GaussianMixtureFactor>;

/// Product of independent univariate densities; the joint is their product
/// and each one-dimensional marginal is known in closed form.
struct ProductDistribution {
  std::vector<Factor> factors;
  int dim() const { return static_cast<int>(factors.size()); }
};

/// Validates parameters; throws ArgError describing the first problem.
void validate(const ProductDistribution& d);

double factor_lower(const Factor& f);
double factor_upper(const Factor& f);
/// Density on the factor's own domain (not the unit cube).
double factor_density(const Factor& f, double x);
/// Closed-form integral of the density over [lower, upper].
double factor_mass(const Factor& f);
/// factor_mass divided by the box width: the factor's mean level once its
/// box is mapped onto [0, 1]. The product of the other factors' cube masses
/// is the constant in front of a marginal.
double factor_cube_mass(const Factor& f);
/// 1 - factor_mass: the probability mass lost to truncation.
double factor_mass_loss(const Factor& f);

/// Joint density on the unit cube: each factor's box is mapped onto [0, 1]
/// and the factor densities are multiplied. No Jacobian factor is applied,
/// so values match the original densities at the mapped points.
RealFunction joint_density(const ProductDistribution& d);

/// Exact marginal of joint_density along one axis:
/// factor_density_j at the mapped point times prod_{k != j} factor_cube_mass.
std::function<double(double)> true_marginal(const ProductDistribution& d, int axis);

/// sup over [0, infinity) of the n-th derivative magnitude of the
/// exponential density: lambda^(n+1).
double derivative_bound(const ExponentialFactor& f, int order);

/// Parses the line-oriented key-value config format:
///   # comment
///   factor = exponential lambda=1 upper=8
///   factor = beta alpha=2 beta=5
///   factor = gamma shape=3 rate=1
///   factor = mixture w=0.5;0.5 mean=0.3;0.7 sigma=0.1;0.1 lower=0 upper=1
/// One factor line per axis, in axis order.
ProductDistribution parse_distribution_config(std::istream& in);
ProductDistribution load_distribution_config(const std::string& path);

}  // namespace marg
