#include "marg/pointset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace marg {

namespace {

void check_dim(int s) {
  if (s < 1) throw ArgError("dimension must be >= 1, got " + std::to_string(s));
}

void check_budget(std::uint64_t n_points, int s, const std::string& what) {
  if (n_points == 0) throw ArgError(what + ": point count must be positive");
  const std::uint64_t scalars = n_points * static_cast<std::uint64_t>(s);
  if (n_points > kPointScalarBudget || scalars / static_cast<std::uint64_t>(s) != n_points ||
      scalars > kPointScalarBudget) {
    throw CapacityError(what + ": " + std::to_string(n_points) + " points x " +
                        std::to_string(s) + " dims exceeds the scalar budget of " +
                        std::to_string(kPointScalarBudget));
  }
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

// splitmix64: counter-based, output k is a mix of seed + (k+1)*golden gamma
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double next_unit() {
    // top 53 bits -> [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

}  // namespace

Rational PointSet::rational_at(std::size_t i, int j) const {
  if (!has_rational()) throw ArgError("point set has no exact coordinates");
  return Rational{static_cast<std::int64_t>(rational_num[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)]),
                  rational_den};
}

std::string PointSet::kind_label() const {
  switch (kind) {
    case PointSetKind::Grid: return "grid";
    case PointSetKind::Rank1Lattice: return "rank1";
    case PointSetKind::Korobov: return "korobov";
    case PointSetKind::MaximalRank: return "maximal";
    case PointSetKind::Random: return "random";
  }
  return "unknown";
}

std::string PointSet::descriptor() const {
  std::ostringstream os;
  os << "kind=" << kind_label() << ",N=" << count << ",s=" << dim;
  switch (kind) {
    case PointSetKind::Grid: os << ",n=" << grid_n; break;
    case PointSetKind::Rank1Lattice: os << ",z=" << join_u64(gen); break;
    case PointSetKind::Korobov: os << ",alpha=" << alpha << ",z=" << join_u64(gen); break;
    case PointSetKind::MaximalRank:
      os << ",l=" << base_count << ",r=" << refinement << ",z=" << join_u64(gen);
      break;
    case PointSetKind::Random: os << ",seed=" << seed << ",rng=" << kRandomGeneratorId; break;
  }
  return os.str();
}

std::uint64_t grid_point_count(std::uint64_t n, int s) {
  if (n < 2) throw ArgError("grid requires n >= 2 points per axis, got " + std::to_string(n));
  check_dim(s);
  std::uint64_t total = 1;
  for (int j = 0; j < s; ++j) {
    if (total > std::numeric_limits<std::uint64_t>::max() / n)
      throw CapacityError("grid point count n^s overflows 64 bits");
    total *= n;
  }
  return total;
}

PointSet grid_points(std::uint64_t n, int s) {
  const std::uint64_t total = grid_point_count(n, s);
  check_budget(total, s, "grid");
  if (n - 1 > std::numeric_limits<std::uint32_t>::max())
    throw CapacityError("grid n too large for exact coordinates");

  PointSet ps;
  ps.dim = s;
  ps.count = static_cast<std::size_t>(total);
  ps.kind = PointSetKind::Grid;
  ps.grid_n = n;
  ps.rational_den = static_cast<std::int64_t>(n - 1);
  ps.coords.resize(ps.count * static_cast<std::size_t>(s));
  ps.rational_num.resize(ps.coords.size());

  const double den = static_cast<double>(n - 1);
  std::vector<std::uint64_t> digit(static_cast<std::size_t>(s), 0);
  for (std::size_t i = 0; i < ps.count; ++i) {
    for (int j = 0; j < s; ++j) {
      const std::size_t idx = i * static_cast<std::size_t>(s) + static_cast<std::size_t>(j);
      ps.rational_num[idx] = static_cast<std::uint32_t>(digit[static_cast<std::size_t>(j)]);
      ps.coords[idx] = static_cast<double>(digit[static_cast<std::size_t>(j)]) / den;
    }
    // odometer, last axis fastest
    for (int j = s - 1; j >= 0; --j) {
      if (++digit[static_cast<std::size_t>(j)] < n) break;
      digit[static_cast<std::size_t>(j)] = 0;
    }
  }
  return ps;
}

PointSet rank1_lattice(std::uint64_t point_count, const std::vector<std::uint64_t>& z) {
  if (z.empty()) throw ArgError("rank1_lattice: generating vector is empty");
  if (point_count < 2) throw ArgError("rank1_lattice: N must be >= 2");
  const int s = static_cast<int>(z.size());
  check_budget(point_count, s, "rank1_lattice");
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (z[j] < 1 || z[j] > point_count - 1)
      throw ArgError("rank1_lattice: z[" + std::to_string(j) + "]=" + std::to_string(z[j]) +
                     " outside [1, N-1]");
  }

  PointSet ps;
  ps.dim = s;
  ps.count = static_cast<std::size_t>(point_count);
  ps.kind = PointSetKind::Rank1Lattice;
  ps.gen = z;
  ps.rational_den = static_cast<std::int64_t>(point_count);
  ps.coords.resize(ps.count * static_cast<std::size_t>(s));
  ps.rational_num.resize(ps.coords.size());

  const double dn = static_cast<double>(point_count);
  // residues advance additively: (i+1) z_j = i z_j + z_j (mod N)
  std::vector<std::uint64_t> res(z.begin(), z.end());
  for (std::size_t i = 0; i < ps.count; ++i) {
    for (int j = 0; j < s; ++j) {
      const std::size_t idx = i * static_cast<std::size_t>(s) + static_cast<std::size_t>(j);
      const std::uint64_t r = res[static_cast<std::size_t>(j)] % point_count;
      ps.rational_num[idx] = static_cast<std::uint32_t>(r);
      ps.coords[idx] = static_cast<double>(r) / dn;
    }
    for (int j = 0; j < s; ++j) {
      std::uint64_t& r = res[static_cast<std::size_t>(j)];
      r += z[static_cast<std::size_t>(j)];
      if (r >= point_count) r -= point_count;
    }
  }
  return ps;
}

PointSet korobov_lattice(std::uint64_t point_count, std::uint64_t alpha, int s) {
  check_dim(s);
  if (point_count < 2) throw ArgError("korobov_lattice: N must be >= 2");
  if (alpha < 1 || alpha > point_count - 1)
    throw ArgError("korobov_lattice: alpha=" + std::to_string(alpha) + " outside [1, N-1]");
  std::vector<std::uint64_t> z(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j) {
    z[static_cast<std::size_t>(j)] = powmod(alpha, static_cast<std::uint64_t>(j), point_count);
    if (z[static_cast<std::size_t>(j)] == 0)
      throw ArgError("korobov_lattice: alpha^" + std::to_string(j) +
                     " vanishes mod N; pick alpha coprime with N");
  }
  PointSet ps = rank1_lattice(point_count, z);
  ps.kind = PointSetKind::Korobov;
  ps.alpha = alpha;
  return ps;
}

PointSet maximal_rank_lattice(std::uint64_t base_count, std::uint64_t refinement,
                              const std::vector<std::uint64_t>& z) {
  if (z.empty()) throw ArgError("maximal_rank_lattice: generating vector is empty");
  if (base_count < 2) throw ArgError("maximal_rank_lattice: l must be >= 2");
  if (refinement < 1) throw ArgError("maximal_rank_lattice: r must be >= 1");
  if (std::gcd(base_count, refinement) != 1)
    throw ArgError("maximal_rank_lattice: gcd(r, l) must be 1, got l=" +
                   std::to_string(base_count) + " r=" + std::to_string(refinement));
  const int s = static_cast<int>(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (z[j] < 1 || z[j] > base_count - 1)
      throw ArgError("maximal_rank_lattice: z[" + std::to_string(j) + "] outside [1, l-1]");
    if (std::gcd(z[j], base_count) != 1)
      throw ArgError("maximal_rank_lattice: z[" + std::to_string(j) + "]=" + std::to_string(z[j]) +
                     " not coprime with l=" + std::to_string(base_count));
  }

  // N = l * r^s, checked
  std::uint64_t total = base_count;
  for (int j = 0; j < s; ++j) {
    if (total > std::numeric_limits<std::uint64_t>::max() / refinement)
      throw CapacityError("maximal_rank_lattice: l*r^s overflows 64 bits");
    total *= refinement;
  }
  check_budget(total, s, "maximal_rank_lattice");
  const std::uint64_t den = base_count * refinement;
  if (den - 1 > std::numeric_limits<std::uint32_t>::max())
    throw CapacityError("maximal_rank_lattice: l*r too large for exact coordinates");

  PointSet ps;
  ps.dim = s;
  ps.count = static_cast<std::size_t>(total);
  ps.kind = PointSetKind::MaximalRank;
  ps.gen = z;
  ps.base_count = base_count;
  ps.refinement = refinement;
  ps.rational_den = static_cast<std::int64_t>(den);
  ps.coords.resize(ps.count * static_cast<std::size_t>(s));
  ps.rational_num.resize(ps.coords.size());

  const double dden = static_cast<double>(den);
  std::vector<std::uint64_t> shift(static_cast<std::size_t>(s), 0);  // k odometer
  std::size_t row = 0;
  for (std::uint64_t i = 1; i <= base_count; ++i) {
    std::fill(shift.begin(), shift.end(), 0);
    const std::uint64_t copies = total / base_count;  // r^s
    for (std::uint64_t c = 0; c < copies; ++c, ++row) {
      for (int j = 0; j < s; ++j) {
        const std::size_t idx = row * static_cast<std::size_t>(s) + static_cast<std::size_t>(j);
        // {i z_j / l + k_j / r} = ((i z_j r + k_j l) mod l r) / (l r)
        const std::uint64_t num =
            (mulmod(i * z[static_cast<std::size_t>(j)] % den, refinement, den) +
             shift[static_cast<std::size_t>(j)] * base_count) % den;
        ps.rational_num[idx] = static_cast<std::uint32_t>(num);
        ps.coords[idx] = static_cast<double>(num) / dden;
      }
      for (int j = s - 1; j >= 0; --j) {
        if (++shift[static_cast<std::size_t>(j)] < refinement) break;
        shift[static_cast<std::size_t>(j)] = 0;
      }
    }
  }
  return ps;
}

PointSet random_points(std::size_t point_count, int s, std::uint64_t seed) {
  check_dim(s);
  check_budget(point_count, s, "random_points");
  PointSet ps;
  ps.dim = s;
  ps.count = point_count;
  ps.kind = PointSetKind::Random;
  ps.seed = seed;
  ps.coords.resize(point_count * static_cast<std::size_t>(s));
  SplitMix64 rng(seed);
  for (double& c : ps.coords) c = rng.next_unit();
  return ps;
}

namespace detail {

ProfileWithIndex projection_profile_with_index(const PointSet& ps, int axis) {
  if (axis < 0 || axis >= ps.dim)
    throw ArgError("axis " + std::to_string(axis) + " outside [0, " + std::to_string(ps.dim) + ")");
  const std::size_t n = ps.count;
  const std::size_t s = static_cast<std::size_t>(ps.dim);
  const std::size_t a = static_cast<std::size_t>(axis);

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);

  ProfileWithIndex out;
  out.profile.axis = axis;
  out.node_index.resize(n);

  if (ps.has_rational()) {
    const std::uint32_t* num = ps.rational_num.data();
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
      return num[x * s + a] < num[y * s + a];
    });
    std::uint32_t prev = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint32_t row = order[k];
      const std::uint32_t v = num[row * s + a];
      if (k == 0 || v != prev) {
        out.profile.nodes.push_back(ps.coords[row * s + a]);
        out.profile.multiplicities.push_back(0);
        prev = v;
      }
      out.profile.multiplicities.back()++;
      out.node_index[row] = static_cast<std::uint32_t>(out.profile.nodes.size() - 1);
    }
  } else {
    constexpr double kTol = 1e-12;
    const double* c = ps.coords.data();
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
      return c[x * s + a] < c[y * s + a];
    });
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint32_t row = order[k];
      const double v = c[row * s + a];
      if (k == 0 || v - prev > kTol) {
        out.profile.nodes.push_back(v);
        out.profile.multiplicities.push_back(0);
      }
      out.profile.multiplicities.back()++;
      out.node_index[row] = static_cast<std::uint32_t>(out.profile.nodes.size() - 1);
      prev = v;
    }
  }
  out.profile.fully_projection_regular = out.profile.nodes.size() == n;
  return out;
}

}  // namespace detail

ProjectionProfile projection_profile(const PointSet& ps, int axis) {
  return detail::projection_profile_with_index(ps, axis).profile;
}

}  // namespace marg
