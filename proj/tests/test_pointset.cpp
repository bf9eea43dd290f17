#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "marg/pointset.hpp"

using namespace marg;

namespace {

// independent grouping: count distinct column values with a sorted map
std::map<double, std::size_t> brute_force_groups(const PointSet& ps, int axis) {
  std::map<double, std::size_t> groups;
  for (std::size_t i = 0; i < ps.count; ++i) groups[ps.at(i, axis)]++;
  return groups;
}

}  // namespace

TEST_CASE("grid 2x2 is the unit-square corners") {
  const PointSet ps = grid_points(2, 2);
  REQUIRE(ps.count == 4);
  std::set<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < 4; ++i) pts.insert({ps.at(i, 0), ps.at(i, 1)});
  CHECK(pts == std::set<std::pair<double, double>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
}

TEST_CASE("grid(5,2): 25 points, five nodes of multiplicity five per axis") {
  const PointSet ps = grid_points(5, 2);
  REQUIRE(ps.count == 25);
  for (int j = 0; j < 2; ++j) {
    const ProjectionProfile p = projection_profile(ps, j);
    CHECK(p.node_count() == 5);
    for (std::size_t m : p.multiplicities) CHECK(m == 5);
    CHECK_FALSE(p.fully_projection_regular);
  }
}

TEST_CASE("grid structural invariants for small n, s") {
  for (std::uint64_t n : {2, 3, 5}) {
    for (int s : {1, 2, 3}) {
      const PointSet ps = grid_points(n, s);
      CHECK(ps.count == grid_point_count(n, s));
      const std::uint64_t expected_m = grid_point_count(n, s) / n;
      for (int j = 0; j < s; ++j) {
        const ProjectionProfile p = projection_profile(ps, j);
        REQUIRE(p.node_count() == n);
        std::size_t total = 0;
        for (std::size_t m : p.multiplicities) {
          CHECK(m == expected_m);
          total += m;
        }
        CHECK(total == ps.count);
      }
    }
  }
}

TEST_CASE("grid capacity: count computes without materializing") {
  CHECK(grid_point_count(5, 10) == 9765625ull);
  CHECK_THROWS_AS(grid_points(5, 10), CapacityError);
  CHECK_THROWS_AS(grid_point_count(1 << 20, 4), CapacityError);
  CHECK_THROWS_AS(grid_points(1, 2), ArgError);
}

TEST_CASE("rank-1 lattice N=4 z=(1,1): diagonal in row order") {
  const PointSet ps = rank1_lattice(4, {1, 1});
  REQUIRE(ps.count == 4);
  const double expect[4] = {0.25, 0.5, 0.75, 0.0};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(ps.at(i, 0) == expect[i]);
    CHECK(ps.at(i, 1) == expect[i]);
  }
}

TEST_CASE("rank-1 lattice with coprime components is fully projection regular") {
  const PointSet ps = rank1_lattice(32, {1, 7});
  for (int j = 0; j < 2; ++j) {
    const ProjectionProfile p = projection_profile(ps, j);
    CHECK(p.node_count() == 32);
    CHECK(p.fully_projection_regular);
    // nodes are exactly {0, 1/32, ..., 31/32}
    for (std::size_t k = 0; k < 32; ++k) CHECK(p.nodes[k] == static_cast<double>(k) / 32.0);
  }
}

TEST_CASE("rank-1 lattice N=8 z=(1,2): second axis has four doubled nodes") {
  // oracle: enumerate i*2 mod 8 for i = 1..8
  std::map<double, std::size_t> expect;
  for (int i = 1; i <= 8; ++i) expect[static_cast<double>(i * 2 % 8) / 8.0]++;

  const PointSet ps = rank1_lattice(8, {1, 2});
  const ProjectionProfile p = projection_profile(ps, 1);
  REQUIRE(p.node_count() == expect.size());
  std::size_t k = 0;
  for (const auto& [node, mult] : expect) {
    CHECK(p.nodes[k] == node);
    CHECK(p.multiplicities[k] == mult);
    ++k;
  }
  CHECK_FALSE(p.fully_projection_regular);
}

TEST_CASE("rank-1 lattice rejects out-of-range generator components") {
  CHECK_THROWS_AS(rank1_lattice(8, {1, 8}), ArgError);
  CHECK_THROWS_AS(rank1_lattice(8, {0, 1}), ArgError);
}

TEST_CASE("lattice coordinates are exactly representable multiples of 1/N") {
  const PointSet ps = rank1_lattice(32, {1, 7});
  for (std::size_t i = 0; i < ps.count; ++i) {
    for (int j = 0; j < ps.dim; ++j) {
      const double scaled = ps.at(i, j) * 32.0;
      CHECK(scaled == std::round(scaled));
      const Rational q = ps.rational_at(i, j);
      CHECK(ps.at(i, j) == static_cast<double>(q.num) / static_cast<double>(q.den));
    }
  }
}

TEST_CASE("maximal rank with r=1 reduces to the rank-1 lattice") {
  const PointSet a = maximal_rank_lattice(5, 1, {1, 2});
  const PointSet b = rank1_lattice(5, {1, 2});
  REQUIRE(a.count == 5);
  CHECK(a.coords == b.coords);
}

TEST_CASE("maximal rank l=3 r=2: twelve points, six doubled nodes per axis") {
  const PointSet ps = maximal_rank_lattice(3, 2, {1, 1});
  REQUIRE(ps.count == 12);
  for (int j = 0; j < 2; ++j) {
    const auto groups = brute_force_groups(ps, j);  // oracle grouping
    REQUIRE(groups.size() == 6);
    for (const auto& [node, mult] : groups) CHECK(mult == 2);

    const ProjectionProfile p = projection_profile(ps, j);
    REQUIRE(p.node_count() == 6);
    std::size_t k = 0;
    for (const auto& [node, mult] : groups) {
      CHECK(p.nodes[k] == node);
      CHECK(p.multiplicities[k] == mult);
      ++k;
    }
  }
}

TEST_CASE("maximal rank l=5 r=2 s=3: N=40 and multiplicity r^(s-1)=4") {
  const PointSet ps = maximal_rank_lattice(5, 2, {1, 2, 3});
  REQUIRE(ps.count == 40);
  for (int j = 0; j < 3; ++j) {
    const ProjectionProfile p = projection_profile(ps, j);
    CHECK(p.node_count() == 10);  // l*r
    for (std::size_t m : p.multiplicities) CHECK(m == 4);
  }
}

TEST_CASE("maximal rank rejects gcd violations") {
  CHECK_THROWS_AS(maximal_rank_lattice(4, 2, {1, 1}), ArgError);   // gcd(r, l) != 1
  CHECK_THROWS_AS(maximal_rank_lattice(6, 5, {2, 1}), ArgError);   // z_0 not coprime with l
}

TEST_CASE("random points: reproducible, in range, uniform-ish") {
  const PointSet one = random_points(1, 1, 42);
  CHECK(one.at(0, 0) >= 0.0);
  CHECK(one.at(0, 0) < 1.0);

  const PointSet a = random_points(100, 3, 1);
  const PointSet b = random_points(100, 3, 1);
  CHECK(a.coords == b.coords);
  CHECK(random_points(100, 3, 2).coords != a.coords);

  // CLT: coordinate means of 1e4 points lie within 0.5 +/- 0.01
  const PointSet big = random_points(10000, 2, 7);
  for (int j = 0; j < 2; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < big.count; ++i) mean += big.at(i, j);
    mean /= static_cast<double>(big.count);
    CHECK(std::abs(mean - 0.5) < 0.01);
  }
}

TEST_CASE("profile multiplicities sum to N for every kind") {
  const PointSet sets[] = {grid_points(4, 3), rank1_lattice(16, {1, 4}),
                           maximal_rank_lattice(3, 2, {1, 2}), random_points(97, 2, 5)};
  for (const PointSet& ps : sets) {
    for (int j = 0; j < ps.dim; ++j) {
      const ProjectionProfile p = projection_profile(ps, j);
      std::size_t total = 0;
      for (std::size_t m : p.multiplicities) total += m;
      CHECK(total == ps.count);
      CHECK(std::is_sorted(p.nodes.begin(), p.nodes.end()));
      CHECK(p.fully_projection_regular == (p.node_count() == ps.count));
    }
  }
}

TEST_CASE("float grouping tolerance merges near-duplicates") {
  PointSet ps;
  ps.dim = 1;
  ps.count = 4;
  ps.kind = PointSetKind::Random;
  ps.coords = {0.3, 0.3 + 4e-13, 0.7, 0.3 - 4e-13};
  const ProjectionProfile p = projection_profile(ps, 0);
  REQUIRE(p.node_count() == 2);
  CHECK(p.multiplicities[0] == 3);
  CHECK(p.multiplicities[1] == 1);
  CHECK(p.nodes[0] == 0.3 - 4e-13);  // smallest member names the node
}

TEST_CASE("axis bounds are validated") {
  const PointSet ps = grid_points(3, 2);
  CHECK_THROWS_AS(projection_profile(ps, -1), ArgError);
  CHECK_THROWS_AS(projection_profile(ps, 2), ArgError);
}
