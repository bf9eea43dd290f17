#pragma once

#include <cstdint>
#include <vector>

namespace marg {

/// Weighted P2 figure of merit of a rank-1 lattice:
///   sum over nonzero integer vectors h with h.z = 0 (mod N) of
///   prod_{j: h_j != 0} gamma_j / h_j^2,
/// with product weights gamma_j = 0.85^j. Evaluated in closed form as
///   (1/N) sum_{i=1..N} prod_j (1 + gamma_j 2 pi^2 B2({i z_j / N})) - 1,
/// B2(x) = x^2 - x + 1/6. Smaller is better; the decaying weights emphasize
/// the leading coordinates and low-order projections that the marginal
/// pipeline consumes.
double korobov_merit(std::uint64_t point_count, const std::vector<std::uint64_t>& z);

/// Exhaustive search over generators alpha coprime with N (N >= 4) for the
/// Korobov lattice minimizing korobov_merit of z = (1, alpha, ..., alpha^{s-1}).
/// Ties break to the smallest alpha; the result is deterministic and
/// independent of the worker count (0 = all hardware threads).
std::uint64_t korobov_search(std::uint64_t point_count, int s, int threads = 0);

/// The product weight gamma_j = 0.85^j used by korobov_merit.
double korobov_weight(int axis);

}  // namespace marg
