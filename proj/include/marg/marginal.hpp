#pragma once

#include <span>
#include <vector>

#include "marg/evaluation.hpp"

namespace marg {

enum class MeanMode { PointwiseMean, PartitionMean };

/// How a MarginalPoly was produced: interpolation through point-wise means,
/// interpolation through partition means, or a least-squares fit to the raw
/// projected points.
enum class PolyMode { PointwiseMean, PartitionMean, ProjectionLs };

/// Nodes z_k paired with the mean of the member function values: either the
/// point-wise mean over all rows sharing the abscissa z_k, or the mean over
/// the rows falling in the bin [z_k, z_{k+1}).
struct MeanProfile {
  int axis = 0;
  MeanMode mode = MeanMode::PointwiseMean;
  std::vector<double> nodes;
  std::vector<double> means;
  std::vector<std::size_t> counts;
  std::vector<double> breakpoints;  // partition mode only, size nodes+1
};

/// One positive weight per node.
struct Weights {
  std::vector<double> w;
};

/// Which abscissa a partition bin's mean is attached to when fitting.
enum class PartitionNodeRule { LeftBreakpoint, Midpoint };

/// Degree-(n-1) polynomial through n (node, value) pairs, held in
/// node-value form and evaluated barycentrically; at a node the node value
/// is returned exactly. A monomial-coefficient image in t = 2x - 1 is kept
/// for n <= 20 as a second evaluation route.
struct MarginalPoly {
  int axis = 0;
  std::vector<double> nodes;        // strictly increasing
  std::vector<double> node_values;
  std::vector<double> bary_weights;
  PolyMode mode = PolyMode::PointwiseMean;
  std::vector<double> breakpoints;  // partition-based modes only
  std::vector<double> monomial;     // coeffs in t = 2x - 1, lowest first; empty if n > 20

  int degree() const { return static_cast<int>(nodes.size()) - 1; }
};

/// Interpolating polynomial through the given pairs (nodes strictly increasing).
MarginalPoly make_interpolant(std::vector<double> nodes, std::vector<double> values);

/// Mean of the projected values at each distinct abscissa.
MeanProfile pointwise_means(const Projection& p);

/// Bin means over [z_k, z_{k+1}) (last bin closed at z_n). Breakpoints must
/// be strictly increasing and span [0, 1]. Counts are the actual occupancy;
/// an empty bin raises EmptyBinError naming the bin.
MeanProfile partition_means(const Projection& p, std::span<const double> breakpoints);

/// The n + 1 breakpoints k/n, k = 0..n.
std::vector<double> equidistant_breakpoints(int n);

/// Degree-(n-1) least-squares fit to all N projected points. Computed as
/// the interpolant through the point-wise means, which the full least-squares
/// solution passes through.
MarginalPoly fit_ls_poly(const Projection& p);

/// Weighted least-squares fit with one weight per node, solved through
/// explicit weighted normal equations over the full N x n design matrix.
/// Agrees with fit_ls_poly up to numerical error regardless of the weights;
/// kept as an independent route for cross-checking.
MarginalPoly fit_wls_poly(const Projection& p, const Weights& w);

/// Interpolant through the partition means, attached per node_rule (the bin's
/// left breakpoint by default). When every bin's abscissae coincide this is
/// the degree-(n-1) least-squares fit itself; on spread-out abscissae it is
/// the analysis object of the bin-mean theory, not the raw fit.
MarginalPoly fit_partition_poly(const Projection& p, std::span<const double> breakpoints,
                                PartitionNodeRule node_rule = PartitionNodeRule::LeftBreakpoint);

/// Degree-`degree` least-squares polynomial over all N raw projected pairs,
/// solved through normal equations in extended precision (degree <= 23).
MarginalPoly fit_projection_ls(const Projection& p, int degree);

/// Point-wise-mean pipeline, one fit per axis. Requires every axis to have
/// repeated abscissae (n < N); a fully projection regular axis is an error
/// directing the caller to algorithm_II.
std::vector<MarginalPoly> algorithm_I(const EvaluatedSet& es);

/// Pipeline for fully projection regular sets: per axis, partition [0, 1]
/// into n equal-width bins (every bin must be occupied) and fit the
/// degree-(n-1) least-squares polynomial to the raw projections. Averaging
/// over all N points suppresses the per-bin integration noise that an
/// interpolant through the n bin means would amplify.
std::vector<MarginalPoly> algorithm_II(const EvaluatedSet& es, int n_partitions);

/// Barycentric evaluation. Extrapolation outside [0, 1] is permitted;
/// accuracy degrades away from the nodes.
double eval_poly(const MarginalPoly& poly, double x);

/// Evaluation through the monomial-coefficient image (n <= 20 only).
double eval_poly_monomial(const MarginalPoly& poly, double x);

}  // namespace marg
