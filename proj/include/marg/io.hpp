#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "marg/analysis.hpp"
#include "marg/evaluation.hpp"
#include "marg/marginal.hpp"

namespace marg {

/// Shortest exact decimal form used by every CSV writer ("%.17g").
std::string fmt_g17(double v);

/// "# kind=...,N=...,s=...,..." then one row per point, comma-separated.
void write_pointset_csv(std::ostream& os, const PointSet& ps);

/// Exact coordinates as "p/q" strings, same layout as the point CSV.
/// Only valid when the set carries rationals.
void write_rational_sidecar(std::ostream& os, const PointSet& ps);

/// Sample matrix: s coordinate columns then the value column.
void write_psi_csv(std::ostream& os, const EvaluatedSet& es);

/// {axis, degree, nodes, node_values, mode, breakpoints?}
nlohmann::json poly_to_json(const MarginalPoly& poly);

/// Plot data: x, y_hat and optionally y_true over an equidistant grid.
void write_poly_csv(std::ostream& os, const MarginalPoly& poly,
                    const std::function<double(double)>* truth, std::size_t grid_size);

/// One row per (point set, axis): kind,N,n,m,axis,sup_error,l2_error.
void write_report_csv(std::ostream& os, const ConvergenceReport& report);
nlohmann::json report_to_json(const ConvergenceReport& report);

void write_comparison_csv(std::ostream& os, const ComparisonReport& report);
nlohmann::json comparison_to_json(const ComparisonReport& report);

}  // namespace marg
