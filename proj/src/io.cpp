#include "marg/io.hpp"

#include <cstdio>
#include <ostream>

namespace marg {

namespace {

void write_row_csv(std::ostream& os, const StudyRow& row) {
  for (std::size_t j = 0; j < row.per_axis.size(); ++j) {
    const ErrorReport& r = row.per_axis[j];
    os << row.kind << ',' << row.point_count << ',' << row.nodes << ',' << fmt_g17(row.multiplicity)
       << ',' << r.axis << ',' << fmt_g17(r.sup_error) << ',' << fmt_g17(r.l2_error) << '\n';
  }
}

nlohmann::json row_to_json(const StudyRow& row) {
  nlohmann::json axes = nlohmann::json::array();
  for (std::size_t j = 0; j < row.per_axis.size(); ++j) {
    const ErrorReport& r = row.per_axis[j];
    nlohmann::json a{{"axis", r.axis}, {"sup_error", r.sup_error}, {"l2_error", r.l2_error}};
    if (!row.sup_error_std.empty()) a["sup_error_std"] = row.sup_error_std[j];
    axes.push_back(std::move(a));
  }
  nlohmann::json j{{"kind", row.kind},
                   {"N", row.point_count},
                   {"n", row.nodes},
                   {"m", row.multiplicity},
                   {"axes", std::move(axes)}};
  if (row.seeds > 1) j["seeds"] = row.seeds;
  return j;
}

}  // namespace

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_pointset_csv(std::ostream& os, const PointSet& ps) {
  os << "# " << ps.descriptor() << '\n';
  for (std::size_t i = 0; i < ps.count; ++i) {
    for (int j = 0; j < ps.dim; ++j) {
      if (j) os << ',';
      os << fmt_g17(ps.at(i, j));
    }
    os << '\n';
  }
}

void write_rational_sidecar(std::ostream& os, const PointSet& ps) {
  if (!ps.has_rational()) throw ArgError("point set has no exact coordinates to serialize");
  os << "# " << ps.descriptor() << ",den=" << ps.rational_den << '\n';
  for (std::size_t i = 0; i < ps.count; ++i) {
    for (int j = 0; j < ps.dim; ++j) {
      if (j) os << ',';
      const Rational q = ps.rational_at(i, j);
      os << q.num << '/' << q.den;
    }
    os << '\n';
  }
}

void write_psi_csv(std::ostream& os, const EvaluatedSet& es) {
  os << "# psi," << es.points.descriptor() << '\n';
  for (int j = 0; j < es.points.dim; ++j) os << 'x' << j << ',';
  os << "f\n";
  for (std::size_t i = 0; i < es.points.count; ++i) {
    for (int j = 0; j < es.points.dim; ++j) os << fmt_g17(es.points.at(i, j)) << ',';
    os << fmt_g17(es.values[i]) << '\n';
  }
}

nlohmann::json poly_to_json(const MarginalPoly& poly) {
  const char* mode = poly.mode == PolyMode::PointwiseMean    ? "pointwise_mean"
                     : poly.mode == PolyMode::PartitionMean ? "partition_mean"
                                                            : "projection_ls";
  nlohmann::json j{{"axis", poly.axis},
                   {"degree", poly.degree()},
                   {"nodes", poly.nodes},
                   {"node_values", poly.node_values},
                   {"mode", mode}};
  if (!poly.breakpoints.empty()) j["breakpoints"] = poly.breakpoints;
  return j;
}

void write_poly_csv(std::ostream& os, const MarginalPoly& poly,
                    const std::function<double(double)>* truth, std::size_t grid_size) {
  if (grid_size < 2) throw ArgError("write_poly_csv: grid size must be >= 2");
  os << (truth ? "x,y_hat,y_true\n" : "x,y_hat\n");
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double x = static_cast<double>(g) / static_cast<double>(grid_size - 1);
    os << fmt_g17(x) << ',' << fmt_g17(eval_poly(poly, x));
    if (truth) os << ',' << fmt_g17((*truth)(x));
    os << '\n';
  }
}

void write_report_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "kind,N,n,m,axis,sup_error,l2_error\n";
  for (const StudyRow& row : report.rows) write_row_csv(os, row);
}

nlohmann::json report_to_json(const ConvergenceReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const StudyRow& row : report.rows) rows.push_back(row_to_json(row));
  return nlohmann::json{{"rows", std::move(rows)},
                        {"trend_ok", report.trend_ok},
                        {"eval_grid", report.grid_size}};
}

void write_comparison_csv(std::ostream& os, const ComparisonReport& report) {
  os << "kind,N,n,m,axis,sup_error,l2_error\n";
  write_row_csv(os, report.lattice);
  write_row_csv(os, report.grid);
}

nlohmann::json comparison_to_json(const ComparisonReport& report) {
  return nlohmann::json{{"lattice", row_to_json(report.lattice)},
                        {"grid", row_to_json(report.grid)},
                        {"lattice_better", report.lattice_better},
                        {"eval_grid", report.grid_size}};
}

}  // namespace marg
