#ifndef OVDG_DIAGNOSTICS_HPP
#define OVDG_DIAGNOSTICS_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ovdg/mesh_basis.hpp"

namespace ovdg {

/// Observed orders log(e_{i-1}/e_i) / log(N_i/N_{i-1}); one entry fewer than the input.
/// Throws std::invalid_argument unless N doubles at every step, or allow_general_ratio is set
/// and N is strictly increasing.
std::vector<double> convergence_orders(const std::vector<int>& n, const std::vector<double>& errors,
                                       bool allow_general_ratio = false);

/// L2 error rescaled to sqrt(int e^2 / (4 (b-a))), the normalization of the published tables.
double table_l2(double l2, double length);

struct ErrorRow {
  int N = 0;
  double l2 = 0.0;
  double linf = 0.0;
  double l2_table = 0.0;
};

struct ErrorTable {
  std::string variable;
  std::vector<ErrorRow> rows;  // sorted by N

  void add(int n, const ErrorNorms& e, double length);
  void add(const ErrorRow& row);
  /// Orders aligned with rows; the first entry is empty.
  std::vector<std::optional<double>> l2_orders() const;
  std::vector<std::optional<double>> linf_orders() const;
};

struct ConservedRow {
  double t = 0.0;
  double E = 0.0;
  double H = 0.0;
};

struct Snapshot {
  double t = 0.0;
  std::string label;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

class RunReport {
 public:
  ErrorTable& table(const std::string& variable);
  const ErrorTable* find_table(const std::string& variable) const;
  const std::vector<ErrorTable>& tables() const { return tables_; }

  void record_conserved(double t, double E, double H) { series_.push_back({t, E, H}); }
  void record_conserved(const DGField& u, const DGField& v, double t, double gamma = 1.0);
  const std::vector<ConservedRow>& series() const { return series_; }

  void add_snapshot(Snapshot s) { snapshots_.push_back(std::move(s)); }
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }

  /// Union of two reports; rows, series and snapshots are kept sorted so merging is associative.
  void merge(const RunReport& other);

  /// E_{n+1} <= E_n (1 + rel_tol) along the recorded series.
  bool energy_nonincreasing(double rel_tol = 1e-10) const;
  /// max_n |H_n - H_0| / |H_0| (absolute drift when H_0 = 0).
  double hamiltonian_drift() const;

 private:
  std::vector<ErrorTable> tables_;
  std::vector<ConservedRow> series_;
  std::vector<Snapshot> snapshots_;
};

std::string format_sci(double x);

void write_error_csv(std::ostream& os, const std::vector<ErrorTable>& tables);
std::vector<ErrorTable> parse_error_csv(std::istream& is);
/// Aligned text version of the error table, one block per variable.
void write_error_text(std::ostream& os, const std::vector<ErrorTable>& tables);

void write_timeseries_csv(std::ostream& os, const std::vector<ConservedRow>& series);
std::vector<ConservedRow> parse_timeseries_csv(std::istream& is);

/// Whitespace columns with a "# t=... columns: ..." comment header.
void write_snapshot(std::ostream& os, const Snapshot& s);
Snapshot parse_snapshot(std::istream& is);

/// Equispaced (x, u) samples of an OV field, samples_per_cell points per cell plus the right end.
/// Error norms of a pointwise quantity numeric(j, xi) against exact(x), sampled like error_norms.
ErrorNorms pointwise_error(const Mesh1D& mesh, const std::function<double(int, double)>& numeric,
                           const ScalarFn& exact, int n_quad);

Snapshot sample_field(const DGField& u, double t, int samples_per_cell, const std::string& name = "u");

}  // namespace ovdg

#endif
