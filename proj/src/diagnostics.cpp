#include "ovdg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ovdg/ov_schemes.hpp"

namespace ovdg {

std::vector<double> convergence_orders(const std::vector<int>& n, const std::vector<double>& errors,
                                       bool allow_general_ratio) {
  if (n.size() != errors.size()) throw std::invalid_argument("convergence_orders: size mismatch");
  std::vector<double> out;
  for (size_t i = 1; i < n.size(); ++i) {
    if (!allow_general_ratio && n[i] != 2 * n[i - 1])
      throw std::invalid_argument("convergence_orders: N must double between rows (got " + std::to_string(n[i - 1]) +
                                  " -> " + std::to_string(n[i]) + ")");
    if (n[i] <= n[i - 1]) throw std::invalid_argument("convergence_orders: N must be strictly increasing");
    out.push_back(std::log(errors[i - 1] / errors[i]) / std::log(static_cast<double>(n[i]) / n[i - 1]));
  }
  return out;
}

double table_l2(double l2, double length) { return l2 / (2.0 * std::sqrt(length)); }

void ErrorTable::add(int n, const ErrorNorms& e, double length) { add({n, e.l2, e.linf, table_l2(e.l2, length)}); }

void ErrorTable::add(const ErrorRow& row) {
  auto it = std::lower_bound(rows.begin(), rows.end(), row.N, [](const ErrorRow& r, int v) { return r.N < v; });
  if (it != rows.end() && it->N == row.N)
    *it = row;
  else
    rows.insert(it, row);
}

namespace {

std::vector<std::optional<double>> orders_of(const ErrorTable& t, double ErrorRow::*field) {
  std::vector<int> n;
  std::vector<double> e;
  for (const ErrorRow& r : t.rows) {
    n.push_back(r.N);
    e.push_back(r.*field);
  }
  std::vector<std::optional<double>> out(t.rows.size());
  if (t.rows.size() < 2) return out;
  const std::vector<double> o = convergence_orders(n, e, true);
  for (size_t i = 0; i < o.size(); ++i) out[i + 1] = o[i];
  return out;
}

}  // namespace

std::vector<std::optional<double>> ErrorTable::l2_orders() const { return orders_of(*this, &ErrorRow::l2); }
std::vector<std::optional<double>> ErrorTable::linf_orders() const { return orders_of(*this, &ErrorRow::linf); }

ErrorTable& RunReport::table(const std::string& variable) {
  for (ErrorTable& t : tables_)
    if (t.variable == variable) return t;
  tables_.push_back({variable, {}});
  return tables_.back();
}

const ErrorTable* RunReport::find_table(const std::string& variable) const {
  for (const ErrorTable& t : tables_)
    if (t.variable == variable) return &t;
  return nullptr;
}

void RunReport::record_conserved(const DGField& u, const DGField& v, double t, double gamma) {
  record_conserved(t, energy(u), hamiltonian(u, v, gamma));
}

void RunReport::merge(const RunReport& other) {
  for (const ErrorTable& t : other.tables_) {
    ErrorTable& mine = table(t.variable);
    for (const ErrorRow& r : t.rows) mine.add(r);
  }
  std::sort(tables_.begin(), tables_.end(),
            [](const ErrorTable& a, const ErrorTable& b) { return a.variable < b.variable; });
  series_.insert(series_.end(), other.series_.begin(), other.series_.end());
  std::stable_sort(series_.begin(), series_.end(),
                   [](const ConservedRow& a, const ConservedRow& b) { return a.t < b.t; });
  snapshots_.insert(snapshots_.end(), other.snapshots_.begin(), other.snapshots_.end());
  std::stable_sort(snapshots_.begin(), snapshots_.end(), [](const Snapshot& a, const Snapshot& b) {
    return a.t != b.t ? a.t < b.t : a.label < b.label;
  });
}

bool RunReport::energy_nonincreasing(double rel_tol) const {
  for (size_t i = 1; i < series_.size(); ++i)
    if (series_[i].E > series_[i - 1].E * (1.0 + rel_tol)) return false;
  return true;
}

double RunReport::hamiltonian_drift() const {
  if (series_.empty()) return 0.0;
  const double h0 = series_.front().H;
  double drift = 0.0;
  for (const ConservedRow& r : series_) drift = std::max(drift, std::abs(r.H - h0));
  return h0 != 0.0 ? drift / std::abs(h0) : drift;
}

std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", x);
  return buf;
}

namespace {

std::string opt_sci(const std::optional<double>& x) { return x ? format_sci(*x) : std::string(); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

}  // namespace

void write_error_csv(std::ostream& os, const std::vector<ErrorTable>& tables) {
  os << "variable,N,L2,order_L2,Linf,order_Linf,L2_table\n";
  for (const ErrorTable& t : tables) {
    const auto o2 = t.l2_orders();
    const auto oi = t.linf_orders();
    for (size_t i = 0; i < t.rows.size(); ++i)
      os << t.variable << ',' << t.rows[i].N << ',' << format_sci(t.rows[i].l2) << ',' << opt_sci(o2[i]) << ','
         << format_sci(t.rows[i].linf) << ',' << opt_sci(oi[i]) << ',' << format_sci(t.rows[i].l2_table) << '\n';
  }
}

std::vector<ErrorTable> parse_error_csv(std::istream& is) {
  std::vector<ErrorTable> out;
  std::string line;
  if (!std::getline(is, line) || line.rfind("variable,N", 0) != 0)
    throw std::invalid_argument("error table: missing header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 7) throw std::invalid_argument("error table: expected 7 columns: " + line);
    if (out.empty() || out.back().variable != cells[0]) out.push_back({cells[0], {}});
    out.back().rows.push_back({std::stoi(cells[1]), to_double(cells[2]), to_double(cells[4]), to_double(cells[6])});
  }
  return out;
}

void write_error_text(std::ostream& os, const std::vector<ErrorTable>& tables) {
  char buf[160];
  for (const ErrorTable& t : tables) {
    os << "variable " << t.variable << '\n';
    std::snprintf(buf, sizeof buf, "%8s  %12s  %6s  %12s  %6s  %12s\n", "N", "L2 error", "order", "Linf error", "order",
                  "L2 (table)");
    os << buf;
    const auto o2 = t.l2_orders();
    const auto oi = t.linf_orders();
    for (size_t i = 0; i < t.rows.size(); ++i) {
      char a[16] = "-", b[16] = "-";
      if (o2[i]) std::snprintf(a, sizeof a, "%.2f", *o2[i]);
      if (oi[i]) std::snprintf(b, sizeof b, "%.2f", *oi[i]);
      std::snprintf(buf, sizeof buf, "%8d  %12.2e  %6s  %12.2e  %6s  %12.2e\n", t.rows[i].N, t.rows[i].l2, a,
                    t.rows[i].linf, b, t.rows[i].l2_table);
      os << buf;
    }
    os << '\n';
  }
}

void write_timeseries_csv(std::ostream& os, const std::vector<ConservedRow>& series) {
  os << "t,E,H\n";
  for (const ConservedRow& r : series) os << format_sci(r.t) << ',' << format_sci(r.E) << ',' << format_sci(r.H) << '\n';
}

std::vector<ConservedRow> parse_timeseries_csv(std::istream& is) {
  std::vector<ConservedRow> out;
  std::string line;
  if (!std::getline(is, line) || line != "t,E,H") throw std::invalid_argument("time series: missing header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw std::invalid_argument("time series: expected 3 columns: " + line);
    out.push_back({to_double(cells[0]), to_double(cells[1]), to_double(cells[2])});
  }
  return out;
}

void write_snapshot(std::ostream& os, const Snapshot& s) {
  os << "# t=" << format_sci(s.t);
  if (!s.label.empty()) os << " label=" << s.label;
  os << " columns:";
  for (const std::string& c : s.columns) os << ' ' << c;
  os << '\n';
  char buf[32];
  for (const auto& row : s.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.10e", row[i]);
      os << (i ? " " : "") << buf;
    }
    os << '\n';
  }
}

Snapshot parse_snapshot(std::istream& is) {
  Snapshot s;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# t=", 0) != 0) throw std::invalid_argument("snapshot: missing header");
  std::istringstream head(line.substr(4));
  std::string tok;
  head >> tok;
  s.t = to_double(tok);
  bool in_columns = false;
  while (head >> tok) {
    if (in_columns)
      s.columns.push_back(tok);
    else if (tok == "columns:")
      in_columns = true;
    else if (tok.rfind("label=", 0) == 0)
      s.label = tok.substr(6);
  }
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::vector<double> vals;
    while (row >> tok) vals.push_back(to_double(tok));
    if (vals.size() != s.columns.size()) throw std::invalid_argument("snapshot: column count mismatch");
    s.rows.push_back(std::move(vals));
  }
  return s;
}

ErrorNorms pointwise_error(const Mesh1D& mesh, const std::function<double(int, double)>& numeric,
                           const ScalarFn& exact, int n_quad) {
  const QuadRule& rule = gauss_rule(n_quad);
  ErrorNorms e;
  double sum = 0.0;
  for (int j = 0; j < mesh.size(); ++j) {
    double cell = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      const double d = numeric(j, xi) - exact(mesh.to_global(j, xi));
      cell += rule.weights[q] * d * d;
      e.linf = std::max(e.linf, std::abs(d));
    }
    for (double xi : {-1.0, 1.0}) e.linf = std::max(e.linf, std::abs(numeric(j, xi) - exact(mesh.to_global(j, xi))));
    sum += 0.5 * mesh.h(j) * cell;
  }
  e.l2 = std::sqrt(sum);
  return e;
}

Snapshot sample_field(const DGField& u, double t, int samples_per_cell, const std::string& name) {
  if (samples_per_cell < 1) throw std::invalid_argument("sample_field needs samples_per_cell >= 1");
  Snapshot s{t, name, {"x", name}, {}};
  const int last = u.n_cells() - 1;
  for (int j = 0; j <= last; ++j) {
    const int count = samples_per_cell + (j == last ? 1 : 0);
    for (int i = 0; i < count; ++i) {
      const double xi = -1.0 + 2.0 * i / samples_per_cell;
      s.rows.push_back({u.mesh().to_global(j, xi), u.evaluate_local(j, xi)});
    }
  }
  return s;
}

}  // namespace ovdg
