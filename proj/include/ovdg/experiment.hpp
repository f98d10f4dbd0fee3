#ifndef OVDG_EXPERIMENT_HPP
#define OVDG_EXPERIMENT_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ovdg/diagnostics.hpp"
#include "ovdg/ov_schemes.hpp"

namespace ovdg {

enum class Problem { Manufactured, Shock, Peakon, CDOneSoliton, CDTwoCuspon, CDTwoLoop, Custom };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Where a resolved value came from. Default marks values outside the problem definition.
enum class Origin { Preset, Default, File, Flag };

using KeyValues = std::map<std::string, std::string>;

/// Flat key = value text; '#' starts a comment.
KeyValues parse_key_values(std::istream& is);
KeyValues read_config_file(const std::filesystem::path& path);

struct ExperimentConfig {
  Problem problem = Problem::Manufactured;
  std::string scheme;  // energy-dg | energy-int | hamiltonian | cd-dg | cd-int
  int k = 1;
  std::vector<int> N;
  double T = 1.0;
  double cfl = 0.1;
  double gamma = 1.0;
  double c = 0.0;
  double a = 0.0;
  double b = 1.0;
  VConstraint constraint = VConstraint::ZeroMean;
  std::string initial;  // custom problems: sin | cos | shock | peakon | zero
  bool source = false;
  bool limiter = false;
  double M = 1.0;
  std::vector<double> soliton_k;
  std::vector<double> eta0;
  bool exact_boundary = true;
  std::vector<double> snapshots;
  int samples = 4;
  int stride = 1;
  std::string output = "out";

  /// Preset, then file values, then flags; every key is validated and typed.
  static ExperimentConfig resolve(const KeyValues& file, const KeyValues& flags);

  bool is_cd() const;
  /// Resolved config echo: one "key = value  # origin" line per key.
  void echo(std::ostream& os) const;
  const std::map<std::string, std::pair<std::string, Origin>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::pair<std::string, Origin>> entries_;
};

std::string to_string(Problem p);
std::vector<std::string> preset_names();
/// Preset table for list-presets.
void describe_presets(std::ostream& os);

struct RunOutcome {
  RunReport report;
  long steps = 0;
  double t_final = 0.0;
};

/// One simulation at resolution n_cells. Files are written only when outdir is non-empty.
RunOutcome run_experiment(const ExperimentConfig& cfg, int n_cells, const std::filesystem::path& outdir = {});

/// Every N in cfg.N (doubling enforced); per-N subdirectories plus table.csv and table.txt.
RunReport run_convergence(const ExperimentConfig& cfg, const std::filesystem::path& outdir = {});

}  // namespace ovdg

#endif
