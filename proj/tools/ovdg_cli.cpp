#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <type_traits>
#include <string>
#include <vector>

#include "ovdg/experiment.hpp"
#include "ovdg/time_integration.hpp"

namespace {

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kRuntime = 3 };

struct Flags {
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::string> problem, scheme, n, output, snapshots, limiter, constraint;
  std::optional<int> k;
  std::optional<double> T, cfl, gamma, c, M;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_file, "key = value configuration file");
  cmd->add_option("--problem", f.problem, "preset problem (see list-presets)");
  cmd->add_option("--scheme", f.scheme, "energy-dg | energy-int | hamiltonian | cd-dg | cd-int");
  cmd->add_option("-k,--degree", f.k, "polynomial degree");
  cmd->add_option("-N,--cells", f.n, "cell count, or a comma list for convergence");
  cmd->add_option("-T,--final-time", f.T, "final time");
  cmd->add_option("--cfl", f.cfl, "dt = cfl * h");
  cmd->add_option("--gamma", f.gamma, "OV coefficient gamma");
  cmd->add_option("--c", f.c, "two-component coupling c");
  cmd->add_option("--limiter", f.limiter, "on | off");
  cmd->add_option("--M", f.M, "TVB constant");
  cmd->add_option("--constraint", f.constraint, "zero-mean | dirichlet-left | dirichlet-right");
  cmd->add_option("--snapshots", f.snapshots, "comma list of snapshot times");
  cmd->add_option("-o,--output", f.output, "output directory");
  cmd->add_option("--set", f.sets, "extra key=value override (repeatable)");
}

ovdg::KeyValues flag_values(const Flags& f) {
  ovdg::KeyValues kv;
  for (const std::string& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ovdg::ConfigError("--set expects key=value, got '" + s + "'");
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  auto put = [&](const char* key, const auto& opt) {
    if (!opt) return;
    if constexpr (std::is_same_v<std::decay_t<decltype(*opt)>, std::string>)
      kv[key] = *opt;
    else {
      std::ostringstream ss;
      ss.precision(17);
      ss << *opt;
      kv[key] = ss.str();
    }
  };
  put("problem", f.problem);
  put("scheme", f.scheme);
  put("N", f.n);
  put("output", f.output);
  put("snapshots", f.snapshots);
  put("limiter", f.limiter);
  put("constraint", f.constraint);
  put("k", f.k);
  put("T", f.T);
  put("cfl", f.cfl);
  put("gamma", f.gamma);
  put("c", f.c);
  put("M", f.M);
  return kv;
}

ovdg::ExperimentConfig load(const Flags& f) {
  const ovdg::KeyValues file = f.config_file.empty() ? ovdg::KeyValues{} : ovdg::read_config_file(f.config_file);
  return ovdg::ExperimentConfig::resolve(file, flag_values(f));
}

void print_tables(const ovdg::RunReport& r) { ovdg::write_error_text(std::cout, r.tables()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DG solver for the Ostrovsky-Vakhnenko equation and its hodograph CD system"};
  app.require_subcommand(1);
  Flags run_flags, conv_flags;
  CLI::App* run = app.add_subcommand("run", "one simulation (the first N if a list is given)");
  add_common(run, run_flags);
  CLI::App* conv = app.add_subcommand("convergence", "error/order table over a doubling N sweep");
  add_common(conv, conv_flags);
  app.add_subcommand("list-presets", "show every preset and its parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (app.got_subcommand("list-presets")) {
      ovdg::describe_presets(std::cout);
      return kOk;
    }
    if (app.got_subcommand(run)) {
      const ovdg::ExperimentConfig cfg = load(run_flags);
      const int n = cfg.N.front();
      const ovdg::RunOutcome out = ovdg::run_experiment(cfg, n, cfg.output);
      std::cout << ovdg::to_string(cfg.problem) << " " << cfg.scheme << " k=" << cfg.k << " N=" << n
                << ": " << out.steps << " steps to t=" << out.t_final << ", output in " << cfg.output << "\n";
      print_tables(out.report);
      return kOk;
    }
    const ovdg::ExperimentConfig cfg = load(conv_flags);
    const ovdg::RunReport r = ovdg::run_convergence(cfg, cfg.output);
    print_tables(r);
    std::cout << "table written to " << cfg.output << "/table.csv\n";
    return kOk;
  } catch (const ovdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ovdg::NonFiniteState& e) {
    std::cerr << "runtime abort: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
