#include "ovdg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "ovdg/cd_schemes.hpp"
#include "ovdg/exact_solutions.hpp"
#include "ovdg/limiter.hpp"
#include "ovdg/time_integration.hpp"

namespace ovdg {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a real number, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const long x = std::stol(v, &used);
    if (used == v.size()) return static_cast<int>(x);
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + key + "' expects on/off, got '" + v + "'");
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::vector<std::string>& ov_keys() {
  static const std::vector<std::string> keys{"problem", "scheme", "k",       "N",       "T",         "cfl",
                                             "gamma",   "a",      "b",       "constraint", "initial", "source",
                                             "limiter", "M",      "snapshots", "samples", "stride",  "output"};
  return keys;
}

const std::vector<std::string>& cd_keys() {
  static const std::vector<std::string> keys{"problem", "scheme",    "k",      "N",         "T",
                                             "cfl",     "gamma",     "c",      "a",         "b",
                                             "soliton_k", "eta0",    "u_boundary", "snapshots", "samples",
                                             "stride",  "output"};
  return keys;
}

std::optional<Problem> problem_from(const std::string& s) {
  static const std::map<std::string, Problem> names{{"manufactured", Problem::Manufactured},
                                                    {"shock", Problem::Shock},
                                                    {"peakon", Problem::Peakon},
                                                    {"cd-one-soliton", Problem::CDOneSoliton},
                                                    {"cd-two-cuspon", Problem::CDTwoCuspon},
                                                    {"cd-two-loop", Problem::CDTwoLoop},
                                                    {"custom", Problem::Custom}};
  auto it = names.find(s);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

using Preset = std::vector<std::tuple<std::string, std::string, Origin>>;

const Origin P = Origin::Preset;
const Origin D = Origin::Default;

Preset preset_for(Problem p) {
  switch (p) {
    case Problem::Manufactured:
      return {{"scheme", "energy-dg", D}, {"k", "1", D},       {"N", "20,40,80,160,320", P},
              {"T", "1", P},              {"cfl", "0.1", P},   {"gamma", "1", P},
              {"a", "0", P},              {"b", fmt(2.0 * M_PI), P}, {"constraint", "zero-mean", P},
              {"initial", "manufactured", P}, {"source", "on", P}, {"limiter", "off", D},
              {"M", "1", D},              {"snapshots", "0,1", D}, {"samples", "4", D},
              {"stride", "1", D},         {"output", "out", D}};
    case Problem::Shock: {
      std::string times;
      for (int t = 0; t <= 36; ++t) times += (t ? "," : "") + std::to_string(t);
      return {{"scheme", "energy-dg", P}, {"k", "2", P},       {"N", "160", P},  {"T", "36", P},
              {"cfl", "0.1", P},          {"gamma", "-1", P},  {"a", "0", P},    {"b", "1", P},
              {"constraint", "zero-mean", D}, {"initial", "shock", P}, {"source", "off", P},
              {"limiter", "on", P},       {"M", "1", D},       {"snapshots", times, P},
              {"samples", "4", D},        {"stride", "1", D},  {"output", "out", D}};
    }
    case Problem::Peakon:
      return {{"scheme", "energy-dg", P}, {"k", "2", P},      {"N", "20,40,80,160", P}, {"T", "36", P},
              {"cfl", "0.1", P},          {"gamma", "-1", P}, {"a", "0", P},            {"b", "1", P},
              {"constraint", "zero-mean", D}, {"initial", "peakon", P}, {"source", "off", P},
              {"limiter", "off", P},      {"M", "1", D},      {"snapshots", "0,36", P}, {"samples", "4", D},
              {"stride", "1", D},         {"output", "out", D}};
    case Problem::CDOneSoliton:
      return {{"scheme", "cd-dg", D},    {"k", "2", P},          {"N", "20,40,80,160,320", P},
              {"T", "1", P},             {"cfl", "0.1", P},      {"gamma", "-3", P},
              {"c", "2", P},             {"a", "-20", P},        {"b", "20", P},
              {"soliton_k", "1", P},     {"eta0", "0", D},       {"u_boundary", "exact", P},
              {"snapshots", "0,1", D},   {"samples", "4", D},    {"stride", "1", D},
              {"output", "out", D}};
    case Problem::CDTwoCuspon:
      return {{"scheme", "cd-dg", D},       {"k", "2", P},        {"N", "320", P},
              {"T", "40", P},               {"cfl", "0.1", P},    {"gamma", "-3", P},
              {"c", "-2", P},               {"a", "-20", D},      {"b", "20", D},
              {"soliton_k", "2,2.6", P},    {"eta0", "-40,-52", P}, {"u_boundary", "exact", P},
              {"snapshots", "0,10,20,40", P}, {"samples", "4", D}, {"stride", "1", D},
              {"output", "out", D}};
    case Problem::CDTwoLoop:
      return {{"scheme", "cd-dg", D},       {"k", "2", P},        {"N", "320", P},
              {"T", "40", P},               {"cfl", "0.1", P},    {"gamma", "-3", P},
              {"c", "0", P},                {"a", "-20", D},      {"b", "20", D},
              {"soliton_k", "1.2,1.5", P},  {"eta0", "-24,-30", P}, {"u_boundary", "exact", P},
              {"snapshots", "0,10,20,40", P}, {"samples", "4", D}, {"stride", "1", D},
              {"output", "out", D}};
    case Problem::Custom:
      return {{"scheme", "energy-dg", D}, {"k", "1", D},      {"N", "20", D},         {"T", "1", D},
              {"cfl", "0.1", P},          {"gamma", "1", D},  {"a", "0", D},          {"b", "1", D},
              {"constraint", "zero-mean", D}, {"initial", "zero", D}, {"source", "off", D},
              {"limiter", "off", D},      {"M", "1", D},      {"snapshots", "0", D},  {"samples", "4", D},
              {"stride", "1", D},         {"output", "out", D}};
  }
  return {};
}

bool problem_is_cd(Problem p) {
  return p == Problem::CDOneSoliton || p == Problem::CDTwoCuspon || p == Problem::CDTwoLoop;
}

std::string origin_label(Origin o) {
  switch (o) {
    case Origin::Preset: return "preset";
    case Origin::Default: return "default*";
    case Origin::File: return "file";
    case Origin::Flag: return "flag";
  }
  return "?";
}

}  // namespace

KeyValues parse_key_values(std::istream& is) {
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

KeyValues read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_key_values(in);
}

bool ExperimentConfig::is_cd() const { return problem_is_cd(problem); }

ExperimentConfig ExperimentConfig::resolve(const KeyValues& file, const KeyValues& flags) {
  std::string problem_name;
  if (auto it = flags.find("problem"); it != flags.end())
    problem_name = it->second;
  else if (auto jt = file.find("problem"); jt != file.end())
    problem_name = jt->second;
  else
    throw ConfigError("no problem given (one of " + [] {
      std::string s;
      for (const auto& n : preset_names()) s += (s.empty() ? "" : ", ") + n;
      return s;
    }() + ")");
  const auto problem = problem_from(problem_name);
  if (!problem) throw ConfigError("unknown problem '" + problem_name + "'");

  ExperimentConfig cfg;
  cfg.problem = *problem;
  auto& e = cfg.entries_;
  e["problem"] = {problem_name, flags.count("problem") ? Origin::Flag : Origin::File};
  for (const auto& [key, value, origin] : preset_for(cfg.problem)) e[key] = {value, origin};

  const auto& allowed = problem_is_cd(cfg.problem) ? cd_keys() : ov_keys();
  auto apply = [&](const KeyValues& kv, Origin origin) {
    for (const auto& [key, value] : kv) {
      if (key == "problem") continue;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw ConfigError("key '" + key + "' does not apply to problem '" + problem_name + "'");
      e[key] = {value, origin};
    }
  };
  apply(file, Origin::File);
  apply(flags, Origin::Flag);

  auto get = [&](const std::string& key) -> const std::string& { return e.at(key).first; };

  cfg.scheme = get("scheme");
  cfg.k = parse_int("k", get("k"));
  for (const auto& s : split_list(get("N"))) cfg.N.push_back(parse_int("N", s));
  cfg.T = parse_real("T", get("T"));
  cfg.gamma = parse_real("gamma", get("gamma"));
  cfg.a = parse_real("a", get("a"));
  cfg.b = parse_real("b", get("b"));
  for (const auto& s : split_list(get("snapshots"))) cfg.snapshots.push_back(parse_real("snapshots", s));
  if (!(cfg.T >= 0.0)) throw ConfigError("T must be >= 0");
  // Preset frame times follow an overridden horizon: keep those inside [0, T] and end at T.
  if (e.at("snapshots").second == Origin::Preset || e.at("snapshots").second == Origin::Default) {
    const bool clipped = std::erase_if(cfg.snapshots, [&](double t) { return t > cfg.T; }) > 0;
    if (clipped) {
      cfg.snapshots.push_back(cfg.T);
      std::string joined;
      for (double t : cfg.snapshots) joined += (joined.empty() ? "" : ",") + fmt(t);
      e["snapshots"] = {joined, Origin::Default};
    }
  }
  cfg.samples = parse_int("samples", get("samples"));
  cfg.stride = parse_int("stride", get("stride"));
  cfg.output = get("output");

  if (cfg.k < 0 || cfg.k > 7) throw ConfigError("k must lie in [0, 7]");
  if (cfg.N.empty()) throw ConfigError("N needs at least one value");
  for (int n : cfg.N)
    if (n < 1) throw ConfigError("N values must be >= 1");
  if (!(cfg.a < cfg.b)) throw ConfigError("domain needs a < b");
  if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
  if (cfg.stride < 1) throw ConfigError("stride must be >= 1");
  for (double t : cfg.snapshots)
    if (t < 0.0 || t > cfg.T) throw ConfigError("snapshot time " + fmt(t) + " lies outside [0, T]");

  if (cfg.is_cd()) {
    if (cfg.scheme != "cd-dg" && cfg.scheme != "cd-int")
      throw ConfigError("CD problems take scheme cd-dg or cd-int, got '" + cfg.scheme + "'");
    // SSP-RK3 error dominates P3 CD runs at cfl 0.1.
    if (cfg.k >= 3 && e.at("cfl").second == Origin::Preset) e["cfl"] = {"0.01", Origin::Default};
    cfg.c = parse_real("c", get("c"));
    for (const auto& s : split_list(get("soliton_k"))) cfg.soliton_k.push_back(parse_real("soliton_k", s));
    for (const auto& s : split_list(get("eta0"))) cfg.eta0.push_back(parse_real("eta0", s));
    const int expected = cfg.problem == Problem::CDOneSoliton ? 1 : 2;
    if (static_cast<int>(cfg.soliton_k.size()) != expected || static_cast<int>(cfg.eta0.size()) != expected)
      throw ConfigError("soliton_k and eta0 need " + std::to_string(expected) + " value(s)");
    const std::string& ub = get("u_boundary");
    if (ub != "exact" && ub != "zero") throw ConfigError("u_boundary is exact or zero");
    cfg.exact_boundary = ub == "exact";
    try {
      SolitonParams sp{cfg.soliton_k, cfg.c, cfg.eta0, cfg.gamma};
      (void)build_tau(sp, expected);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("soliton parameters: ") + err.what());
    }
  } else {
    if (cfg.scheme != "energy-dg" && cfg.scheme != "energy-int" && cfg.scheme != "hamiltonian")
      throw ConfigError("OV problems take scheme energy-dg, energy-int or hamiltonian, got '" + cfg.scheme + "'");
    const std::string& con = get("constraint");
    if (con == "zero-mean")
      cfg.constraint = VConstraint::ZeroMean;
    else if (con == "dirichlet-left")
      cfg.constraint = VConstraint::DirichletLeft;
    else if (con == "dirichlet-right")
      cfg.constraint = VConstraint::DirichletRight;
    else
      throw ConfigError("constraint is zero-mean, dirichlet-left or dirichlet-right");
    if (cfg.gamma == 0.0) throw ConfigError("gamma must be nonzero");
    if (cfg.scheme == "energy-dg" && cfg.constraint != VConstraint::ZeroMean &&
        ((cfg.gamma > 0.0) != (cfg.constraint == VConstraint::DirichletLeft)))
      throw ConfigError("energy-dg pins v on the upwind side: dirichlet-left for gamma > 0, dirichlet-right for gamma < 0");
    if (cfg.scheme == "hamiltonian" && cfg.constraint != VConstraint::ZeroMean)
      throw ConfigError("the hamiltonian scheme needs the zero-mean constraint");
    cfg.initial = get("initial");
    static const std::set<std::string> initials{"manufactured", "shock", "peakon", "sin", "cos", "zero"};
    if (!initials.count(cfg.initial)) throw ConfigError("unknown initial profile '" + cfg.initial + "'");
    cfg.source = parse_bool("source", get("source"));
    if (cfg.source && cfg.problem != Problem::Manufactured)
      throw ConfigError("the source term belongs to the manufactured problem");
    cfg.limiter = parse_bool("limiter", get("limiter"));
    cfg.M = parse_real("M", get("M"));
    if (cfg.M < 0.0) throw ConfigError("M must be >= 0");
  }
  cfg.cfl = parse_real("cfl", get("cfl"));
  if (!(cfg.cfl > 0.0)) throw ConfigError("cfl must be > 0");
  return cfg;
}

void ExperimentConfig::echo(std::ostream& os) const {
  os << "# resolved configuration; default* marks values outside the problem definition\n";
  for (const auto& [key, entry] : entries_) os << key << " = " << entry.first << "  # " << origin_label(entry.second) << '\n';
}

std::string to_string(Problem p) {
  switch (p) {
    case Problem::Manufactured: return "manufactured";
    case Problem::Shock: return "shock";
    case Problem::Peakon: return "peakon";
    case Problem::CDOneSoliton: return "cd-one-soliton";
    case Problem::CDTwoCuspon: return "cd-two-cuspon";
    case Problem::CDTwoLoop: return "cd-two-loop";
    case Problem::Custom: return "custom";
  }
  return "?";
}

std::vector<std::string> preset_names() {
  return {"manufactured", "shock", "peakon", "cd-one-soliton", "cd-two-cuspon", "cd-two-loop", "custom"};
}

void describe_presets(std::ostream& os) {
  for (const std::string& name : preset_names()) {
    const ExperimentConfig cfg = ExperimentConfig::resolve({{"problem", name}}, {});
    os << "[" << name << "]\n";
    for (const auto& [key, entry] : cfg.entries())
      if (key != "problem") os << "  " << key << " = " << entry.first << (entry.second == Origin::Default ? "  *" : "") << '\n';
  }
  os << "(* = default outside the problem definition)\n";
}

// ---------------------------------------------------------------------------

namespace {

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%09.4f", t);
  return buf;
}

void write_outputs(const fs::path& dir, const ExperimentConfig& cfg, int n, const RunOutcome& out) {
  fs::create_directories(dir / "snapshots");
  {
    std::ofstream f(dir / "config.txt");
    cfg.echo(f);
    f << "# this run: N = " << n << '\n';
  }
  {
    std::ofstream f(dir / "timeseries.csv");
    write_timeseries_csv(f, out.report.series());
  }
  {
    std::ofstream f(dir / "summary.csv");
    write_error_csv(f, out.report.tables());
  }
  {
    std::ofstream f(dir / "summary.txt");
    f << "problem = " << to_string(cfg.problem) << "\nscheme = " << cfg.scheme << "\nk = " << cfg.k << "\nN = " << n
      << "\nsteps = " << out.steps << "\nt_final = " << format_sci(out.t_final) << '\n';
    if (!out.report.series().empty()) {
      f << "energy_nonincreasing = " << (out.report.energy_nonincreasing() ? "yes" : "no") << '\n';
      f << "hamiltonian_drift = " << format_sci(out.report.hamiltonian_drift()) << '\n';
    }
    f << '\n';
    write_error_text(f, out.report.tables());
  }
  for (const Snapshot& s : out.report.snapshots()) {
    std::ofstream f(dir / "snapshots" / (s.label + "_t" + time_tag(s.t) + ".txt"));
    write_snapshot(f, s);
  }
}

ScalarFn ov_initial(const std::string& name) {
  if (name == "manufactured") return [](double x) { return manufactured(x, 0.0); };
  if (name == "shock") return shock_initial;
  if (name == "peakon") return peakon_initial;
  if (name == "sin") return [](double x) { return std::sin(x); };
  if (name == "cos") return [](double x) { return std::cos(x); };
  return [](double) { return 0.0; };
}

std::function<double(double, double)> ov_exact(const ExperimentConfig& cfg) {
  if (cfg.problem == Problem::Manufactured) return manufactured;
  if (cfg.problem == Problem::Peakon) return peakon;
  return {};
}

OVScheme ov_scheme(const std::string& s) {
  if (s == "energy-int") return OVScheme::EnergyIntegrationDG;
  if (s == "hamiltonian") return OVScheme::HamiltonianDG;
  return OVScheme::EnergyDG;
}

Snapshot exact_samples(const Mesh1D& mesh, double t, int samples, const ScalarFn& f) {
  Snapshot s{t, "exact", {"x", "u"}, {}};
  const int last = mesh.size() - 1;
  for (int j = 0; j <= last; ++j)
    for (int i = 0; i < samples + (j == last ? 1 : 0); ++i) {
      const double x = mesh.to_global(j, -1.0 + 2.0 * i / samples);
      s.rows.push_back({x, f(x)});
    }
  return s;
}

RunOutcome run_ov(const ExperimentConfig& cfg, int n) {
  const MeshPtr mesh = build_mesh(cfg.a, cfg.b, n);
  OVConfig ovc;
  ovc.gamma = cfg.gamma;
  ovc.scheme = ov_scheme(cfg.scheme);
  ovc.constraint = cfg.constraint;
  if (cfg.source) ovc.source = manufactured_source;
  const OVOperator op(mesh, cfg.k, ovc);
  LimiterConfig lim;
  lim.enabled = cfg.limiter;
  lim.M = cfg.M;
  lim.periodic = ovc.periodic();

  DGField u0 = l2_project(ov_initial(cfg.initial), mesh, cfg.k);
  if (lim.enabled) u0 = tvb_limit(u0, lim);
  const auto exact = ov_exact(cfg);

  RunOutcome out;
  Observers<DGField> obs;
  obs.each_step = [&](long step, double t, const DGField& u) {
    if (step % cfg.stride == 0 || t == cfg.T) out.report.record_conserved(u, op.auxiliary(u), t, cfg.gamma);
  };
  obs.at_stop = [&](double t, const DGField& u) {
    out.report.add_snapshot(sample_field(u, t, cfg.samples, "u"));
    if (exact) out.report.add_snapshot(exact_samples(*mesh, t, cfg.samples, [&](double x) { return exact(x, t); }));
  };
  const StepPlan plan = StepPlan::from_cfl(cfg.cfl, mesh->h(), cfg.T, cfg.snapshots);
  auto rhs = [&](const DGField& u, double t) { return op.rhs(u, t); };
  IntegrationResult<DGField> res = lim.enabled
      ? integrate(u0, rhs, plan, obs, [&](DGField& u) { u = tvb_limit(u, lim); })
      : integrate(u0, rhs, plan, obs);
  out.steps = res.steps;
  out.t_final = res.t;

  const double length = cfg.b - cfg.a;
  if (exact) {
    const double T = res.t;
    out.report.table("u").add(n, error_norms(res.state, [&](double x) { return exact(x, T); }), length);
    if (cfg.problem == Problem::Manufactured)
      out.report.table("v").add(
          n, error_norms(op.auxiliary(res.state), [&](double x) { return manufactured_v(x, T); }), length);
  }
  return out;
}

RunOutcome run_cd(const ExperimentConfig& cfg, int n) {
  const MeshPtr mesh = build_mesh(cfg.a, cfg.b, n);
  const int n_solitons = cfg.problem == Problem::CDOneSoliton ? 1 : 2;
  const ExpSumTau tau = build_tau({cfg.soliton_k, cfg.c, cfg.eta0, cfg.gamma}, n_solitons);
  CDConfig cdc;
  cdc.gamma = cfg.gamma;
  cdc.c = cfg.c;
  cdc.scheme = cfg.scheme == "cd-int" ? CDScheme::Integration : CDScheme::DG;
  const double b = cfg.b;
  if (cfg.exact_boundary) cdc.u_boundary = [&tau, b](double s) { return cd_exact(tau, b, s).u; };
  const CDOperator op(mesh, cfg.k, cdc);

  CDVars v0{l2_project([&](double y) { return cd_exact(tau, y, 0.0).q; }, mesh, cfg.k),
            l2_project([&](double y) { return cd_exact(tau, y, 0.0).omega; }, mesh, cfg.k)};
  const double length = cfg.b - cfg.a;

  RunOutcome out;
  auto record_errors = [&](const CDState& st, double t, const std::string& suffix) {
    const int nq = default_quad_points(st.u.degree());
    out.report.table("u" + suffix).add(n, error_norms(st.u, [&](double y) { return cd_exact(tau, y, t).u; }, nq), length);
    out.report.table("q" + suffix).add(n, error_norms(st.q, [&](double y) { return cd_exact(tau, y, t).q; }), length);
    if (n_solitons == 1) {
      const ErrorNorms rho = pointwise_error(
          *mesh, [&](int j, double xi) { return 1.0 / st.q.evaluate_local(j, xi); },
          [&](double y) { return 1.0 / cd_exact(tau, y, t).q; }, default_quad_points(cfg.k));
      out.report.table("rho" + suffix).add(n, rho, length);
    }
  };

  Observers<CDVars> obs;
  obs.at_stop = [&](double t, const CDVars& v) {
    const CDState st = op.state(v, t);
    const double x_ref = cd_exact(tau, cfg.a, t).x;
    Snapshot tr{t, "transformed", {"y", "u", "q"}, {}};
    Snapshot ph{t, "physical", {"x", "u"}, {}};
    Snapshot ex_tr{t, "exact_transformed", {"y", "u", "q"}, {}};
    Snapshot ex_ph{t, "exact_physical", {"x", "u"}, {}};
    for (const ProfilePoint& p : hodograph_profile(st, x_ref, cfg.samples)) {
      tr.rows.push_back({p.y, p.u, p.q});
      ph.rows.push_back({p.x, p.u});
      const CDExact ex = cd_exact(tau, p.y, t);
      ex_tr.rows.push_back({p.y, ex.u, ex.q});
      ex_ph.rows.push_back({ex.x, ex.u});
    }
    out.report.add_snapshot(std::move(tr));
    out.report.add_snapshot(std::move(ph));
    out.report.add_snapshot(std::move(ex_tr));
    out.report.add_snapshot(std::move(ex_ph));
    if (t != cfg.T) record_errors(st, t, "@t=" + format_sci(t));
  };
  const StepPlan plan = StepPlan::from_cfl(cfg.cfl, mesh->h(), cfg.T, cfg.snapshots);
  const auto res = integrate(v0, [&](const CDVars& v, double s) { return op.rhs(v, s); }, plan, obs);
  out.steps = res.steps;
  out.t_final = res.t;
  record_errors(op.state(res.state, res.t), res.t, "");
  return out;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, int n_cells, const fs::path& outdir) {
  RunOutcome out = cfg.is_cd() ? run_cd(cfg, n_cells) : run_ov(cfg, n_cells);
  if (!outdir.empty()) write_outputs(outdir, cfg, n_cells, out);
  return out;
}

RunReport run_convergence(const ExperimentConfig& cfg, const fs::path& outdir) {
  std::vector<int> ns = cfg.N;
  if (ns.size() > 1) {
    std::vector<double> dummy(ns.size(), 1.0);
    try {
      (void)convergence_orders(ns, dummy);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  RunReport merged;
  for (int n : ns) {
    RunReport r = run_experiment(cfg, n, outdir.empty() ? fs::path{} : outdir / ("N" + std::to_string(n))).report;
    RunReport tables_only;
    for (const ErrorTable& t : r.tables())
      for (const ErrorRow& row : t.rows) tables_only.table(t.variable).add(row);
    merged.merge(tables_only);
  }
  if (!outdir.empty()) {
    fs::create_directories(outdir);
    {
      std::ofstream f(outdir / "config.txt");
      cfg.echo(f);
    }
    std::ofstream csv(outdir / "table.csv");
    write_error_csv(csv, merged.tables());
    std::ofstream txt(outdir / "table.txt");
    write_error_text(txt, merged.tables());
  }
  return merged;
}

}  // namespace ovdg
