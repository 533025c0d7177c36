#include "nsac/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nsac {

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::ConvergenceSpace: return "convergence-space";
    case ExperimentKind::ConvergenceTime: return "convergence-time";
    case ExperimentKind::Energy: return "energy";
    case ExperimentKind::SingleRun: return "single-run";
  }
  return "?";
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Manufactured: return "manufactured";
    case InitialKind::TwoInterface: return "two-interface";
    case InitialKind::Constant: return "constant";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// section -> key -> value, with every key tracked for consumption.
struct KeyValues {
  std::map<std::string, std::string> values;
  mutable std::set<std::string> consumed;

  bool has(const std::string& key) const { return values.count(key) > 0; }

  std::string take(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end())
      throw ConfigError("missing required key '" + key + "'");
    consumed.insert(key);
    return it->second;
  }

  std::string take_or(const std::string& key, const std::string& dflt) const {
    if (!has(key)) return dflt;
    return take(key);
  }
};

double parse_double(const std::string& key, const std::string& text) {
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse number from '" + text +
                      "'");
  }
}

int parse_int(const std::string& key, const std::string& text) {
  try {
    size_t pos = 0;
    const long v = std::stol(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse integer from '" + text +
                      "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, KeyValues> sections;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      sections[section];
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto& kv = sections[section];
    if (kv.values.count(key))
      throw ConfigError("duplicate key '" + section + "." + key + "'");
    kv.values[key] = value;
  }

  static const std::set<std::string> known_sections = {"experiment", "physics",
                                                       "flux", "solver"};
  for (const auto& [name, kv] : sections) {
    (void)kv;
    if (!known_sections.count(name))
      throw ConfigError("unknown section '" + name + "'");
  }

  ExperimentConfig cfg;
  {
    auto it = sections.find("experiment");
    if (it == sections.end()) throw ConfigError("missing [experiment] section");
    const KeyValues& kv = it->second;
    const std::string kind = kv.take("kind");
    if (kind == "convergence-space") cfg.kind = ExperimentKind::ConvergenceSpace;
    else if (kind == "convergence-time") cfg.kind = ExperimentKind::ConvergenceTime;
    else if (kind == "energy") cfg.kind = ExperimentKind::Energy;
    else if (kind == "single-run") cfg.kind = ExperimentKind::SingleRun;
    else throw ConfigError("unknown experiment kind '" + kind + "'");

    cfg.degree = parse_int("degree", kv.take("degree"));
    for (const std::string& s : split_list(kv.take("cells")))
      cfg.cells.push_back(parse_int("cells", s));
    if (kv.has("dt"))
      for (const std::string& s : split_list(kv.take("dt")))
        cfg.dts.push_back(parse_double("dt", s));
    cfg.t_end = parse_double("t_end", kv.take("t_end"));

    const std::string init = kv.take("initial");
    if (init == "manufactured") cfg.initial = InitialKind::Manufactured;
    else if (init == "two-interface") cfg.initial = InitialKind::TwoInterface;
    else if (init == "constant") cfg.initial = InitialKind::Constant;
    else throw ConfigError("unknown initial condition '" + init + "'");

    cfg.output = kv.take_or("output", "");
    if (kv.has("eta_list"))
      for (const std::string& s : split_list(kv.take("eta_list")))
        cfg.eta_list.push_back(parse_double("eta_list", s));
    if (kv.has("rho0_const"))
      cfg.rho0_const = parse_double("rho0_const", kv.take("rho0_const"));
    if (kv.has("rho_liquid"))
      cfg.rho_liquid = parse_double("rho_liquid", kv.take("rho_liquid"));
    if (kv.has("rho_vapor"))
      cfg.rho_vapor = parse_double("rho_vapor", kv.take("rho_vapor"));
    cfg.field_dump = kv.take_or("field_dump", "");
    cfg.dump_every = parse_int("dump_every", kv.take_or("dump_every", "1"));
    cfg.max_cells = parse_int("max_cells", kv.take_or("max_cells", "0"));
  }
  {
    auto it = sections.find("physics");
    if (it == sections.end()) throw ConfigError("missing [physics] section");
    const KeyValues& kv = it->second;
    cfg.physics.liquid.alpha = parse_double("alpha_liquid", kv.take("alpha_liquid"));
    cfg.physics.liquid.beta = parse_double("beta_liquid", kv.take("beta_liquid"));
    cfg.physics.liquid.gamma_c = parse_double("gammac_liquid", kv.take("gammac_liquid"));
    cfg.physics.vapor.alpha = parse_double("alpha_vapor", kv.take("alpha_vapor"));
    cfg.physics.vapor.beta = parse_double("beta_vapor", kv.take("beta_vapor"));
    cfg.physics.vapor.gamma_c = parse_double("gammac_vapor", kv.take("gammac_vapor"));
    cfg.physics.a = parse_double("a", kv.take("a"));
    cfg.physics.gamma = parse_double("gamma", kv.take("gamma"));
    cfg.physics.eta = parse_double("eta", kv.take("eta"));
    cfg.physics.nu_liquid = parse_double("nu_liquid", kv.take("nu_liquid"));
    cfg.physics.nu_vapor = parse_double("nu_vapor", kv.take("nu_vapor"));
  }
  {
    auto it = sections.find("flux");
    if (it == sections.end()) throw ConfigError("missing [flux] section");
    const KeyValues& kv = it->second;
    cfg.flux.alphaB = parse_double("alpha_B", kv.take("alpha_B"));
    cfg.flux.alpha1 = parse_double("alpha1", kv.take("alpha1"));
    cfg.flux.alpha2 = parse_double("alpha2", kv.take("alpha2"));
    cfg.flux.alpha3 = parse_double("alpha3", kv.take("alpha3"));
  }
  {
    auto it = sections.find("solver");
    if (it == sections.end()) throw ConfigError("missing [solver] section");
    const KeyValues& kv = it->second;
    cfg.solver.newton_abs_tol = parse_double("newton_tol", kv.take("newton_tol"));
    cfg.solver.newton_max_iter = parse_int("newton_max_iter", kv.take("newton_max_iter"));
    cfg.solver.linear_abs_tol = parse_double("linear_tol", kv.take("linear_tol"));
    cfg.solver.max_step_halvings = parse_int("max_step_halvings", kv.take("max_step_halvings"));
    const std::string lin = kv.take_or("linear_solver", "direct");
    if (lin == "direct") cfg.solver.linear_solver = LinearSolverKind::Direct;
    else if (lin == "bicgstab") cfg.solver.linear_solver = LinearSolverKind::Bicgstab;
    else throw ConfigError("unknown linear_solver '" + lin + "'");
  }

  for (const auto& [name, kv] : sections)
    for (const auto& [key, value] : kv.values) {
      (void)value;
      if (!kv.consumed.count(key))
        throw ConfigError("unknown key '" + name + "." + key + "'");
    }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void ExperimentConfig::validate() const {
  if (degree < 0 || degree > 8)
    throw ConfigError("degree must be in 0..8");
  if (cells.empty()) throw ConfigError("cells must not be empty");
  for (int n : cells)
    if (n < 1) throw ConfigError("cell counts must be >= 1");
  {
    std::set<int> uniq(cells.begin(), cells.end());
    if (uniq.size() != cells.size())
      throw ConfigError("duplicate cell counts");
  }
  if (!(t_end > 0.0)) throw ConfigError("t_end must be > 0");
  if (dump_every < 1) throw ConfigError("dump_every must be >= 1");
  if (max_cells < 0) throw ConfigError("max_cells must be >= 0");

  try {
    physics.validate();
    flux.validate();
    solver.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }

  switch (kind) {
    case ExperimentKind::ConvergenceSpace: {
      if (cells.size() < 2)
        throw ConfigError("convergence-space needs at least two cell counts");
      if (!std::is_sorted(cells.begin(), cells.end()))
        throw ConfigError("cells must be strictly increasing");
      if (!dts.empty())
        throw ConfigError("convergence-space derives dt from the cell count");
      if (initial != InitialKind::Manufactured)
        throw ConfigError("convergence-space requires initial = manufactured");
      for (int n : cells) {
        try {
          TimeGrid::make(t_end, dt_rule(degree, n));
        } catch (const std::invalid_argument& err) {
          throw ConfigError(std::string("N = ") + std::to_string(n) + ": " +
                            err.what());
        }
      }
      break;
    }
    case ExperimentKind::ConvergenceTime: {
      if (cells.size() != 1)
        throw ConfigError("convergence-time uses exactly one cell count");
      if (dts.size() < 2)
        throw ConfigError("convergence-time needs at least two dt values");
      for (size_t i = 1; i < dts.size(); ++i)
        if (!(dts[i] < dts[i - 1]))
          throw ConfigError("dt list must be strictly decreasing");
      if (initial != InitialKind::Manufactured)
        throw ConfigError("convergence-time requires initial = manufactured");
      for (double dt : dts) {
        try {
          TimeGrid::make(t_end, dt);
        } catch (const std::invalid_argument& err) {
          throw ConfigError(err.what());
        }
      }
      break;
    }
    case ExperimentKind::Energy: {
      if (cells.size() != 1)
        throw ConfigError("energy run uses exactly one cell count");
      if (dts.size() != 1) throw ConfigError("energy run needs exactly one dt");
      if (initial == InitialKind::Manufactured)
        throw ConfigError("energy run requires a source-free initial state");
      try {
        TimeGrid::make(t_end, dts[0]);
      } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
      }
      break;
    }
    case ExperimentKind::SingleRun: {
      if (cells.size() != 1)
        throw ConfigError("single-run uses exactly one cell count");
      if (dts.size() != 1) throw ConfigError("single-run needs exactly one dt");
      try {
        TimeGrid::make(t_end, dts[0]);
      } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
      }
      break;
    }
  }

  if (initial == InitialKind::TwoInterface) {
    if (!(rho_liquid > 0.0) || !(rho_vapor > 0.0))
      throw ConfigError("two-interface initial state needs rho_liquid and rho_vapor > 0");
  }
  if (initial == InitialKind::Constant) {
    if (!(rho0_const > 0.0))
      throw ConfigError("constant initial state needs rho0_const > 0");
  }
  if (!eta_list.empty()) {
    if (kind != ExperimentKind::Energy)
      throw ConfigError("eta_list is only valid for the energy experiment");
    for (double e : eta_list)
      if (!(e > 0.0)) throw ConfigError("eta_list entries must be > 0");
  }
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[experiment]\n";
  os << "kind = " << to_string(cfg.kind) << "\n";
  os << "degree = " << cfg.degree << "\n";
  os << "cells = ";
  for (size_t i = 0; i < cfg.cells.size(); ++i)
    os << (i ? "," : "") << cfg.cells[i];
  os << "\n";
  if (!cfg.dts.empty()) {
    os << "dt = ";
    for (size_t i = 0; i < cfg.dts.size(); ++i)
      os << (i ? "," : "") << fmt(cfg.dts[i]);
    os << "\n";
  }
  os << "t_end = " << fmt(cfg.t_end) << "\n";
  os << "initial = " << to_string(cfg.initial) << "\n";
  if (!cfg.output.empty()) os << "output = " << cfg.output << "\n";
  if (!cfg.eta_list.empty()) {
    os << "eta_list = ";
    for (size_t i = 0; i < cfg.eta_list.size(); ++i)
      os << (i ? "," : "") << fmt(cfg.eta_list[i]);
    os << "\n";
  }
  if (cfg.initial == InitialKind::Constant)
    os << "rho0_const = " << fmt(cfg.rho0_const) << "\n";
  if (cfg.initial == InitialKind::TwoInterface) {
    os << "rho_liquid = " << fmt(cfg.rho_liquid) << "\n";
    os << "rho_vapor = " << fmt(cfg.rho_vapor) << "\n";
  }
  if (!cfg.field_dump.empty()) os << "field_dump = " << cfg.field_dump << "\n";
  if (cfg.dump_every != 1) os << "dump_every = " << cfg.dump_every << "\n";
  if (cfg.max_cells != 0) os << "max_cells = " << cfg.max_cells << "\n";

  os << "\n[physics]\n";
  os << "alpha_liquid = " << fmt(cfg.physics.liquid.alpha) << "\n";
  os << "beta_liquid = " << fmt(cfg.physics.liquid.beta) << "\n";
  os << "gammac_liquid = " << fmt(cfg.physics.liquid.gamma_c) << "\n";
  os << "alpha_vapor = " << fmt(cfg.physics.vapor.alpha) << "\n";
  os << "beta_vapor = " << fmt(cfg.physics.vapor.beta) << "\n";
  os << "gammac_vapor = " << fmt(cfg.physics.vapor.gamma_c) << "\n";
  os << "a = " << fmt(cfg.physics.a) << "\n";
  os << "gamma = " << fmt(cfg.physics.gamma) << "\n";
  os << "eta = " << fmt(cfg.physics.eta) << "\n";
  os << "nu_liquid = " << fmt(cfg.physics.nu_liquid) << "\n";
  os << "nu_vapor = " << fmt(cfg.physics.nu_vapor) << "\n";

  os << "\n[flux]\n";
  os << "alpha_B = " << fmt(cfg.flux.alphaB) << "\n";
  os << "alpha1 = " << fmt(cfg.flux.alpha1) << "\n";
  os << "alpha2 = " << fmt(cfg.flux.alpha2) << "\n";
  os << "alpha3 = " << fmt(cfg.flux.alpha3) << "\n";

  os << "\n[solver]\n";
  os << "newton_tol = " << fmt(cfg.solver.newton_abs_tol) << "\n";
  os << "newton_max_iter = " << cfg.solver.newton_max_iter << "\n";
  os << "linear_tol = " << fmt(cfg.solver.linear_abs_tol) << "\n";
  os << "max_step_halvings = " << cfg.solver.max_step_halvings << "\n";
  os << "linear_solver = "
     << (cfg.solver.linear_solver == LinearSolverKind::Direct ? "direct"
                                                              : "bicgstab")
     << "\n";
  return os.str();
}

double dt_rule(int degree, int n_cells) {
  if (n_cells < 1) throw std::invalid_argument("dt_rule: n_cells must be >= 1");
  const long long target =
      degree <= 1 ? static_cast<long long>(n_cells)
                  : static_cast<long long>(n_cells) * n_cells;
  // floor(log10(1/target)) computed exactly in integers.
  long long pow10 = 1;
  int exponent = 0;
  while (pow10 < target) {
    pow10 *= 10;
    ++exponent;
  }
  return std::pow(10.0, -exponent);
}

FluxParams recommended_stabilization(int degree) {
  FluxParams fp;
  fp.alpha2 = 0.0;
  fp.alpha3 = 0.0;
  switch (degree) {
    case 0: fp.alphaB = 1e-3; fp.alpha1 = 0.0; break;
    case 1: fp.alphaB = 1.7e-3; fp.alpha1 = 6e-3; break;
    case 2: fp.alphaB = 7e-3; fp.alpha1 = 1e-3; break;
    case 3: fp.alphaB = 2e-2; fp.alpha1 = 1e-1; break;
    default:
      throw std::invalid_argument(
          "recommended_stabilization: tabulated for degrees 0..3 only");
  }
  return fp;
}

int default_max_cells(int degree) { return degree <= 1 ? 256 : 128; }

}  // namespace nsac
