#include "flowopt/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace flowopt {

CaseConfig default_case_config(CaseKind kind) {
  CaseConfig cfg;
  cfg.kind = kind;
  switch (kind) {
    case CaseKind::Diffuser:
      cfg.nx = 32;
      cfg.ny = 32;
      cfg.vmax_fraction = 0.5;
      cfg.lambda_vol = 0.2;
      cfg.timeout_ms = 1000.0;
      break;
    case CaseKind::DoublePipe:
      cfg.nx = 48;
      cfg.ny = 32;
      cfg.vmax_fraction = 1.0 / 3.0;
      cfg.lambda_vol = 0.05;
      cfg.timeout_ms = 10000.0;
      break;
  }
  return cfg;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for '" + key +
                                "': " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x)
    throw std::invalid_argument("config: expected integer for '" + key +
                                "': " + v);
  return i;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad unsigned value for '" + key +
                                "': " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': " + v);
}

CaseKind parse_case(const std::string& v) {
  if (v == "diffuser") return CaseKind::Diffuser;
  if (v == "double_pipe") return CaseKind::DoublePipe;
  throw std::invalid_argument("config: unknown case '" + v +
                              "' (expected diffuser or double_pipe)");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(CaseKind kind) {
  return kind == CaseKind::Diffuser ? "diffuser" : "double_pipe";
}
std::string to_string(Formulation mode) {
  return mode == Formulation::Full ? "full" : "condensed";
}
std::string to_string(OutletTreatment outlet) {
  return outlet == OutletTreatment::Prescribed ? "dirichlet" : "neumann";
}

CaseConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::vector<std::string> order;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::invalid_argument("config: empty key or value on line " +
                                  std::to_string(lineno));
    kv[key] = val;
    order.push_back(key);
  }

  CaseConfig cfg = default_case_config(
      kv.count("case") ? parse_case(kv.at("case")) : CaseKind::Diffuser);

  for (const auto& [key, val] : kv) {
    if (key == "case") {
    } else if (key == "nx") {
      cfg.nx = parse_int(key, val);
    } else if (key == "ny") {
      cfg.ny = parse_int(key, val);
    } else if (key == "width") {
      cfg.width = parse_double(key, val);
    } else if (key == "height") {
      cfg.height = parse_double(key, val);
    } else if (key == "viscosity") {
      cfg.viscosity = parse_double(key, val);
    } else if (key == "alpha_max") {
      cfg.alpha_max = parse_double(key, val);
    } else if (key == "inlet_peak") {
      cfg.inlet_peak = parse_double(key, val);
    } else if (key == "outlet_type") {
      if (val == "dirichlet")
        cfg.outlet = OutletTreatment::Prescribed;
      else if (val == "neumann")
        cfg.outlet = OutletTreatment::TractionFree;
      else
        throw std::invalid_argument(
            "config: outlet_type must be dirichlet or neumann");
    } else if (key == "formulation") {
      if (val == "full")
        cfg.formulation = Formulation::Full;
      else if (val == "condensed")
        cfg.formulation = Formulation::Condensed;
      else
        throw std::invalid_argument(
            "config: formulation must be full or condensed");
    } else if (key == "vmax_fraction") {
      cfg.vmax_fraction = parse_double(key, val);
    } else if (key == "lambda_dis") {
      cfg.lambda_dis = parse_double(key, val);
    } else if (key == "lambda_reg") {
      cfg.lambda_reg = parse_double(key, val);
    } else if (key == "lambda_vol") {
      cfg.lambda_vol = parse_double(key, val);
    } else if (key == "lambda_char") {
      cfg.lambda_char = parse_double(key, val);
    } else if (key == "levelset_bits") {
      cfg.levelset_bits = parse_int(key, val);
    } else if (key == "epsilon") {
      cfg.epsilon = parse_double(key, val);
    } else if (key == "max_steps") {
      cfg.max_steps = parse_int(key, val);
    } else if (key == "seed") {
      cfg.seed = parse_u64(key, val);
    } else if (key == "timeout_ms") {
      cfg.timeout_ms = parse_double(key, val);
    } else if (key == "sweeps") {
      cfg.sweeps = parse_int(key, val);
    } else if (key == "restarts") {
      cfg.restarts = parse_int(key, val);
    } else if (key == "threads") {
      cfg.threads = parse_int(key, val);
    } else if (key == "record_walltime") {
      cfg.record_walltime = parse_bool(key, val);
    } else if (key == "backend") {
      cfg.backend = val;
    } else if (key == "q_penalty") {
      cfg.q_penalty = parse_double(key, val);
    } else if (key == "move_limit") {
      cfg.move_limit = parse_double(key, val);
    } else if (key == "oc_eta") {
      cfg.oc_eta = parse_double(key, val);
    } else if (key == "classical_max_steps") {
      cfg.classical_max_steps = parse_int(key, val);
    } else if (key == "filter_threshold") {
      cfg.filter_threshold = parse_double(key, val);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

CaseConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const CaseConfig& c) {
  std::ostringstream os;
  os << "alpha_max = " << fmt(c.alpha_max) << "\n"
     << "backend = " << c.backend << "\n"
     << "case = " << to_string(c.kind) << "\n"
     << "classical_max_steps = " << c.classical_max_steps << "\n"
     << "epsilon = " << fmt(c.epsilon) << "\n"
     << "filter_threshold = " << fmt(c.filter_threshold) << "\n"
     << "formulation = " << to_string(c.formulation) << "\n"
     << "height = " << fmt(c.resolved_height()) << "\n"
     << "inlet_peak = " << fmt(c.inlet_peak) << "\n"
     << "lambda_char = " << fmt(c.lambda_char) << "\n"
     << "lambda_dis = " << fmt(c.lambda_dis) << "\n"
     << "lambda_reg = " << fmt(c.lambda_reg) << "\n"
     << "lambda_vol = " << fmt(c.lambda_vol) << "\n"
     << "levelset_bits = " << c.levelset_bits << "\n"
     << "max_steps = " << c.max_steps << "\n"
     << "move_limit = " << fmt(c.move_limit) << "\n"
     << "nx = " << c.nx << "\n"
     << "ny = " << c.ny << "\n"
     << "oc_eta = " << fmt(c.oc_eta) << "\n"
     << "outlet_type = " << to_string(c.outlet) << "\n"
     << "q_penalty = " << fmt(c.q_penalty) << "\n"
     << "record_walltime = " << (c.record_walltime ? "true" : "false") << "\n"
     << "restarts = " << c.restarts << "\n"
     << "seed = " << c.seed << "\n"
     << "sweeps = " << c.sweeps << "\n"
     << "threads = " << c.threads << "\n"
     << "timeout_ms = " << fmt(c.timeout_ms) << "\n"
     << "viscosity = " << fmt(c.viscosity) << "\n"
     << "vmax_fraction = " << fmt(c.vmax_fraction) << "\n"
     << "width = " << fmt(c.resolved_width()) << "\n";
  return os.str();
}

}  // namespace flowopt
