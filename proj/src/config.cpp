#include "singlim/config.hpp"

#include "singlim/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace singlim {

namespace {

const std::set<std::string> kKnownKeys = {
    "dims",           "n",
    "L",              "bc",
    "a2",             "potential",
    "potential.b2",   "potential.omega",
    "potential.c",    "potential2",
    "potential2.b2",  "potential2.omega",
    "potential2.c",   "nonlinearity",
    "nonlinearity.c", "nonlinearity.m",
    "nonlinearity.coeffs", "R",
    "p_norm",         "eps",
    "eps_list",       "tol",
    "max_iter",       "mode",
    "xi",             "u0",
    "u_max",          "sources",
    "margin",
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& text, int line, const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError(line, "'" + key + "' expects a finite real, got '" + t + "'");
  }
  return v;
}

} // namespace

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "expected 'key = value', got '" + content + "'");
    }
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "missing key before '='");
    if (value.empty()) throw ConfigError(line, "missing value for '" + key + "'");
    if (!kKnownKeys.count(key)) throw ConfigError(line, "unknown key '" + key + "'");
    if (cfg.entries_.count(key)) {
      throw ConfigError(line, "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(cfg.entries_.at(key).line) + ")");
    }
    cfg.entries_[key] = {value, line};
  }
  return cfg;
}

RunConfig RunConfig::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  return parse(in);
}

int RunConfig::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

double RunConfig::get_real(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : to_real(it->second.value, it->second.line, key);
}

std::optional<double> RunConfig::get_optional_real(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_real(key, 0.0);
}

double RunConfig::require_real(const std::string& key) const {
  if (!has(key)) throw ConfigError(0, "missing required key '" + key + "'");
  return get_real(key, 0.0);
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string& t = it->second.value;
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(it->second.line, "'" + key + "' expects an integer, got '" + t + "'");
  }
  return v;
}

std::vector<double> RunConfig::get_real_list(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return {};
  std::vector<double> out;
  std::istringstream in(it->second.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    out.push_back(to_real(item, it->second.line, key));
  }
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!kKnownKeys.count(key)) throw ConfigError(0, "unknown key '" + key + "'");
  entries_[key] = {value, 0};
}

Mode parse_mode(const RunConfig& cfg) {
  const std::string m = cfg.get_string("mode", "eps_split");
  if (m == "eps_split") return Mode::EpsSplit;
  if (m == "eps_full") return Mode::EpsFull;
  if (m == "limit") return Mode::Limit;
  if (m == "rescaled") return Mode::Rescaled;
  throw ConfigError(cfg.line_of("mode"), "unknown mode '" + m + "' (eps_split, eps_full, limit, rescaled)");
}

Grid make_grid(const RunConfig& cfg, std::optional<Boundary> force_bc) {
  GridSpec spec;
  spec.dims = cfg.get_int("dims", 1);
  spec.n = cfg.get_int("n", 64);
  spec.L = cfg.get_real("L", 1.0);
  if (force_bc) {
    spec.bc = *force_bc;
  } else {
    const std::string fallback = cfg.has("mode") && parse_mode(cfg) == Mode::EpsFull ? "dirichlet" : "periodic";
    const std::string bc = cfg.get_string("bc", fallback);
    if (bc == "periodic") {
      spec.bc = Boundary::Periodic;
    } else if (bc == "dirichlet") {
      spec.bc = Boundary::Dirichlet;
    } else {
      throw ConfigError(cfg.line_of("bc"), "unknown boundary '" + bc + "' (periodic, dirichlet)");
    }
  }
  try {
    return Grid(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::max({cfg.line_of("n"), cfg.line_of("dims"), cfg.line_of("L")}), e.what());
  }
}

PotentialSpec make_potential(const RunConfig& cfg, const std::string& prefix) {
  const double a2 = cfg.require_real("a2");
  const std::string family = cfg.get_string(prefix, "constant");
  const int line = cfg.line_of(prefix);
  try {
    if (family == "constant") return PotentialSpec::constant(a2, cfg.get_real(prefix + ".b2", a2));
    if (family == "shifted_sine") {
      const double L = cfg.get_real("L", 1.0);
      return PotentialSpec::shifted_sine(a2, cfg.get_real(prefix + ".omega", 2.0 * std::numbers::pi / L));
    }
    if (family == "radial_quadratic") return PotentialSpec::radial_quadratic(a2, cfg.get_real(prefix + ".c", 1.0));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line, e.what());
  }
  throw ConfigError(line, "unknown potential family '" + family + "' (constant, shifted_sine, radial_quadratic)");
}

NonlinearitySpec make_nonlinearity(const RunConfig& cfg) {
  const std::string family = cfg.get_string("nonlinearity", "exponential");
  const int line = cfg.line_of("nonlinearity");
  try {
    if (family == "constant") return NonlinearitySpec::constant(cfg.get_real("nonlinearity.c", 1.0));
    if (family == "power_shift") return NonlinearitySpec::power_shift(cfg.get_real("nonlinearity.m", 2.0));
    if (family == "exponential") return NonlinearitySpec::exponential();
    if (family == "polynomial") {
      if (!cfg.has("nonlinearity.coeffs")) throw ConfigError(line, "polynomial needs 'nonlinearity.coeffs'");
      return NonlinearitySpec::polynomial(cfg.get_real_list("nonlinearity.coeffs"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line, e.what());
  }
  throw ConfigError(line, "unknown nonlinearity '" + family + "' (constant, power_shift, exponential, polynomial)");
}

std::vector<double> eps_values(const RunConfig& cfg) {
  if (cfg.has("eps_list")) return cfg.get_real_list("eps_list");
  if (cfg.has("eps")) return {cfg.get_real("eps", 0.0)};
  return {};
}

} // namespace singlim
