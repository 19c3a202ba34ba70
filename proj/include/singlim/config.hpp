#pragma once

#include "singlim/field.hpp"
#include "singlim/problem.hpp"
#include "singlim/solver.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace singlim {

/**
 * Run configuration read from a `key = value` text file.
 *
 * Blank lines and `#` comments are ignored. Lists are comma separated.
 * Every accepted key remembers its line so later semantic errors can point
 * back at it.
 */
class RunConfig {
public:
  static RunConfig parse(std::istream& in);
  static RunConfig parse_string(const std::string& text);
  static RunConfig load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  /// 0 when the key is absent.
  int line_of(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key, double fallback) const;
  std::optional<double> get_optional_real(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<double> get_real_list(const std::string& key) const;

  /// Command-line overrides; line number 0.
  void set(const std::string& key, const std::string& value);

  double require_real(const std::string& key) const;

private:
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries_;
};

Mode parse_mode(const RunConfig& cfg);
Grid make_grid(const RunConfig& cfg, std::optional<Boundary> force_bc = std::nullopt);
/// prefix is "potential" or "potential2".
PotentialSpec make_potential(const RunConfig& cfg, const std::string& prefix = "potential");
NonlinearitySpec make_nonlinearity(const RunConfig& cfg);
std::vector<double> eps_values(const RunConfig& cfg);

} // namespace singlim
