#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "invmet/domain.hpp"

namespace invmet {

/// Malformed configuration; line and column are 1-based.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// One `key = value` entry with its source position.
struct ConfigValue {
  std::string text;
  int line = 0;
  int column = 0;
};

/// Parsed plain-text configuration.
///
///     # unit ellipsoid {|z1|^2 + 4|z2|^2 < 1}
///     kind   = ellipsoid
///     dim    = 2
///     coeffs = 1, 4
///
/// Domain keys: kind (disc|ball|polydisc|ellipsoid|generic), dim, radius,
/// coeffs, rho, convex, bounding_radius. Run keys: degree, count, seed,
/// slack. Anything else is rejected.
struct ConfigFile {
  std::optional<Domain> domain;
  std::map<std::string, ConfigValue> run;

  std::optional<int> run_int(const std::string& key) const;
  std::optional<double> run_double(const std::string& key) const;
};

ConfigFile parse_config(std::string_view text);
ConfigFile load_config(const std::string& path);

/// Shorthand for configs that must describe a domain.
Domain parse_domain_config(std::string_view text);

}  // namespace invmet
