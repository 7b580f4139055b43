#include "invmet/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "invmet/expr.hpp"

namespace invmet {

ConfigError::ConfigError(const std::string& msg, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + msg),
      line_(line),
      column_(column) {}

namespace {

const char* const kDomainKeys[] = {"kind", "dim", "radius", "coeffs", "rho", "convex", "bounding_radius"};
const char* const kRunKeys[] = {"degree", "count", "seed", "slack"};

bool is_one_of(const std::string& key, const auto& keys) {
  return std::any_of(std::begin(keys), std::end(keys), [&](const char* k) { return key == k; });
}

std::string trim(std::string_view s, int* lead = nullptr) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (lead) *lead = static_cast<int>(b);
  return std::string(s.substr(b, e - b));
}

double to_double(const ConfigValue& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v.text, &used);
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + v.text + "'", v.line, v.column);
  }
  if (used != v.text.size() || !std::isfinite(x)) {
    throw ConfigError("expected a number, got '" + v.text + "'", v.line, v.column);
  }
  return x;
}

int to_int(const ConfigValue& v) {
  const double x = to_double(v);
  if (x != std::floor(x) || std::abs(x) > 2e9) {
    throw ConfigError("expected an integer, got '" + v.text + "'", v.line, v.column);
  }
  return static_cast<int>(x);
}

bool to_bool(const ConfigValue& v) {
  if (v.text == "true" || v.text == "1" || v.text == "yes") return true;
  if (v.text == "false" || v.text == "0" || v.text == "no") return false;
  throw ConfigError("expected true/false, got '" + v.text + "'", v.line, v.column);
}

std::vector<double> to_list(const ConfigValue& v) {
  std::vector<double> out;
  std::size_t start = 0;
  int offset = 0;
  while (start <= v.text.size()) {
    std::size_t comma = v.text.find(',', start);
    if (comma == std::string::npos) comma = v.text.size();
    int lead = 0;
    const std::string item = trim(std::string_view(v.text).substr(start, comma - start), &lead);
    offset = static_cast<int>(start) + lead;
    out.push_back(to_double(ConfigValue{item, v.line, v.column + offset}));
    start = comma + 1;
  }
  return out;
}

Domain build_domain(const std::map<std::string, ConfigValue>& keys) {
  const auto find = [&](const char* k) -> const ConfigValue* {
    auto it = keys.find(k);
    return it == keys.end() ? nullptr : &it->second;
  };
  const ConfigValue* kind = find("kind");
  if (!kind) {
    const ConfigValue& any = keys.begin()->second;
    throw ConfigError("missing 'kind'", any.line, 1);
  }
  const ConfigValue* dim_v = find("dim");
  const ConfigValue* radius_v = find("radius");
  const double radius = radius_v ? to_double(*radius_v) : 1.0;
  if (radius_v && !(radius > 0.0)) throw ConfigError("radius must be positive", radius_v->line, radius_v->column);
  const auto require_dim = [&](int fallback) {
    if (!dim_v) return fallback;
    const int d = to_int(*dim_v);
    if (d < 1) throw ConfigError("dim must be >= 1", dim_v->line, dim_v->column);
    return d;
  };
  const auto reject = [&](const char* key, const std::string& why) {
    if (const ConfigValue* v = find(key)) throw ConfigError("'" + std::string(key) + "' " + why, v->line, 1);
  };

  if (kind->text == "disc") {
    if (require_dim(1) != 1) throw ConfigError("a disc has dim = 1", dim_v->line, dim_v->column);
    reject("coeffs", "not used by kind=disc");
    reject("rho", "not used by kind=disc");
    return Domain::disc(radius);
  }
  if (kind->text == "ball" || kind->text == "polydisc") {
    if (!dim_v) throw ConfigError("kind=" + kind->text + " needs 'dim'", kind->line, kind->column);
    reject("coeffs", "not used by kind=" + kind->text);
    reject("rho", "not used by kind=" + kind->text);
    const int d = require_dim(1);
    return kind->text == "ball" ? Domain::ball(d, radius) : Domain::polydisc(d, radius);
  }
  if (kind->text == "ellipsoid") {
    const ConfigValue* c = find("coeffs");
    if (!c) throw ConfigError("kind=ellipsoid needs 'coeffs'", kind->line, kind->column);
    std::vector<double> coeffs = to_list(*c);
    for (double x : coeffs) {
      if (!(x > 0.0)) throw ConfigError("ellipsoid coefficients must be positive", c->line, c->column);
    }
    if (dim_v && require_dim(1) != static_cast<int>(coeffs.size())) {
      throw ConfigError("dim does not match the number of coeffs", dim_v->line, dim_v->column);
    }
    reject("rho", "not used by kind=ellipsoid");
    reject("radius", "not used by kind=ellipsoid");
    return Domain::ellipsoid(std::move(coeffs));
  }
  if (kind->text == "generic") {
    const ConfigValue* rho_v = find("rho");
    if (!rho_v) throw ConfigError("kind=generic needs 'rho'", kind->line, kind->column);
    if (!dim_v) throw ConfigError("kind=generic needs 'dim'", kind->line, kind->column);
    const int d = require_dim(1);
    Expression expr = [&] {
      try {
        return Expression::parse(rho_v->text, d);
      } catch (const ExprError& e) {
        throw ConfigError(e.what(), rho_v->line, rho_v->column + e.column() - 1);
      }
    }();
    {
      const cplx probe = expr.evaluate(CPoint::Constant(d, cplx(0.3, -0.2)));
      if (std::abs(probe.imag()) > 1e-9 * std::max(1.0, std::abs(probe.real()))) {
        throw ConfigError("rho is not real-valued", rho_v->line, rho_v->column);
      }
    }
    const bool convex = find("convex") ? to_bool(*find("convex")) : false;
    double R = 0.0;
    if (const ConfigValue* rv = find("bounding_radius")) {
      R = to_double(*rv);
      if (!(R > 0.0)) throw ConfigError("bounding_radius must be positive", rv->line, rv->column);
    } else {
      // Estimate from ray exits along many directions out of the origin.
      if (!(expr(CPoint::Zero(d)) < 0.0)) {
        throw ConfigError("kind=generic needs 'bounding_radius' when the origin is not interior",
                          kind->line, kind->column);
      }
      UniformStream rng(12345);
      double far = 0.0;
      for (int s = 0; s < 4096; ++s) {
        const CDirection u = random_unit_direction(d, rng);
        double lo = 0.0, hi = 1.0;
        while (expr(hi * u) < 0.0) {
          hi *= 2.0;
          if (hi > 1e6) throw ConfigError("rho does not define a bounded domain", rho_v->line, rho_v->column);
        }
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (expr(mid * u) < 0.0 ? lo : hi) = mid;
        }
        far = std::max(far, hi);
      }
      R = 1.25 * far;
    }
    return Domain::generic(d, [expr](const CPoint& z) { return expr(z); }, R, convex, {},
                           "generic(" + rho_v->text + ")");
  }
  throw ConfigError("unknown kind '" + kind->text + "'", kind->line, kind->column);
}

}  // namespace

std::optional<int> ConfigFile::run_int(const std::string& key) const {
  auto it = run.find(key);
  if (it == run.end()) return std::nullopt;
  return to_int(it->second);
}

std::optional<double> ConfigFile::run_double(const std::string& key) const {
  auto it = run.find(key);
  if (it == run.end()) return std::nullopt;
  return to_double(it->second);
}

ConfigFile parse_config(std::string_view text) {
  std::map<std::string, ConfigValue> domain_keys;
  ConfigFile out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    int lead = 0;
    if (trim(line, &lead).empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected 'key = value'", line_no, lead + 1);
    }
    const std::string key = trim(line.substr(0, eq));
    int vlead = 0;
    const std::string value = trim(line.substr(eq + 1), &vlead);
    const int vcol = static_cast<int>(eq) + 2 + vlead;
    if (key.empty()) throw ConfigError("empty key", line_no, lead + 1);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no, vcol);
    ConfigValue v{value, line_no, vcol};
    std::map<std::string, ConfigValue>* target = nullptr;
    if (is_one_of(key, kDomainKeys)) target = &domain_keys;
    else if (is_one_of(key, kRunKeys)) target = &out.run;
    else throw ConfigError("unknown key '" + key + "'", line_no, lead + 1);
    if (target->count(key)) throw ConfigError("duplicate key '" + key + "'", line_no, lead + 1);
    target->emplace(key, std::move(v));
  }
  for (const auto& [key, v] : out.run) {
    if (key == "slack") to_double(v);
    else to_int(v);
  }
  if (!domain_keys.empty()) out.domain = build_domain(domain_keys);
  return out;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Domain parse_domain_config(std::string_view text) {
  ConfigFile cfg = parse_config(text);
  if (!cfg.domain) throw ConfigError("config does not describe a domain", 1, 1);
  return *cfg.domain;
}

}  // namespace invmet
