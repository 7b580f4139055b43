#include "invmet/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "invmet/bergman.hpp"
#include "invmet/config.hpp"
#include "invmet/finsler.hpp"
#include "invmet/ke_model.hpp"
#include "invmet/squeeze.hpp"
#include "invmet/verify.hpp"

namespace invmet {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

cplx parse_complex(const std::string& tok) {
  const char* s = tok.c_str();
  char* end = nullptr;
  const double first = std::strtod(s, &end);
  if (end == s) throw UsageError("bad coordinate '" + tok + "'");
  if (*end == '\0') return first;
  if (*end == 'i' && end[1] == '\0') return {0.0, first};
  if (*end != '+' && *end != '-') throw UsageError("bad coordinate '" + tok + "'");
  const char* rest = end;
  const double second = std::strtod(rest, &end);
  if (end == rest || *end != 'i' || end[1] != '\0') throw UsageError("bad coordinate '" + tok + "'");
  return {first, second};
}

// Key/value pairs of one result, printed in insertion order.
struct Record {
  std::vector<std::pair<std::string, std::string>> json;  // value already JSON-encoded
  std::vector<std::pair<std::string, std::string>> text;

  void number(const std::string& key, double x) {
    json.push_back({key, json_number(x)});
    text.push_back({key, json_number(x)});
  }
  void integer(const std::string& key, long long x) {
    json.push_back({key, std::to_string(x)});
    text.push_back({key, std::to_string(x)});
  }
  void string(const std::string& key, const std::string& s) {
    json.push_back({key, json_string(s)});
    text.push_back({key, s});
  }
  void point(const std::string& key, const CPoint& z) {
    json.push_back({key, json_point(z)});
    std::ostringstream t;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      t << (i ? ", " : "") << json_number(z[i].real());
      if (z[i].imag() != 0.0) t << (z[i].imag() < 0 ? "" : "+") << json_number(z[i].imag()) << "i";
    }
    text.push_back({key, t.str()});
  }
  void flag(const std::string& key, bool b) {
    json.push_back({key, b ? "true" : "false"});
    text.push_back({key, b ? "true" : "false"});
  }
  void null(const std::string& key) {
    json.push_back({key, "null"});
    text.push_back({key, "n/a"});
  }

  void write(std::ostream& out, OutputFormat f) const {
    switch (f) {
      case OutputFormat::Json:
        out << "{\n";
        for (std::size_t i = 0; i < json.size(); ++i) {
          out << "  " << json_string(json[i].first) << ": " << json[i].second << (i + 1 < json.size() ? ",\n" : "\n");
        }
        out << "}\n";
        break;
      case OutputFormat::Csv: {
        for (std::size_t i = 0; i < text.size(); ++i) out << (i ? "," : "") << text[i].first;
        out << "\n";
        for (std::size_t i = 0; i < text.size(); ++i) {
          const bool quote = text[i].second.find(',') != std::string::npos;
          out << (i ? "," : "") << (quote ? "\"" : "") << text[i].second << (quote ? "\"" : "");
        }
        out << "\n";
        break;
      }
      case OutputFormat::Text: {
        std::size_t w = 0;
        for (const auto& kv : text) w = std::max(w, kv.first.size());
        for (const auto& kv : text) out << kv.first << std::string(w - kv.first.size() + 2, ' ') << kv.second << "\n";
        break;
      }
    }
  }
};

bool closed_form_kobayashi(const Domain& d) {
  const ModelKind k = d.kind();
  return k == ModelKind::Disc || k == ModelKind::Ball || k == ModelKind::Polydisc || k == ModelKind::Ellipsoid;
}

bool ke_closed_form(const Domain& d) {
  const ModelKind k = d.kind();
  return k == ModelKind::Disc || k == ModelKind::Ball || k == ModelKind::Polydisc;
}

int execute(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  ConfigFile cfg;
  try {
    cfg = load_config(rc.domain_path);
  } catch (const ConfigError& e) {
    err << rc.domain_path << ": " << e.what() << "\n";
    return 2;
  }
  const std::uint64_t seed =
      rc.seed.value_or(static_cast<std::uint64_t>(cfg.run_int("seed").value_or(42)));

  std::ofstream file;
  if (!rc.out_path.empty()) {
    file.open(rc.out_path, std::ios::binary);
    if (!file) {
      err << "cannot write " << rc.out_path << "\n";
      return 2;
    }
  }
  std::ostream& sink = rc.out_path.empty() ? out : file;

  if (rc.command == Command::Verify) {
    VerifyOptions o;
    if (rc.degree) {
      cfg.run.erase("degree");
      o.degree = *rc.degree;
    }
    if (rc.count) {
      cfg.run.erase("count");
      o.count = *rc.count;
    }
    if (rc.slack) {
      cfg.run.erase("slack");
      o.slack = *rc.slack;
    }
    const auto reports = full_suite(cfg, seed, o);
    switch (rc.format) {
      case OutputFormat::Json: write_json(sink, reports); break;
      case OutputFormat::Csv: write_csv(sink, reports); break;
      case OutputFormat::Text: write_text(sink, reports); break;
    }
    return all_pass(reports) ? 0 : 1;
  }

  if (!cfg.domain) {
    err << rc.domain_path << ": no domain described (missing 'kind')\n";
    return 2;
  }
  const Domain& domain = *cfg.domain;
  const int n = domain.dim();
  const CPoint x = rc.point.empty() ? CPoint::Zero(n) : parse_point(rc.point, n);
  const CDirection v = rc.direction.empty() ? CDirection::Unit(n, 0) : parse_point(rc.direction, n);
  const int degree = rc.degree.value_or(cfg.run_int("degree").value_or(default_degree(n)));
  const std::size_t count = rc.count.value_or(
      static_cast<std::size_t>(cfg.run_int("count").value_or(static_cast<int>(default_count(n)))));

  Record rec;
  rec.string("command", rc.command == Command::Kernel    ? "kernel"
                        : rc.command == Command::Metric  ? "metric"
                        : rc.command == Command::Squeeze ? "squeeze"
                                                         : "bracket");
  rec.string("domain", domain.description());
  rec.point("point", x);
  int status = 0;

  switch (rc.command) {
    case Command::Kernel:
    case Command::Metric: {
      if (!contains(domain, x)) throw DomainError("point outside the domain");
      const KernelEvaluator ev = build_kernel(domain, degree, count, seed);
      if (!rc.save_kernel_path.empty()) ev.save(rc.save_kernel_path);
      rec.integer("degree", degree);
      rec.integer("count", static_cast<long long>(count));
      rec.integer("seed", static_cast<long long>(seed));
      rec.integer("rank", static_cast<long long>(ev.rank()));
      rec.integer("dropped", static_cast<long long>(ev.dropped().size()));
      if (rc.command == Command::Kernel) {
        rec.number("kernel", ev.kernel_diag(x));
        break;
      }
      rec.point("direction", v);
      rec.number("bergman", ev.metric(x, v));
      if (ke_closed_form(domain)) rec.number("kahler_einstein", ke_metric(KEModelMetric::of(domain), x, v));
      else rec.null("kahler_einstein");
      if (closed_form_kobayashi(domain)) rec.number("kobayashi", kobayashi_model(domain, x, v));
      else rec.null("kobayashi");
      break;
    }
    case Command::Squeeze: {
      SqueezeOptions so;
      so.seed = seed;
      const SqueezingCertificate cert = squeeze_at(domain, x, so);
      const CertificateCheck check = validate_certificate(domain, cert, 1000, seed + 1);
      rec.number("a", cert.a);
      rec.number("b", cert.b);
      rec.string("map", cert.map.describe());
      rec.integer("boundary_samples", static_cast<long long>(cert.n_boundary_samples));
      rec.number("jacobian_det", std::abs(cert.map.jacobian_det(x)));
      rec.number("check_min_modulus", check.min_modulus);
      rec.number("check_max_modulus", check.max_modulus);
      rec.flag("valid", check.ok());
      status = check.ok() ? 0 : 1;
      break;
    }
    case Command::Bracket: {
      FinslerOptions fo;
      fo.seed = seed;
      if (rc.degree) fo.degree = *rc.degree;
      const Bracket b = bracket(domain, x, v, fo);
      rec.point("direction", v);
      rec.integer("ansatz_degree", fo.degree);
      rec.number("lower", b.lo);
      rec.number("upper", b.hi);
      rec.number("relative_width", b.width() / b.midpoint());
      if (closed_form_kobayashi(domain)) rec.number("closed_form", kobayashi_model(domain, x, v));
      else rec.null("closed_form");
      if (!rc.trace_path.empty()) {
        std::ofstream t(rc.trace_path, std::ios::binary);
        if (!t) throw UsageError("cannot write " + rc.trace_path);
        t << "bound,iteration,objective,margin\n";
        for (const auto& [name, res] : {std::pair{"upper", &b.upper}, std::pair{"lower", &b.lower}}) {
          for (const TraceRow& row : res->trace) {
            t << name << "," << row.iteration << "," << json_number(row.objective) << "," << json_number(row.margin)
              << "\n";
          }
        }
      }
      break;
    }
    case Command::Verify:
      break;
  }
  rec.write(sink, rc.format);
  (void)err;
  return status;
}

}  // namespace

CPoint parse_point(std::string_view text, int dim) {
  std::vector<cplx> coords;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (tok.empty()) throw UsageError("empty coordinate in '" + std::string(text) + "'");
    coords.push_back(parse_complex(tok));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (coords.size() == 1) return CPoint::Constant(dim, coords[0]);
  if (static_cast<int>(coords.size()) != dim) {
    throw UsageError("expected " + std::to_string(dim) + " coordinates, got " + std::to_string(coords.size()));
  }
  CPoint z(dim);
  for (int i = 0; i < dim; ++i) z[i] = coords[static_cast<std::size_t>(i)];
  return z;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant metrics and squeezing certificates on bounded domains", "invmet"};
  RunConfig rc;
  const std::map<std::string, Command> commands{{"kernel", Command::Kernel},
                                                {"metric", Command::Metric},
                                                {"squeeze", Command::Squeeze},
                                                {"bracket", Command::Bracket},
                                                {"verify", Command::Verify}};
  const std::map<std::string, OutputFormat> formats{
      {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}, {"text", OutputFormat::Text}};
  app.add_option("--domain", rc.domain_path, "domain config file")->required();
  std::string cmd;
  std::string format = "text";
  app.add_option("--cmd", cmd, "kernel | metric | squeeze | bracket | verify")
      ->required()
      ->check(CLI::IsMember({"kernel", "metric", "squeeze", "bracket", "verify"}));
  app.add_option("--point", rc.point, "base point, comma-separated complex coordinates (default 0)");
  app.add_option("--dir", rc.direction, "tangent direction (default e1)");
  app.add_option("--degree", rc.degree, "kernel degree, or ansatz degree for bracket (default 12 / 8; 6)");
  app.add_option("--count", rc.count, "quadrature points (default 2e5 / 1e6)");
  app.add_option("--seed", rc.seed, "random seed (default 42)");
  app.add_option("--slack", rc.slack, "relative slack for verify (default 0.05)");
  app.add_option("--out", rc.out_path, "output file (default stdout)");
  app.add_option("--format", format, "json | csv | text (default text)")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--trace", rc.trace_path, "bracket: write the optimizer trace as CSV");
  app.add_option("--save-kernel", rc.save_kernel_path, "kernel/metric: save the evaluator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }
  rc.command = commands.at(cmd);
  rc.format = formats.at(format);

  try {
    return execute(rc, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace invmet
