#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "invmet/types.hpp"

namespace invmet {

enum class Command { Kernel, Metric, Squeeze, Bracket, Verify };
enum class OutputFormat { Json, Csv, Text };

struct RunConfig {
  std::string domain_path;
  Command command = Command::Verify;
  std::string point;  ///< raw text, parsed once the dimension is known
  std::string direction;
  std::optional<int> degree;
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> seed;
  std::optional<double> slack;
  std::string out_path;  ///< empty: standard output
  OutputFormat format = OutputFormat::Text;
  std::string trace_path;
  std::string save_kernel_path;
};

/// Comma-separated complex coordinates: "0.5", "0.1+0.2i, -0.3i", "1e-3-2i".
/// A single value is broadcast to every coordinate.
CPoint parse_point(std::string_view text, int dim);

/// Exit codes: 0 success (all claims pass), 1 claim or numerical failure,
/// 2 usage or configuration error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace invmet
