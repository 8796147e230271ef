#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "plk/cli/config.hpp"

namespace plk::cli {

/// 17 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double v);

/// Writes the `#` header block: tool version, schema, command, master seed and
/// every resolved setting (one `# config: key = value` line each).
void write_header(std::ostream& os, const std::string& schema, const std::string& command,
                  std::uint64_t master_seed, const Settings& settings);

/// Comma-joined row; fields containing commas or quotes are quoted.
void write_row(std::ostream& os, const std::vector<std::string>& fields);

}  // namespace plk::cli
