#include "plk/cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace plk::cli {

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_header(std::ostream& os, const std::string& schema, const std::string& command,
                  std::uint64_t master_seed, const Settings& settings) {
    os << "# tool: plk " << PLK_VERSION << "\n";
    os << "# schema: " << schema << "\n";
    os << "# command: " << command << "\n";
    os << "# master_seed: " << master_seed << "\n";
    for (const auto& e : settings.entries()) {
        os << "# config: " << e.key << " = " << e.value << "\n";
    }
}

void write_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            os << ',';
        }
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") != std::string::npos) {
            os << '"';
            for (char ch : f) {
                if (ch == '"') {
                    os << '"';
                }
                os << ch;
            }
            os << '"';
        } else {
            os << f;
        }
    }
    os << '\n';
}

}  // namespace plk::cli
