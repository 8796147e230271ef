#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plk/errors.hpp"
#include "plk/experiment.hpp"
#include "plk/spectral.hpp"

namespace plk::cli {

/// Parse or validation failure carrying the offending source, line and field.
class ConfigError : public DomainError {
public:
    ConfigError(const std::string& source, std::size_t line, const std::string& field, const std::string& message);

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string source_;
    std::size_t line_;
    std::string field_;
};

struct ConfigEntry {
    std::string key;
    std::string value;
    std::string source;  // file name, "preset:<name>" or "flag"
    std::size_t line = 0;
};

/// Ordered key-value settings; a later `set` of the same key replaces the earlier one.
class Settings {
public:
    void set(const std::string& key, const std::string& value, const std::string& source, std::size_t line = 0);
    const ConfigEntry* find(const std::string& key) const;
    std::vector<ConfigEntry> const& entries() const noexcept { return entries_; }
    /// Merges `other` on top of this.
    void merge(const Settings& other);

private:
    std::vector<ConfigEntry> entries_;
};

/// Keys understood by at least one command.
const std::vector<std::string>& known_keys();

/// Format: one `key = value` per line; `#` starts a comment; blank lines ignored.
/// List values are comma-separated. Unknown keys and malformed lines raise ConfigError.
Settings parse_config(std::istream& in, const std::string& source);
Settings parse_config_file(const std::string& path);

/// Names: fig2-left, fig2-right, fig3, fig4.
std::vector<std::string> preset_names();
/// The preset as config text, parseable by parse_config.
std::string preset_text(const std::string& name);
Settings preset(const std::string& name);

/// "monomial:D", "poly:h0,h1,...", "hermite:x0,x1,...", "exp-trunc:D".
KernelSpec parse_kernel(const std::string& text);

/// "first", "last" or "custom:j:p:c;j:p:c" (empty custom list allowed: "custom:").
TargetChoice parse_target(const std::string& text);

struct SpectrumJob {
    std::size_t d = 2;
    std::vector<double> alphas{0.0};
    KernelSpec kernel = KernelSpec::monomial(2);
    std::uint64_t master_seed = 0;
    std::string out;  // empty: stdout
};

struct RiskJob {
    RiskConfig config;
    double budget_seconds = 300.0;
    std::string out;
};

SpectrumJob make_spectrum_job(const Settings& s);
RiskJob make_risk_job(const Settings& s);

}  // namespace plk::cli
