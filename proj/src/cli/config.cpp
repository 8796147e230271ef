#include "plk/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace plk::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        out.push_back(trim(cur));
    }
    if (!s.empty() && s.back() == sep) {
        out.push_back("");
    }
    return out;
}

[[noreturn]] void fail(const ConfigEntry& e, const std::string& message) {
    throw ConfigError(e.source, e.line, e.key, message);
}

double to_double(const ConfigEntry& e, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        fail(e, "expected a number, got '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) {
        fail(e, "expected a finite number, got '" + text + "'");
    }
    return v;
}

std::uint64_t to_uint(const ConfigEntry& e, const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        fail(e, "expected a non-negative integer, got '" + text + "'");
    }
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        fail(e, "integer out of range: '" + text + "'");
    }
}

std::vector<double> to_doubles(const ConfigEntry& e) {
    std::vector<double> out;
    for (const auto& part : split(e.value, ',')) {
        out.push_back(to_double(e, part));
    }
    if (out.empty()) {
        fail(e, "expected a comma-separated list of numbers");
    }
    return out;
}

std::vector<std::size_t> to_sizes(const ConfigEntry& e) {
    std::vector<std::size_t> out;
    for (const auto& part : split(e.value, ',')) {
        out.push_back(static_cast<std::size_t>(to_uint(e, part)));
    }
    if (out.empty()) {
        fail(e, "expected a comma-separated list of integers");
    }
    return out;
}

template <class Fn>
auto with_entry(const ConfigEntry& e, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        fail(e, ex.what());
    }
}

const char* kPresetFig2Left = R"(# exp(<x,x'>) truncated after the degree-5 Taylor term
kernel = exp-trunc:5
d = 20
alpha = 0,0.3,0.7,1.05
)";

const char* kPresetFig2Right = R"(# (1 + <x,x'>)^3
kernel = poly:1,3,3,1
d = 100
alpha = 0,0.3,0.7,1.05
)";

const char* kPresetFig3 = R"(# <x,x'>^3
kernel = monomial:3
d = 100
alpha = 1.01,1.5,2
)";

const char* kPresetFig4 = R"(# degree-3 Hermite kernel, both alignment targets
kernel = hermite:1,1,1,1
d = 100
alpha = 0,0.3,0.6,0.9
n = 25,50,100,200,400,800,1600,3200
lambda = 0.01
seeds = 10
seed = 0
target = first,last
noise_sigma = 0
n_test = 2000
delta0 = 0.05
theory_mode = default
budget = 1800
)";

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& field,
                         const std::string& message)
    : DomainError(source + (line ? ":" + std::to_string(line) : std::string()) +
                  (field.empty() ? std::string() : ": field '" + field + "'") + ": " + message),
      source_(source),
      line_(line),
      field_(field) {}

void Settings::set(const std::string& key, const std::string& value, const std::string& source, std::size_t line) {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const ConfigEntry& e) { return e.key == key; });
    ConfigEntry entry{key, value, source, line};
    if (it == entries_.end()) {
        entries_.push_back(std::move(entry));
    } else {
        *it = std::move(entry);
    }
}

const ConfigEntry* Settings::find(const std::string& key) const {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const ConfigEntry& e) { return e.key == key; });
    return it == entries_.end() ? nullptr : &*it;
}

void Settings::merge(const Settings& other) {
    for (const auto& e : other.entries()) {
        set(e.key, e.value, e.source, e.line);
    }
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {"preset", "kernel", "d",        "alpha",       "n",
                                                  "lambda", "seeds",  "seed",     "target",      "noise_sigma",
                                                  "n_test", "delta0", "budget",   "theory_mode", "out"};
    return keys;
}

Settings parse_config(std::istream& in, const std::string& source) {
    Settings s;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source, line, "", "expected 'key = value', got '" + text + "'");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(source, line, "", "missing key before '='");
        }
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(source, line, key, "unknown field");
        }
        if (value.empty()) {
            throw ConfigError(source, line, key, "missing value");
        }
        s.set(key, value, source, line);
    }
    return s;
}

Settings parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, 0, "", "cannot open config file");
    }
    return parse_config(in, path);
}

std::vector<std::string> preset_names() {
    return {"fig2-left", "fig2-right", "fig3", "fig4"};
}

std::string preset_text(const std::string& name) {
    if (name == "fig2-left") return kPresetFig2Left;
    if (name == "fig2-right") return kPresetFig2Right;
    if (name == "fig3") return kPresetFig3;
    if (name == "fig4") return kPresetFig4;
    throw ConfigError("preset", 0, "preset", "unknown preset '" + name + "'");
}

Settings preset(const std::string& name) {
    std::istringstream in(preset_text(name));
    return parse_config(in, "preset:" + name);
}

KernelSpec parse_kernel(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw DomainError("kernel '" + text + "': expected kind:parameters");
    }
    const std::string kind = text.substr(0, colon);
    const std::string args = text.substr(colon + 1);
    const ConfigEntry e{"kernel", text, "kernel", 0};
    auto degree = [&]() {
        const auto D = to_uint(e, trim(args));
        if (D > 20) {
            throw DomainError("kernel degree must be <= 20");
        }
        return static_cast<unsigned>(D);
    };
    KernelSpec spec;
    if (kind == "monomial") {
        spec = KernelSpec::monomial(degree());
    } else if (kind == "exp-trunc") {
        spec = KernelSpec::exp_truncated(degree());
    } else if (kind == "poly") {
        spec = KernelSpec::polynomial(to_doubles({"kernel", args, "kernel", 0}));
    } else if (kind == "hermite") {
        spec = KernelSpec::hermite(to_doubles({"kernel", args, "kernel", 0}));
    } else {
        throw DomainError("unknown kernel kind '" + kind + "' (monomial, poly, hermite, exp-trunc)");
    }
    spec.validate();
    return spec;
}

TargetChoice parse_target(const std::string& text) {
    if (text == "first") {
        return {TargetKind::first_coord, {}};
    }
    if (text == "last") {
        return {TargetKind::last_coord, {}};
    }
    if (text.rfind("custom:", 0) == 0) {
        TargetChoice c{TargetKind::custom, {}};
        const std::string body = text.substr(7);
        const ConfigEntry e{"target", text, "target", 0};
        for (const auto& term : split(body, ';')) {
            if (term.empty()) {
                continue;
            }
            const auto parts = split(term, ':');
            if (parts.size() != 3) {
                throw DomainError("custom target term '" + term + "': expected coordinate:degree:coefficient");
            }
            const auto j = to_uint(e, parts[0]);
            const auto p = to_uint(e, parts[1]);
            if (j < 1) {
                throw DomainError("custom target: coordinates are 1-based");
            }
            if (p > 20) {
                throw DomainError("custom target: degree must be <= 20");
            }
            c.terms.push_back({static_cast<std::uint32_t>(j), static_cast<unsigned>(p), to_double(e, parts[2])});
        }
        return c;
    }
    throw DomainError("unknown target '" + text + "' (first, last, custom:j:p:c;...)");
}

SpectrumJob make_spectrum_job(const Settings& s) {
    SpectrumJob job;
    for (const auto& e : s.entries()) {
        if (e.key == "kernel") {
            job.kernel = with_entry(e, [&] { return parse_kernel(e.value); });
        } else if (e.key == "d") {
            job.d = static_cast<std::size_t>(to_uint(e, e.value));
            if (job.d < 1) {
                fail(e, "d must be >= 1");
            }
        } else if (e.key == "alpha") {
            job.alphas = to_doubles(e);
            for (double a : job.alphas) {
                if (a < 0.0) {
                    fail(e, "alpha must be >= 0");
                }
            }
        } else if (e.key == "seed") {
            job.master_seed = to_uint(e, e.value);
        } else if (e.key == "out") {
            job.out = e.value;
        } else if (e.key == "preset") {
            continue;
        } else {
            fail(e, "not used by the spectrum command");
        }
    }
    return job;
}

RiskJob make_risk_job(const Settings& s) {
    RiskJob job;
    RiskConfig& c = job.config;
    c.d = 10;
    c.n_grid = {25};
    c.seeds = 2;
    c.n_test = 500;
    for (const auto& e : s.entries()) {
        if (e.key == "kernel") {
            const KernelSpec k = with_entry(e, [&] { return parse_kernel(e.value); });
            if (k.kind != KernelKind::hermite) {
                fail(e, "the risk command needs a hermite kernel");
            }
            c.xi = k.coeffs;
        } else if (e.key == "d") {
            c.d = static_cast<std::size_t>(to_uint(e, e.value));
        } else if (e.key == "alpha") {
            c.alphas = to_doubles(e);
        } else if (e.key == "n") {
            c.n_grid = to_sizes(e);
        } else if (e.key == "lambda") {
            c.lambda = to_double(e, e.value);
        } else if (e.key == "seeds") {
            c.seeds = static_cast<std::size_t>(to_uint(e, e.value));
        } else if (e.key == "seed") {
            c.master_seed = to_uint(e, e.value);
        } else if (e.key == "target") {
            c.targets.clear();
            for (const auto& part : split(e.value, ',')) {
                c.targets.push_back(with_entry(e, [&] { return parse_target(part); }));
            }
        } else if (e.key == "noise_sigma") {
            c.noise_sigma = to_double(e, e.value);
        } else if (e.key == "n_test") {
            c.n_test = static_cast<std::size_t>(to_uint(e, e.value));
        } else if (e.key == "delta0") {
            c.delta0 = to_double(e, e.value);
        } else if (e.key == "theory_mode") {
            c.theory_mode = with_entry(e, [&] { return parse_theory_mode(e.value); });
        } else if (e.key == "budget") {
            job.budget_seconds = to_double(e, e.value);
        } else if (e.key == "out") {
            job.out = e.value;
        } else if (e.key == "preset") {
            continue;
        } else {
            fail(e, "not used by the risk command");
        }
    }
    try {
        c.validate();
    } catch (const DomainError& ex) {
        throw ConfigError("risk", 0, "", ex.what());
    }
    for (const auto& t : c.targets) {
        for (const auto& term : t.terms) {
            if (term.coordinate > c.d) {
                throw ConfigError("risk", 0, "target", "custom coordinate exceeds d");
            }
        }
    }
    return job;
}

}  // namespace plk::cli
