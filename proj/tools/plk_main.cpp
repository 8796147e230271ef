#include <CLI11.hpp>
#include <fstream>
#include <map>
#include <iostream>
#include <sstream>

#include "plk/cli/commands.hpp"
#include "plk/cli/config.hpp"
#include "plk/cli/validate.hpp"

namespace {

using plk::cli::Settings;

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? "," : "") + items[i];
    }
    return out;
}

struct CommonFlags {
    std::string config;
    std::string preset;
    std::string out;
    std::vector<std::pair<std::string, CLI::Option*>> scalar;
    std::vector<std::pair<std::string, CLI::Option*>> lists;
    std::map<std::string, std::string> scalar_values;
    std::map<std::string, std::vector<std::string>> list_values;

    void scalar_flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        scalar.emplace_back(key, app->add_option(flag, scalar_values[key], help));
    }
    void list_flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        lists.emplace_back(key, app->add_option(flag, list_values[key], help)->take_all()->delimiter(','));
    }

    // preset < config file (and its preset) < flags
    Settings resolve() const {
        Settings file;
        if (!config.empty()) {
            file = plk::cli::parse_config_file(config);
        }
        Settings s;
        std::string base = preset;
        if (base.empty()) {
            if (const auto* e = file.find("preset")) {
                base = e->value;
            }
        }
        if (!base.empty()) {
            s = plk::cli::preset(base);
            s.set("preset", base, preset.empty() ? "config" : "flag");
        }
        s.merge(file);
        for (const auto& [key, opt] : scalar) {
            if (opt->count() > 0) {
                s.set(key, scalar_values.at(key), "flag");
            }
        }
        for (const auto& [key, opt] : lists) {
            if (opt->count() > 0) {
                s.set(key, join(list_values.at(key)), "flag");
            }
        }
        return s;
    }
};

void add_kernel_flags(CLI::App* app, CommonFlags& f) {
    f.scalar_flag(app, "--monomial", "kernel:monomial", "monomial kernel <x,x'>^D");
    f.scalar_flag(app, "--poly", "kernel:poly", "polynomial kernel coefficients h0,h1,...");
    f.scalar_flag(app, "--hermite", "kernel:hermite", "Hermite kernel level weights x0,x1,...");
    f.scalar_flag(app, "--exp-trunc", "kernel:exp-trunc", "exp kernel truncated at degree D");
}

// Folds the kernel:* pseudo-keys into a single `kernel` entry.
Settings fold_kernel(const Settings& raw) {
    Settings out;
    int kernels = 0;
    for (const auto& e : raw.entries()) {
        if (e.key.rfind("kernel:", 0) == 0) {
            ++kernels;
            out.set("kernel", e.key.substr(7) + ":" + e.value, e.source, e.line);
        } else {
            out.set(e.key, e.value, e.source, e.line);
        }
    }
    if (kernels > 1) {
        throw plk::cli::ConfigError("flag", 0, "kernel", "choose one of --monomial, --poly, --hermite, --exp-trunc");
    }
    return out;
}

// Settings minus the `out` path, so the echoed config does not depend on where output goes.
Settings echo_of(const Settings& s) {
    Settings out;
    for (const auto& e : s.entries()) {
        if (e.key != "out") {
            out.set(e.key, e.value, e.source, e.line);
        }
    }
    return out;
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw plk::ResourceError("cannot open output file '" + path + "'");
    }
    fn(file);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra of inner-product and Hermite kernels on power-law Gaussian data, and KRR risk curves"};
    app.set_version_flag("--version", std::string("plk ") + PLK_VERSION);
    app.require_subcommand(1);

    CommonFlags spec_flags;
    auto* spectrum = app.add_subcommand("spectrum", "sorted theoretical spectrum as CSV");
    spectrum->add_option("--config", spec_flags.config, "key = value config file");
    spectrum->add_option("--preset", spec_flags.preset, "fig2-left, fig2-right, fig3");
    spec_flags.scalar_flag(spectrum, "--d", "d", "dimension");
    spec_flags.list_flag(spectrum, "--alpha", "alpha", "power-law exponent (repeatable)");
    add_kernel_flags(spectrum, spec_flags);
    spec_flags.scalar_flag(spectrum, "--seed", "seed", "master seed (echoed)");
    spec_flags.scalar_flag(spectrum, "--out", "out", "output CSV path (default stdout)");

    CommonFlags risk_flags;
    bool quiet = false;
    auto* risk = app.add_subcommand("risk", "KRR excess-risk curves with theory predictions as CSV");
    risk->add_option("--config", risk_flags.config, "key = value config file");
    risk->add_option("--preset", risk_flags.preset, "fig4");
    risk_flags.scalar_flag(risk, "--d", "d", "dimension");
    risk_flags.list_flag(risk, "--alpha", "alpha", "power-law exponent (repeatable)");
    add_kernel_flags(risk, risk_flags);
    risk_flags.list_flag(risk, "--n", "n", "training size (repeatable)");
    risk_flags.scalar_flag(risk, "--lambda", "lambda", "ridge parameter");
    risk_flags.scalar_flag(risk, "--seeds", "seeds", "number of seeds");
    risk_flags.scalar_flag(risk, "--seed", "seed", "master seed");
    risk_flags.list_flag(risk, "--target", "target", "first, last or custom:j:p:c;... (repeatable)");
    risk_flags.scalar_flag(risk, "--noise-sigma", "noise_sigma", "label noise standard deviation");
    risk_flags.scalar_flag(risk, "--theory-mode", "theory_mode", "default or literal");
    risk_flags.scalar_flag(risk, "--n-test", "n_test", "test points per seed");
    risk_flags.scalar_flag(risk, "--delta0", "delta0", "Low/High threshold offset");
    risk_flags.scalar_flag(risk, "--budget", "budget", "refuse runs estimated above this many seconds");
    risk_flags.scalar_flag(risk, "--out", "out", "output CSV path (default stdout)");
    risk->add_flag("--quiet", quiet, "no progress lines on stderr");

    std::string suite;
    std::string report_path;
    auto* validate = app.add_subcommand("validate", "run an oracle suite and print a JSON report");
    validate->add_option("suite", suite, "oracle, counting, hermite, krr-equivalence, partition")->required();
    validate->add_option("--out", report_path, "write the JSON report here (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed()) {
            const Settings s = fold_kernel(spec_flags.resolve());
            const auto job = plk::cli::make_spectrum_job(s);
            with_output(job.out, [&](std::ostream& os) { plk::cli::run_spectrum(job, echo_of(s), os); });
        } else if (risk->parsed()) {
            const Settings s = fold_kernel(risk_flags.resolve());
            const auto job = plk::cli::make_risk_job(s);
            with_output(job.out, [&](std::ostream& os) {
                plk::cli::run_risk(job, echo_of(s), os, quiet ? nullptr : &std::cerr);
            });
        } else if (validate->parsed()) {
            const auto report = plk::cli::run_suite(suite);
            with_output(report_path, [&](std::ostream& os) { os << report.to_json() << "\n"; });
            return report.passed() ? 0 : 1;
        }
    } catch (const plk::cli::BudgetError& e) {
        std::cerr << "plk: refused: " << e.what() << "\n";
        return 3;
    } catch (const plk::DomainError& e) {
        std::cerr << "plk: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "plk: error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
