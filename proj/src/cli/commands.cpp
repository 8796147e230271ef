#include "plk/cli/commands.hpp"

#include <cmath>
#include <iterator>
#include <ostream>
#include <sstream>

#include "plk/cli/csv.hpp"
#include "plk/covariance.hpp"
#include "plk/experiment.hpp"

namespace plk::cli {

namespace {

std::vector<std::string> columns(std::span<const char* const> names) {
    return {names.begin(), names.end()};
}

// log C for C * m^{-alpha} through ranks 10..1000 of the positive spectrum.
double reference_log_constant(const std::vector<SpectrumEntry>& spectrum, double alpha) {
    double acc = 0.0;
    std::size_t count = 0;
    const std::size_t lo = std::min<std::size_t>(10, spectrum.size());
    const std::size_t hi = std::min<std::size_t>(1000, spectrum.size());
    for (std::size_t m = lo; m <= hi; ++m) {
        const double lam = spectrum[m - 1].lambda;
        if (lam > 0.0) {
            acc += std::log(lam) + alpha * std::log(static_cast<double>(m));
            ++count;
        }
    }
    return count ? acc / static_cast<double>(count) : 0.0;
}

}  // namespace

BudgetError::BudgetError(double estimate, double budget)
    : ResourceError("estimated run time " + format_double(std::round(estimate)) + " s exceeds the budget of " +
                    format_double(budget) + " s; raise it with --budget"),
      estimate_(estimate),
      budget_(budget) {}

void run_spectrum(const SpectrumJob& job, const Settings& echo, std::ostream& out) {
    struct Block {
        double alpha;
        std::vector<SpectrumEntry> spectrum;
        SectorLayout layout;
        std::vector<GapReport> gaps;
    };
    std::vector<Block> blocks;
    for (double alpha : job.alphas) {
        const CovarianceSpec cov = CovarianceSpec::power_law(job.d, alpha);
        Block b{alpha, full_spectrum(job.kernel, cov), sector_layout(job.kernel, cov), {}};
        if (job.kernel.kind != KernelKind::monomial) {
            b.gaps = spectral_gaps(job.kernel, cov);
        }
        blocks.push_back(std::move(b));
    }

    write_header(out, "spectrum", "spectrum", job.master_seed, echo);
    out << "# kernel: " << job.kernel.describe() << "\n";
    for (const auto& b : blocks) {
        out << "# r0: alpha=" << format_double(b.alpha) << " value=" << format_double(b.layout.r0) << "\n";
        for (const auto& g : b.gaps) {
            out << "# gap: alpha=" << format_double(b.alpha) << " level=" << g.level
                << " predicted=" << (g.predicted ? 1 : 0) << " asymptotic=" << (g.asymptotic ? 1 : 0)
                << " empirical_ratio=" << format_double(g.empirical_ratio) << "\n";
        }
    }
    write_row(out, columns(kSpectrumColumns));
    for (const auto& b : blocks) {
        const double log_c = reference_log_constant(b.spectrum, b.alpha);
        const std::string alpha = format_double(b.alpha);
        for (std::size_t i = 0; i < b.spectrum.size(); ++i) {
            const auto& e = b.spectrum[i];
            const std::uint64_t rank = i + 1;
            const OrderPrediction p = predicted_order(b.layout, rank);
            const double ref = std::exp(log_c - b.alpha * std::log(static_cast<double>(rank)));
            write_row(out, {alpha, std::to_string(rank), e.beta.to_string(), std::to_string(e.degree),
                            format_double(e.lambda), format_double(p.value), format_double(ref), p.sector});
        }
    }
}

void run_risk(const RiskJob& job, const Settings& echo, std::ostream& out, std::ostream* progress) {
    const double estimate = estimate_risk_seconds(job.config);
    if (estimate > job.budget_seconds) {
        throw BudgetError(estimate, job.budget_seconds);
    }
    std::function<void(const std::string&)> report;
    if (progress) {
        report = [progress](const std::string& msg) { *progress << msg << std::endl; };
    }
    const auto points = run_risk_experiment(job.config, report);

    write_header(out, "risk", "risk", job.config.master_seed, echo);
    write_row(out, columns(kRiskColumns));
    const std::string mode = to_string(job.config.theory_mode);
    for (const auto& p : points) {
        write_row(out, {format_double(p.alpha), std::to_string(p.n), std::to_string(p.seed_count), p.target,
                        format_double(p.mean_risk), format_double(p.std_err), format_double(p.std_dev),
                        format_double(p.relative_risk), format_double(p.theory_risk), mode,
                        format_double(p.theory_risk_default), format_double(p.theory_risk_literal)});
    }
}

}  // namespace plk::cli
