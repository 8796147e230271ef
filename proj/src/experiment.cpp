#include "plk/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "plk/errors.hpp"
#include "plk/rng.hpp"

namespace plk {

namespace {

enum Purpose : std::uint64_t { kTrain = 1, kTest = 2, kNoise = 3 };

// Seconds per elementary kernel-pair step and per LLT flop, fitted to the
// d = 100 fig4 preset on one core with -O2.
constexpr double kPairStepSeconds = 1.25e-9;
constexpr double kFlopSeconds = 0.35e-9;

double pair_cost(const RiskConfig& c) {
    const double L = static_cast<double>(c.xi.size() - 1);
    return static_cast<double>(c.d) * (L + L * (L + 1.0) / 2.0);
}

struct SeedStats {
    double mean = 0.0;
    double sd = 0.0;
};

SeedStats seed_stats(const std::vector<double>& v) {
    SeedStats s;
    if (v.empty()) {
        return s;
    }
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) {
            ss += (x - s.mean) * (x - s.mean);
        }
        s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

}  // namespace

void RiskConfig::validate() const {
    if (d < 2) {
        throw DomainError("risk config: d must be >= 2");
    }
    if (alphas.empty() || n_grid.empty() || targets.empty()) {
        throw DomainError("risk config: alpha list, n grid and targets must be non-empty");
    }
    for (double a : alphas) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw DomainError("risk config: alpha must be finite and >= 0");
        }
    }
    for (std::size_t n : n_grid) {
        if (n < 1) {
            throw DomainError("risk config: every n must be >= 1");
        }
    }
    if (!(lambda > 0.0)) {
        throw DomainError("risk config: lambda must be > 0");
    }
    if (seeds < 1) {
        throw DomainError("risk config: seeds must be >= 1");
    }
    if (n_test < 100) {
        throw DomainError("risk config: n_test must be >= 100");
    }
    if (!(noise_sigma >= 0.0)) {
        throw DomainError("risk config: noise sigma must be >= 0");
    }
    KernelSpec::hermite(xi).validate();
}

TargetFunction resolve_target(const TargetChoice& choice, const CovarianceSpec& cov) {
    return make_target(choice.kind, cov, choice.terms);
}

double combined_std_err(const RiskCurvePoint& a, const RiskCurvePoint& b) {
    return std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err);
}

double estimate_risk_seconds(const RiskConfig& c) {
    const double n_max = static_cast<double>(*std::max_element(c.n_grid.begin(), c.n_grid.end()));
    const double pairs = n_max * (n_max + 1.0) / 2.0 + static_cast<double>(c.n_test) * n_max;
    double flops = 0.0;
    for (std::size_t n : c.n_grid) {
        const double m = static_cast<double>(n);
        flops += m * m * m / 3.0 + 2.0 * static_cast<double>(c.n_test) * m * static_cast<double>(c.targets.size());
    }
    const double per_seed = pairs * pair_cost(c) * kPairStepSeconds + flops * kFlopSeconds;
    return per_seed * static_cast<double>(c.seeds * c.alphas.size());
}

std::vector<RiskCurvePoint> run_risk_experiment(const RiskConfig& config,
                                                const std::function<void(const std::string&)>& progress) {
    config.validate();
    const KernelSpec spec = KernelSpec::hermite(config.xi);
    std::vector<std::size_t> grid = config.n_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const std::size_t n_max = grid.back();
    const std::size_t n_targets = config.targets.size();

    std::vector<RiskCurvePoint> out;
    for (double alpha : config.alphas) {
        const CovarianceSpec cov = CovarianceSpec::power_law(config.d, alpha);
        const HermiteKernel kernel(spec, cov);
        const std::uint64_t alpha_id = std::bit_cast<std::uint64_t>(alpha);
        std::vector<TargetFunction> targets;
        for (const auto& t : config.targets) {
            targets.push_back(resolve_target(t, cov));
        }

        // risk[target][grid index][seed]
        std::vector<std::vector<std::vector<double>>> risk(
            n_targets, std::vector<std::vector<double>>(grid.size(), std::vector<double>(config.seeds)));

        for (std::size_t s = 0; s < config.seeds; ++s) {
            auto train_rng = make_stream(config.master_seed, {s, kTrain, alpha_id});
            auto test_rng = make_stream(config.master_seed, {s, kTest, alpha_id});
            Dataset train = sample_from(n_max, cov, train_rng);
            const Dataset test = sample_from(config.n_test, cov, test_rng);

            const Eigen::MatrixXd K = kernel.gram(train.Z);
            const Eigen::MatrixXd K_test = kernel.cross(test.Z, train.Z);

            std::vector<Eigen::VectorXd> y(n_targets);
            std::vector<Eigen::VectorXd> truth(n_targets);
            for (std::size_t t = 0; t < n_targets; ++t) {
                auto noise_rng = make_stream(config.master_seed, {s, kNoise, alpha_id, t});
                label(train, targets[t], config.noise_sigma, noise_rng());
                y[t] = train.y;
                truth[t] = targets[t].evaluate(test.Z);
            }

            for (std::size_t g = 0; g < grid.size(); ++g) {
                const auto n = static_cast<Eigen::Index>(grid[g]);
                const RidgeSolver solver(K.topLeftCorner(n, n), config.lambda);
                for (std::size_t t = 0; t < n_targets; ++t) {
                    const Eigen::VectorXd a = solver.solve(y[t].head(n));
                    const Eigen::VectorXd pred = K_test.leftCols(n) * a;
                    risk[t][g][s] = (pred - truth[t]).squaredNorm() / static_cast<double>(config.n_test);
                }
            }
            if (progress) {
                std::ostringstream msg;
                msg << "alpha=" << alpha << " seed " << (s + 1) << "/" << config.seeds << " done";
                progress(msg.str());
            }
        }

        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double n = static_cast<double>(grid[g]);
            const bool have_theory = alpha < 1.0 && n > 1.0;
            FrequencyPartition part;
            if (have_theory) {
                part = partition(cov, spec, n, config.delta0);
            }
            for (std::size_t t = 0; t < n_targets; ++t) {
                RiskCurvePoint p;
                p.alpha = alpha;
                p.n = grid[g];
                p.seed_count = config.seeds;
                p.target = targets[t].label();
                p.per_seed = risk[t][g];
                const SeedStats st = seed_stats(p.per_seed);
                p.mean_risk = st.mean;
                p.std_dev = st.sd;
                p.std_err = st.sd / std::sqrt(static_cast<double>(config.seeds));
                const double norm = targets[t].norm_squared();
                p.relative_risk = norm > 0.0 ? p.mean_risk / norm : std::numeric_limits<double>::quiet_NaN();
                if (have_theory) {
                    const auto a = effective_risk(part, targets[t], n, config.lambda, spec, cov, TheoryMode::standard);
                    const auto b = effective_risk(part, targets[t], n, config.lambda, spec, cov, TheoryMode::literal);
                    p.theory_risk_default = a.risk;
                    p.theory_risk_literal = b.risk;
                    p.theory_preconditions = a.preconditions_hold;
                    p.theory_risk = config.theory_mode == TheoryMode::standard ? a.risk : b.risk;
                } else {
                    p.theory_risk = p.theory_risk_default = p.theory_risk_literal =
                        std::numeric_limits<double>::quiet_NaN();
                    p.theory_preconditions = false;
                }
                out.push_back(std::move(p));
            }
        }
    }
    return out;
}

}  // namespace plk
