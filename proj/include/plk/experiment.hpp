#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "plk/krr.hpp"
#include "plk/theory.hpp"

namespace plk {

struct TargetChoice {
    TargetKind kind = TargetKind::first_coord;
    std::vector<TargetTerm> terms;  // custom only
};

struct RiskConfig {
    std::size_t d = 100;
    std::vector<double> alphas{0.0};
    std::vector<double> xi{1.0, 1.0, 1.0, 1.0};
    double lambda = 0.01;
    std::vector<std::size_t> n_grid{25, 50, 100, 200, 400, 800, 1600, 3200};
    std::size_t seeds = 10;
    std::uint64_t master_seed = 0;
    std::size_t n_test = 2000;
    double noise_sigma = 0.0;
    std::vector<TargetChoice> targets{{TargetKind::first_coord, {}}};
    TheoryMode theory_mode = TheoryMode::standard;
    double delta0 = 0.05;

    /// Throws DomainError on empty grids, lambda <= 0, n_test < 100, or alpha < 0.
    void validate() const;
};

struct RiskCurvePoint {
    double alpha = 0.0;
    std::size_t n = 0;
    std::size_t seed_count = 0;
    std::string target;
    double mean_risk = 0.0;
    double std_err = 0.0;        // standard deviation over seeds / sqrt(seeds)
    double std_dev = 0.0;        // standard deviation over seeds
    double relative_risk = 0.0;  // mean_risk / ||f*||^2 (NaN when f* = 0)
    double theory_risk = 0.0;    // in config.theory_mode
    double theory_risk_default = 0.0;
    double theory_risk_literal = 0.0;
    bool theory_preconditions = true;
    std::vector<double> per_seed;
};

/// Nested design: for each (alpha, seed) one training sample of size max(n_grid)
/// and one test sample are drawn; the run at size n uses the first n training
/// rows. Streams are keyed by (master seed, seed index, purpose, alpha bits), so
/// results do not depend on the order of alphas or targets in the config.
std::vector<RiskCurvePoint> run_risk_experiment(
    const RiskConfig& config, const std::function<void(const std::string&)>& progress = {});

/// Rough wall-clock estimate in seconds for `run_risk_experiment`.
double estimate_risk_seconds(const RiskConfig& config);

TargetFunction resolve_target(const TargetChoice& choice, const CovarianceSpec& cov);

/// Combined standard error sqrt(a.std_err^2 + b.std_err^2).
double combined_std_err(const RiskCurvePoint& a, const RiskCurvePoint& b);

}  // namespace plk
