#pragma once

#include <iosfwd>
#include <string>

#include "plk/cli/config.hpp"

namespace plk::cli {

inline constexpr const char* kSpectrumColumns[] = {"alpha", "rank", "beta_string", "degree", "lambda",
                                                   "predicted_lambda", "reference_lambda", "sector"};
inline constexpr const char* kRiskColumns[] = {"alpha", "n", "seed_count", "target", "mean_risk", "std_err",
                                               "std_dev", "relative_risk", "theory_risk", "theory_mode",
                                               "theory_risk_default", "theory_risk_literal"};

/// Spectrum CSV for every alpha; gap reports go into `#` lines.
void run_spectrum(const SpectrumJob& job, const Settings& echo, std::ostream& out);

/// Refuses with BudgetError when the estimate exceeds the budget.
void run_risk(const RiskJob& job, const Settings& echo, std::ostream& out, std::ostream* progress);

class BudgetError : public ResourceError {
public:
    BudgetError(double estimate, double budget);
    double estimate() const noexcept { return estimate_; }
    double budget() const noexcept { return budget_; }

private:
    double estimate_;
    double budget_;
};

}  // namespace plk::cli
