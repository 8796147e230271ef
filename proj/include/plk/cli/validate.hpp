#pragma once

#include <string>
#include <vector>

namespace plk::cli {

struct CheckResult {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool passed() const;
    /// {"suite": ..., "passed": ..., "checks": [...]}
    std::string to_json() const;
};

/// oracle, counting, hermite, krr-equivalence, partition.
std::vector<std::string> suite_names();

/// Throws DomainError for an unknown suite.
SuiteReport run_suite(const std::string& name);

}  // namespace plk::cli
