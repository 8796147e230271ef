#pragma once

#include <span>

namespace plk {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Throws DomainError when
/// fewer than two points are given or all x coincide.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least squares on (log x, log y); all inputs must be positive.
LinearFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace plk
