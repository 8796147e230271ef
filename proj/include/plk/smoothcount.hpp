#pragma once

#include <cstdint>
#include <vector>

#include "plk/covariance.hpp"
#include "plk/multiindex.hpp"

namespace plk {

/// X_D(L) = |{(i_1, ..., i_D) : 1 <= i_1 <= ... <= i_D <= d, i_1 * ... * i_D <= L}|.
struct CountQuery {
    unsigned D = 1;
    double L = 1.0;
    std::uint64_t d = 1;

    /// Throws DomainError unless D >= 1, L >= 1 and d >= 1.
    void validate() const;
};

/// Ordered-tuple count via the first-coordinate recursion with a minimum-value
/// argument, memoized on (remaining length, floor threshold, minimum value).
std::uint64_t count_recursive(const CountQuery& q);

/// Free-sum recursion X_D(L) = sum_{i=1}^{d} X_{D-1}(floor(L / i)) over
/// unconstrained tuples (counts each multiset once per ordering).
std::uint64_t count_free_sum(const CountQuery& q);

/// Exhaustive enumeration; throws ResourceError when d^D > 10^7.
std::uint64_t count_bruteforce(const CountQuery& q);

struct LowSetCount {
    std::uint64_t count = 0;     // |Low(n)|
    double n = 0.0;              // d^kappa
    double bound = 0.0;          // n^{1 - delta0_prime}
    unsigned D_kappa = 0;        // floor(kappa / (1 - alpha))
    unsigned max_degree = 0;     // largest |beta| present in Low
    bool within_bound = false;   // count <= bound
};

/// floor(kappa / (1 - alpha)); requires alpha in [0, 1) and kappa > 0.
unsigned predictor_degree(double alpha, double kappa);

/// Exact |Low(n)| = |{beta : |beta| <= D(kappa), sigma^beta > d^{-(kappa + delta0)}}|
/// with thresholds compared in log space. Throws AssumptionError when kappa is
/// an integer or D(kappa)(1 - alpha) = kappa, DomainError outside alpha in [0, 1).
LowSetCount low_set_cardinality(const CovarianceSpec& cov, double kappa, double delta0,
                                double delta0_prime = 0.0);

}  // namespace plk
