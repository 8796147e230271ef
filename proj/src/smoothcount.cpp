#include "plk/smoothcount.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include "plk/errors.hpp"

namespace plk {

namespace {

constexpr std::uint64_t kBruteForceCap = 10'000'000;
constexpr unsigned kLowScanMaxDegree = 64;

std::uint64_t floor_threshold(double L) {
    return static_cast<std::uint64_t>(std::floor(L));
}

class OrderedCounter {
public:
    explicit OrderedCounter(std::uint64_t d) : d_(d) {}

    // Nondecreasing tuples of length k, entries in [lo, d], product <= T.
    std::uint64_t count(unsigned k, std::uint64_t T, std::uint64_t lo) {
        if (k == 0) {
            return 1;
        }
        if (lo > T) {
            return 0;
        }
        const auto key = std::make_tuple(k, T, lo);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        std::uint64_t total = 0;
        const std::uint64_t hi = std::min(d_, T);
        for (std::uint64_t i = lo; i <= hi; ++i) {
            // the remaining k - 1 entries are >= i, so i^k <= T is necessary
            if (!fits_power(i, k, T)) {
                break;
            }
            total += count(k - 1, T / i, i);
        }
        memo_.emplace(key, total);
        return total;
    }

private:
    static bool fits_power(std::uint64_t i, unsigned k, std::uint64_t T) {
        std::uint64_t p = 1;
        for (unsigned r = 0; r < k; ++r) {
            if (p > T / i) {
                return false;
            }
            p *= i;
        }
        return p <= T;
    }

    std::uint64_t d_;
    std::map<std::tuple<unsigned, std::uint64_t, std::uint64_t>, std::uint64_t> memo_;
};

}  // namespace

void CountQuery::validate() const {
    if (D < 1) {
        throw DomainError("CountQuery: D must be >= 1");
    }
    if (!(L >= 1.0) || !std::isfinite(L)) {
        throw DomainError("CountQuery: L must be a finite real >= 1");
    }
    if (d < 1) {
        throw DomainError("CountQuery: d must be >= 1");
    }
}

std::uint64_t count_recursive(const CountQuery& q) {
    q.validate();
    OrderedCounter counter(q.d);
    return counter.count(q.D, floor_threshold(q.L), 1);
}

std::uint64_t count_free_sum(const CountQuery& q) {
    q.validate();
    std::map<std::pair<unsigned, std::uint64_t>, std::uint64_t> memo;
    std::function<std::uint64_t(unsigned, std::uint64_t)> rec = [&](unsigned k, std::uint64_t T) -> std::uint64_t {
        if (k == 0) {
            return 1;
        }
        if (T == 0) {
            return 0;
        }
        const auto key = std::make_pair(k, T);
        if (auto it = memo.find(key); it != memo.end()) {
            return it->second;
        }
        std::uint64_t total = 0;
        const std::uint64_t hi = std::min(q.d, T);
        for (std::uint64_t i = 1; i <= hi; ++i) {
            total += rec(k - 1, T / i);
        }
        memo.emplace(key, total);
        return total;
    };
    return rec(q.D, floor_threshold(q.L));
}

std::uint64_t count_bruteforce(const CountQuery& q) {
    q.validate();
    double space = 1.0;
    for (unsigned k = 0; k < q.D; ++k) {
        space *= static_cast<double>(q.d);
    }
    if (space > static_cast<double>(kBruteForceCap)) {
        throw ResourceError("count_bruteforce: d^D = " + std::to_string(space) + " exceeds 1e7");
    }
    std::vector<std::uint64_t> tuple(q.D, 1);
    std::uint64_t total = 0;
    while (true) {
        bool ordered = true;
        double prod = 1.0;
        for (unsigned k = 0; k < q.D; ++k) {
            if (k > 0 && tuple[k - 1] > tuple[k]) {
                ordered = false;
            }
            prod *= static_cast<double>(tuple[k]);
        }
        if (ordered && prod <= q.L) {
            ++total;
        }
        unsigned pos = 0;
        while (pos < q.D && tuple[pos] == q.d) {
            tuple[pos] = 1;
            ++pos;
        }
        if (pos == q.D) {
            break;
        }
        ++tuple[pos];
    }
    return total;
}

unsigned predictor_degree(double alpha, double kappa) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw DomainError("predictor_degree: alpha must lie in [0, 1)");
    }
    if (!(kappa > 0.0)) {
        throw DomainError("predictor_degree: kappa must be > 0");
    }
    return static_cast<unsigned>(std::floor(kappa / (1.0 - alpha)));
}

LowSetCount low_set_cardinality(const CovarianceSpec& cov, double kappa, double delta0,
                                double delta0_prime) {
    const double alpha = cov.alpha();
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw DomainError("low_set_cardinality: alpha must lie in [0, 1)");
    }
    constexpr double kTol = 1e-12;
    if (std::abs(kappa - std::round(kappa)) < kTol) {
        throw AssumptionError("low_set_cardinality: kappa must not be an integer");
    }
    LowSetCount out;
    out.D_kappa = predictor_degree(alpha, kappa);
    if (std::abs(out.D_kappa * (1.0 - alpha) - kappa) < kTol) {
        throw AssumptionError("low_set_cardinality: D(kappa)(1 - alpha) equals kappa");
    }
    const std::size_t d = cov.dim();
    const double log_d = std::log(static_cast<double>(d));
    const double threshold = -(kappa + delta0) * log_d;
    out.n = std::exp(kappa * log_d);
    out.bound = std::exp((1.0 - delta0_prime) * kappa * log_d);

    // Depth-first scan over the support in ascending coordinate order. Since
    // sigma is non-increasing, once coordinate j fails every later one does too.
    const auto log_sigma = cov.log_sigma();
    std::function<void(std::size_t, double, unsigned)> scan = [&](std::size_t start, double acc,
                                                                 unsigned degree) {
        ++out.count;
        out.max_degree = std::max(out.max_degree, degree);
        if (degree >= kLowScanMaxDegree) {
            return;
        }
        for (std::size_t j = start; j < d; ++j) {
            if (acc + log_sigma[j] <= threshold) {
                break;
            }
            double a = acc;
            for (unsigned e = 1; degree + e <= kLowScanMaxDegree; ++e) {
                a += log_sigma[j];
                if (a <= threshold) {
                    break;
                }
                scan(j + 1, a, degree + e);
            }
        }
    };
    scan(0, 0.0, 0);
    out.within_bound = static_cast<double>(out.count) <= out.bound;
    return out;
}

}  // namespace plk
