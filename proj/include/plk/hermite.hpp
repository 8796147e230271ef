#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "plk/multiindex.hpp"

namespace plk {

/// Orthonormal probabilists' Hermite polynomials he_p, E_{u~N(0,1)}[he_p he_q] = delta_pq.
class HermiteEvaluator {
public:
    explicit HermiteEvaluator(unsigned max_degree);

    unsigned max_degree() const noexcept { return max_degree_; }

    /// he_p(u); throws DomainError when p > max_degree.
    double he(unsigned p, double u) const;

    /// Writes he_0(u), ..., he_{out.size()-1}(u); out.size() <= max_degree + 1.
    void evaluate_all(double u, std::span<double> out) const;

    /// He_beta(z) = prod_j he_{beta_j}(z_j), product over the support of beta.
    double He(const MultiIndex& beta, std::span<const double> z) const;

private:
    unsigned max_degree_;
    std::vector<double> sqrt_int_;  // sqrt(k) for k = 0..max_degree
};

/// One term of he_p(u)^2 = sum_r coefficient * he_{2r}(u).
/// coefficient = (numerator / denominator) * sqrt((2r)!), the rational part exact.
struct SquareTerm {
    unsigned degree = 0;  // 2r
    std::uint64_t numerator = 1;
    std::uint64_t denominator = 1;
    double coefficient = 0.0;
};

/// Wiener-chaos product formula for he_p^2: coefficient of he_{2r} is
/// C(p, r) sqrt((2r)!) / r!. Requires 2p <= max_degree of `eval` (the
/// evaluator that will consume it) and p <= 20.
std::vector<SquareTerm> square_expansion(unsigned p, unsigned max_degree);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;  // sum to 1
};

/// Gauss-Hermite rule for the standard normal measure (Golub-Welsch).
QuadratureRule gauss_hermite_rule(unsigned nodes);

/// E_{u~N(0,1)}[f(u)] under `rule`.
double gaussian_expectation(const QuadratureRule& rule, const std::function<double(double)>& f);

}  // namespace plk
