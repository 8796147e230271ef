#include "plk/hermite.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "plk/errors.hpp"

namespace plk {

HermiteEvaluator::HermiteEvaluator(unsigned max_degree) : max_degree_(max_degree) {
    sqrt_int_.resize(max_degree + 2);
    for (unsigned k = 0; k < sqrt_int_.size(); ++k) {
        sqrt_int_[k] = std::sqrt(static_cast<double>(k));
    }
}

double HermiteEvaluator::he(unsigned p, double u) const {
    if (p > max_degree_) {
        throw DomainError("he: degree " + std::to_string(p) + " exceeds max degree " +
                          std::to_string(max_degree_));
    }
    if (p == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = u;
    for (unsigned k = 1; k < p; ++k) {
        const double next = (u * cur - sqrt_int_[k] * prev) / sqrt_int_[k + 1];
        prev = cur;
        cur = next;
    }
    return cur;
}

void HermiteEvaluator::evaluate_all(double u, std::span<double> out) const {
    if (out.empty()) {
        return;
    }
    if (out.size() > max_degree_ + 1) {
        throw DomainError("evaluate_all: requested degrees exceed max degree");
    }
    out[0] = 1.0;
    if (out.size() > 1) {
        out[1] = u;
    }
    for (std::size_t k = 1; k + 1 < out.size(); ++k) {
        out[k + 1] = (u * out[k] - sqrt_int_[k] * out[k - 1]) / sqrt_int_[k + 1];
    }
}

double HermiteEvaluator::He(const MultiIndex& beta, std::span<const double> z) const {
    if (z.size() != beta.dim()) {
        throw DomainError("He: point has dimension " + std::to_string(z.size()) +
                          ", multi-index has " + std::to_string(beta.dim()));
    }
    double out = 1.0;
    for (const auto& [j, e] : beta.terms()) {
        out *= he(e, z[j - 1]);
    }
    return out;
}

std::vector<SquareTerm> square_expansion(unsigned p, unsigned max_degree) {
    if (2 * p > max_degree) {
        throw DomainError("square_expansion: he_" + std::to_string(p) +
                          "^2 needs degree " + std::to_string(2 * p) + " > max degree " +
                          std::to_string(max_degree));
    }
    if (p > 20) {
        throw DomainError("square_expansion: exact coefficients supported for p <= 20");
    }
    std::vector<SquareTerm> out;
    out.reserve(p + 1);
    for (unsigned r = 0; r <= p; ++r) {
        SquareTerm t;
        t.degree = 2 * r;
        std::uint64_t num = binomial(p, r);
        std::uint64_t den = factorial(r);
        const std::uint64_t g = std::gcd(num, den);
        t.numerator = num / g;
        t.denominator = den / g;
        // sqrt((2r)!) accumulated as a product of square roots to stay finite for r <= 20.
        double sqrt_fact = 1.0;
        for (unsigned k = 2; k <= 2 * r; ++k) {
            sqrt_fact *= std::sqrt(static_cast<double>(k));
        }
        t.coefficient = static_cast<double>(t.numerator) / static_cast<double>(t.denominator) *
                        sqrt_fact;
        out.push_back(t);
    }
    return out;
}

QuadratureRule gauss_hermite_rule(unsigned nodes) {
    if (nodes == 0) {
        throw DomainError("gauss_hermite_rule: need at least one node");
    }
    // Jacobi matrix of the monic probabilists' Hermite recurrence.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(nodes, nodes);
    for (unsigned k = 1; k < nodes; ++k) {
        const double b = std::sqrt(static_cast<double>(k));
        jacobi(k - 1, k) = b;
        jacobi(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    QuadratureRule rule;
    rule.nodes.resize(nodes);
    rule.weights.resize(nodes);
    for (unsigned i = 0; i < nodes; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = v0 * v0;
    }
    const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
    for (double& w : rule.weights) {
        w /= total;
    }
    return rule;
}

double gaussian_expectation(const QuadratureRule& rule, const std::function<double(double)>& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(rule.nodes[i]);
    }
    return sum;
}

}  // namespace plk
