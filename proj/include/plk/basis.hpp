#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "plk/covariance.hpp"
#include "plk/multiindex.hpp"

namespace plk {

inline constexpr std::size_t kDenseCap = 5000;

/// z^beta = sum over kbar <= beta, kbar = beta (mod 2) of coefficient * He_kbar(z),
/// with per-coordinate factor beta_i! / (2^{m} m! sqrt(kbar_i!)), m = (beta_i - kbar_i)/2.
std::vector<std::pair<MultiIndex, double>> hermite_expand_monomial(const MultiIndex& beta);

/// Dense matrix indexed by the canonical multi-index order (|beta| <= D).
struct BasisMatrix {
    std::vector<MultiIndex> index;
    Eigen::MatrixXd values;
    double op_norm = 0.0;      // ||Lambda||_op
    double inv_op_norm = 0.0;  // ||Lambda^{-1}||_op
};

/// Change of basis Phi = Lambda Psi between monomial features
/// Phi_beta = sqrt(h_{|beta|} multinomial(beta) sigma^beta) z^beta and Hermite features
/// Psi_beta = sqrt(h_{|beta|} multinomial(beta) sigma^beta) He_beta(z).
/// Row beta has nonzeros only in columns kbar <= beta, so the matrix is lower-triangular
/// in canonical (ascending-degree) order; its diagonal is sqrt(beta!).
/// Throws DomainError if some h_k (k <= D) is zero, ResourceError past `cap`.
BasisMatrix build_lambda(std::size_t d, unsigned D, std::span<const double> h, const CovarianceSpec& cov,
                         std::size_t cap = kDenseCap);

/// M_{beta,gamma} = sqrt(h_{|beta|} mult(beta)) sqrt(h_{|gamma|} mult(gamma)) E[x^{beta+gamma}],
/// x ~ N(0, Sigma). Its eigenvalues are those of the truncated kernel operator.
BasisMatrix moment_matrix(std::size_t d, unsigned D, std::span<const double> h, const CovarianceSpec& cov,
                          std::size_t cap = kDenseCap);

/// E[x^{beta}] for x ~ N(0, diag(sigma)): prod_j (beta_j - 1)!! sigma_j^{beta_j/2}, zero if any beta_j odd.
double gaussian_moment(const MultiIndex& beta, const CovarianceSpec& cov);

struct FactorizationReport {
    std::size_t dim = 0;
    double phi_deviation = 0.0;             // max |Phi(z) - Lambda Psi(z)| over sampled z
    double reconstruction_deviation = 0.0;  // max |M - Lambda diag(C) Lambda^T|
    double exact_value_deviation = 0.0;     // max relative |eig(M) - h_k k! sigma^beta| (sorted)
    double op_norm = 0.0;
    double inv_op_norm = 0.0;
    std::vector<double> eig_m;              // descending
    std::vector<double> exact_values;       // h_{|beta|} |beta|! sigma^beta, descending
    std::vector<double> hermite_diag;       // C_beta = h_{|beta|} mult(beta) sigma^beta, descending
    std::vector<double> sigma_beta;         // sigma^beta, descending
    bool weighted_bound_ok = false;         // ||L^-1||^-2 C_(k) <= eig_(k) <= ||L||^2 C_(k)
    bool sigma_bound_ok = false;            // same with sigma^beta in place of C_beta
    double weighted_bound_margin = 0.0;     // min over k of the relative slack (>= 0 when ok)
};

/// Checks Phi = Lambda Psi by Monte Carlo, M = Lambda diag(C) Lambda^T exactly,
/// compares eig(M) with h_{|beta|}|beta|! sigma^beta, and tests the congruence bounds.
FactorizationReport verify_factorization(std::size_t d, unsigned D, std::span<const double> h,
                                         const CovarianceSpec& cov, std::size_t mc_samples,
                                         std::uint64_t seed);

}  // namespace plk
