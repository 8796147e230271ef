#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plk/covariance.hpp"
#include "plk/multiindex.hpp"
#include "plk/spectral.hpp"

namespace plk {

/// Samples x_i ~ N(0, Sigma) stored row-wise, with whitened copies z = x / sqrt(sigma).
struct Dataset {
    Eigen::MatrixXd X;
    Eigen::MatrixXd Z;
    Eigen::VectorXd y;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    Eigen::Index size() const { return Z.rows(); }
};

/// X and Z only; y is left empty. The same (n, cov, seed) reproduces the same bits.
Dataset sample(std::size_t n, const CovarianceSpec& cov, std::uint64_t seed);

/// Rows of a standard-normal matrix drawn from `rng`, mapped to x = z sqrt(sigma).
Dataset sample_from(std::size_t n, const CovarianceSpec& cov, std::mt19937_64& rng);

struct TargetTerm {
    std::uint32_t coordinate = 1;  // 1-based
    unsigned degree = 0;           // Hermite degree p
    double coefficient = 0.0;
};

/// f*(x) = sum_t c_t he_{p_t}(z_{j_t}) on whitened coordinates.
class TargetFunction {
public:
    TargetFunction() = default;
    /// Throws DomainError on duplicate (coordinate, degree) pairs or coordinate 0.
    explicit TargetFunction(std::vector<TargetTerm> terms, std::string label = "custom");

    std::span<const TargetTerm> terms() const noexcept { return terms_; }
    const std::string& label() const noexcept { return label_; }
    unsigned max_degree() const;

    double operator()(std::span<const double> z) const;
    Eigen::VectorXd evaluate(const Eigen::MatrixXd& Z) const;

    /// Sum of squared coefficients = ||f*||^2_{L2}.
    double norm_squared() const;

    /// Hermite coefficients f*_beta with beta = p e_j (zero index for p = 0), merged.
    std::vector<std::pair<MultiIndex, double>> hermite_coefficients(std::size_t d) const;

private:
    std::vector<TargetTerm> terms_;
    std::string label_;
};

enum class TargetKind { first_coord, last_coord, custom };

/// first_coord / last_coord: he_1 + he_2 + he_3 on coordinate 1 or d.
/// custom: the supplied terms (possibly empty, giving f* = 0).
TargetFunction make_target(TargetKind kind, const CovarianceSpec& cov,
                           std::vector<TargetTerm> custom_terms = {});

/// y = f*(x) + noise_sigma * N(0, 1), noise drawn from `seed`.
void label(Dataset& data, const TargetFunction& target, double noise_sigma, std::uint64_t seed);

/// Hermite kernel sum_k xi_k sum_{|beta|=k} multinomial(beta) sigma^beta He_beta(z) He_beta(z').
class HermiteKernel {
public:
    /// Requires spec.kind == hermite and cov.dim() matching the data.
    HermiteKernel(KernelSpec spec, CovarianceSpec cov);

    const KernelSpec& spec() const noexcept { return spec_; }
    const CovarianceSpec& covariance() const noexcept { return cov_; }

    /// Generating-polynomial evaluation: the level-k term is
    /// k! [t^k] prod_j sum_m (sigma_j t)^m H_m(z_j) H_m(z'_j) / (m!)^2.
    double eval(std::span<const double> z, std::span<const double> zp) const;

    /// Direct summation over all |beta| <= L (oracle); enumeration cap applies.
    double eval_direct(std::span<const double> z, std::span<const double> zp,
                       std::uint64_t cap = 2'000'000) const;

    /// K_{ab} = k(A_a, B_b) on whitened rows.
    Eigen::MatrixXd cross(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) const;
    /// Symmetric Gram matrix of whitened rows.
    Eigen::MatrixXd gram(const Eigen::MatrixXd& Z) const;

private:
    // Rows u[(m - 1) * d + j] = sigma_j^{m/2} H_m(z_j) / m!, m = 1..L.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> features(
        const Eigen::MatrixXd& Z) const;
    double pair_value(const double* u, const double* v) const;

    KernelSpec spec_;
    CovarianceSpec cov_;
    std::vector<double> level_weight_;  // xi_k k!
};

/// Cholesky factorization of K + lambda I, reusable across right-hand sides.
class RidgeSolver {
public:
    /// Throws DomainError for lambda <= 0, NumericalError when K + lambda I is not SPD.
    RidgeSolver(const Eigen::MatrixXd& K, double lambda);

    Eigen::VectorXd solve(const Eigen::VectorXd& y) const;
    /// ||(K + lambda I) a - y|| / ||y|| (0 when y = 0).
    double relative_residual(const Eigen::VectorXd& a, const Eigen::VectorXd& y) const;

private:
    Eigen::MatrixXd K_;
    double lambda_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

struct FittedKRR {
    Eigen::MatrixXd Z_train;
    Eigen::VectorXd dual;  // (K + lambda I)^{-1} y
    double lambda = 0.0;
    double residual = 0.0;
};

FittedKRR fit(const Dataset& data, const HermiteKernel& kernel, double lambda);

/// k_x^T a for a raw covariate x (whitened internally).
double predict(const FittedKRR& model, const HermiteKernel& kernel, std::span<const double> x);
/// Predictions for whitened rows.
Eigen::VectorXd predict_whitened(const FittedKRR& model, const HermiteKernel& kernel,
                                 const Eigen::MatrixXd& Z);

struct RiskEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::size_t samples = 0;
};

/// Mean over n_test fresh points of (f_hat(x) - f*(x))^2 with the standard error of the mean.
RiskEstimate excess_risk_mc(const FittedKRR& model, const HermiteKernel& kernel,
                            const TargetFunction& target, std::size_t n_test, std::uint64_t seed);

/// Same estimate from precomputed predictions and target values.
RiskEstimate squared_error(const Eigen::VectorXd& prediction, const Eigen::VectorXd& truth);

}  // namespace plk
