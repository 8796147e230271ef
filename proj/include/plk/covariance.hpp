#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace plk {

/// Diagonal covariance Sigma = diag(sigma_1, ..., sigma_d).
///
/// The power-law family has sigma_j = c_alpha * j^{-alpha} with c_alpha chosen
/// so that Tr Sigma = 1; then c_alpha = 1 / r0.  `from_diagonal` admits any
/// positive diagonal (alpha is then reported as NaN).
class CovarianceSpec {
public:
    static CovarianceSpec power_law(std::size_t d, double alpha);
    static CovarianceSpec from_diagonal(std::vector<double> sigma);

    std::size_t dim() const noexcept { return sigma_.size(); }
    double alpha() const noexcept { return alpha_; }
    double c_alpha() const noexcept { return c_alpha_; }
    std::span<const double> sigma() const noexcept { return sigma_; }
    double sigma(std::size_t j1) const { return sigma_.at(j1 - 1); }  // 1-based
    std::span<const double> log_sigma() const noexcept { return log_sigma_; }
    double trace() const noexcept { return trace_; }

private:
    CovarianceSpec() = default;
    void finish();

    double alpha_ = 0.0;
    double c_alpha_ = 1.0;
    double trace_ = 0.0;
    std::vector<double> sigma_;
    std::vector<double> log_sigma_;
};

/// Same as CovarianceSpec::power_law.
CovarianceSpec build_covariance(std::size_t d, double alpha);

/// Sum_{j=1}^d j^{-alpha}, summed from j = d downwards.
double power_partial_sum(std::size_t d, double alpha);

/// r0 = Tr Sigma / sigma_1.
double r0(const CovarianceSpec& cov);
/// R0 = (Tr Sigma)^2 / Tr Sigma^2.
double R0(const CovarianceSpec& cov);

struct ScalingReport {
    double alpha = 0.0;
    std::vector<double> d_grid;
    std::vector<double> r0_values;
    std::vector<double> R0_values;
    double r0_exponent = 0.0;
    double R0_exponent = 0.0;
    double predicted_r0_exponent = 0.0;
    double predicted_R0_exponent = 0.0;
};

/// Predicted growth exponent of r0 in d: 1 - alpha below alpha = 1, 0 from 1 on
/// (alpha = 1 grows like log d).
double predicted_r0_exponent(double alpha);
/// Predicted growth exponent of R0 in d: 1 up to 1/2, 2 - 2 alpha on (1/2, 1), 0 after.
double predicted_R0_exponent(double alpha);

/// Log-log least-squares exponents of r0 and R0 over `d_grid`.
/// Throws DomainError if the grid has < 2 points, is not strictly increasing,
/// or is otherwise degenerate.
ScalingReport check_asymptotics(double alpha, std::span<const std::size_t> d_grid);

}  // namespace plk
