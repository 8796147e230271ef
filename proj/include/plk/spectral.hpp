#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plk/covariance.hpp"
#include "plk/multiindex.hpp"

namespace plk {

enum class KernelKind {
    monomial,            // h(t) = h_D t^D
    polynomial,          // h(t) = sum_{k<=D} h_k t^k
    truncated_analytic,  // Taylor coefficients of an analytic h, cut at degree D
    hermite              // sum_k xi_k sum_{|beta|=k} multinomial(beta) sigma^beta He_beta He_beta
};

/// A kernel identified by its level coefficients c_0..c_D (h_k for inner-product
/// kernels, xi_k for the Hermite kernel). All coefficients are >= 0.
struct KernelSpec {
    KernelKind kind = KernelKind::polynomial;
    std::string name;
    std::vector<double> coeffs;

    static KernelSpec monomial(unsigned degree, double coefficient = 1.0);
    static KernelSpec polynomial(std::vector<double> h);
    /// (c + t)^degree expanded in powers of t.
    static KernelSpec binomial_power(double c, unsigned degree);
    /// exp(t) truncated after the t^degree term.
    static KernelSpec exp_truncated(unsigned degree);
    static KernelSpec hermite(std::vector<double> xi);

    unsigned truncation() const { return static_cast<unsigned>(coeffs.size()) - 1; }
    double level(unsigned k) const { return k < coeffs.size() ? coeffs[k] : 0.0; }
    bool is_inner_product() const { return kind != KernelKind::hermite; }

    /// Throws DomainError when coefficients are empty, negative or non-finite.
    void validate() const;
    std::string describe() const;
};

struct SpectrumEntry {
    MultiIndex beta;
    double lambda = 0.0;
    unsigned degree = 0;
};

/// sigma^beta = prod sigma_j^{beta_j}.
double sigma_power(const MultiIndex& beta, const CovarianceSpec& cov);
/// log sigma^beta, accumulated in log space.
double log_sigma_power(const MultiIndex& beta, const CovarianceSpec& cov);

/// xi_{|beta|} * multinomial(beta) * sigma^beta.
double hermite_eigenvalue(const MultiIndex& beta, std::span<const double> xi,
                          const CovarianceSpec& cov);
/// h_{|beta|} * |beta|! * sigma^beta.
double monomial_eigenvalue(const MultiIndex& beta, std::span<const double> h,
                           const CovarianceSpec& cov);
/// Dispatches on spec.kind.
double kernel_eigenvalue(const KernelSpec& spec, const MultiIndex& beta, const CovarianceSpec& cov);

/// All C(d + D, D) entries sorted by lambda descending, ties in canonical order.
std::vector<SpectrumEntry> full_spectrum(const KernelSpec& spec, const CovarianceSpec& cov,
                                         std::uint64_t cap = kDefaultEnumerationCap);

/// Number of entries of a descending spectrum with lambda >= eps.
std::size_t counting_M(const std::vector<SpectrumEntry>& sorted_desc, double eps);
std::size_t counting_M(const KernelSpec& spec, const CovarianceSpec& cov, double eps);

struct GapReport {
    unsigned level = 0;             // gap between levels `level` and `level + 1`
    bool predicted = false;         // 1/(r0^l d^{alpha l}) > 1/r0^{l+1} at this d
    bool asymptotic = false;        // alpha <= 1/(l + 1)
    double empirical_ratio = 0.0;   // min lambda at level l / max lambda at level l+1
};

std::vector<GapReport> spectral_gaps(const KernelSpec& spec, const CovarianceSpec& cov);
/// Uses the power-law covariance and the kernel (1 + <x,x'>)^D.
std::vector<GapReport> spectral_gaps(double alpha, std::size_t d, unsigned D);

/// Contiguous block of ranks sharing one Theta-form prediction.
struct Sector {
    std::string label;        // "level-0", "gap-j", "continuous-j", "monomial", "null"
    unsigned level = 0;       // j in the prediction exponent r0^{-(j+1)}
    std::uint64_t first = 0;  // first rank (1-based, inclusive)
    std::uint64_t last = 0;   // last rank (inclusive)
    std::uint64_t offset = 0; // m+ = m - offset
};

struct SectorLayout {
    double alpha = 0.0;
    double r0 = 1.0;
    std::uint64_t total = 0;
    unsigned consecutive_gaps = 0;
    std::vector<Sector> sectors;
};

/// Rank sectors of the predicted spectrum (gap sectors, then continuous
/// sub-sectors split at sigma^beta = d^{-(j+1)}).
SectorLayout sector_layout(const KernelSpec& spec, const CovarianceSpec& cov);

struct OrderPrediction {
    double value = 0.0;  // (m+)^{-alpha} / r0^{j+1}, up to constants and polylogs
    std::string sector;
    unsigned level = 0;
    std::uint64_t m_plus = 0;
};

/// Theta-form prediction for the m-th eigenvalue; throws DomainError for m outside [1, total].
OrderPrediction predicted_order(const SectorLayout& layout, std::uint64_t m);
OrderPrediction predicted_order(const KernelSpec& spec, const CovarianceSpec& cov, std::uint64_t m);

/// Taylor coefficients h_k of an analytic inner-product function.
struct AnalyticCoefficients {
    std::string name;
    std::function<double(unsigned)> coeff;
    std::optional<unsigned> degree;  // set for polynomials

    static AnalyticCoefficients exp();
    static AnalyticCoefficients polynomial(std::vector<double> h);
};

struct HsEstimate {
    double value = 0.0;
    double std_err = 0.0;
    std::size_t samples = 0;
};

/// Monte-Carlo estimate of ||k^{>D}||_HS = (E_{x,x'}[(sum_{k>D} h_k <x,x'>^k)^2])^{1/2}
/// with x, x' ~ N(0, Sigma). The same seed reproduces the same pairs.
HsEstimate truncation_hs_error(const AnalyticCoefficients& h, unsigned D, const CovarianceSpec& cov,
                               std::size_t mc_samples, std::uint64_t seed);

}  // namespace plk
