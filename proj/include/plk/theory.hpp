#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plk/covariance.hpp"
#include "plk/krr.hpp"
#include "plk/multiindex.hpp"
#include "plk/spectral.hpp"

namespace plk {

/// Low(n) = {beta : |beta| <= L, sigma^beta > d^{-(kappa + delta0)}}; High is the rest.
struct FrequencyPartition {
    std::vector<MultiIndex> low;        // canonical order
    std::vector<double> low_lambda;     // kernel eigenvalue of each Low index
    double total_mass = 0.0;            // sum of all eigenvalues up to the truncation
    double high_mass = 0.0;             // sum over High
    double n = 0.0;
    double kappa = 0.0;
    double delta0 = 0.0;
    unsigned D_kappa = 0;               // floor(kappa / (1 - alpha)), 0 when alpha is outside [0, 1)
    unsigned truncation = 0;
    // Preconditions of the risk prediction; violations are flagged, not thrown.
    bool alpha_in_range = true;
    bool kappa_non_integer = true;
    bool degree_condition = true;       // D(kappa)(1 - alpha) < kappa

    bool in_low(const MultiIndex& beta) const;
    bool preconditions_hold() const { return alpha_in_range && kappa_non_integer && degree_condition; }
};

/// kappa = log n / log d.
double kappa_from_n(double n, std::size_t d);

/// Threshold partition in log space. Low is found by a pruned scan (sigma^beta only
/// shrinks as exponents are added); the High mass uses sum_{|beta|=k} mult(beta) sigma^beta = (Tr Sigma)^k.
FrequencyPartition partition(const CovarianceSpec& cov, const KernelSpec& spec, double n, double delta0);
FrequencyPartition partition_kappa(const CovarianceSpec& cov, const KernelSpec& spec, double kappa,
                                   double delta0);

enum class TheoryMode {
    standard,  // D_bb = lambda_b, effective ridge lambda + sum_High lambda
    literal    // D_bb = lambda_b / r0^{|b|}, effective ridge lambda + (lambda + sum_High lambda)
};

enum class HighResidual { automatic, on, off };

std::string to_string(TheoryMode mode);
TheoryMode parse_theory_mode(const std::string& text);

struct EffectiveRiskPrediction {
    std::vector<MultiIndex> low;
    std::vector<double> shrinkage;      // s_beta in (0, 1]
    double sigma_eff = 0.0;             // lambda + sum_High lambda_beta
    double ridge = 0.0;                 // gamma entering s_beta
    double low_risk = 0.0;              // sum_Low (1 - s)^2 f_beta^2
    double high_risk = 0.0;             // sum_High f_beta^2
    double risk = 0.0;
    TheoryMode mode = TheoryMode::standard;
    bool high_residual = false;
    bool preconditions_hold = true;
};

/// Squared-norm risk ||(I - S) f*^{Low}||^2 (+ ||f*^{High}||^2 when the residual is on).
/// `automatic` turns the residual on exactly when the target has High components.
/// Throws DomainError when some Low index has a zero kernel eigenvalue.
EffectiveRiskPrediction effective_risk(const FrequencyPartition& part, const TargetFunction& target, double n,
                                       double lambda, const KernelSpec& spec, const CovarianceSpec& cov,
                                       TheoryMode mode = TheoryMode::standard,
                                       HighResidual residual = HighResidual::automatic);

struct DegreeCheck {
    unsigned D_kappa = 0;
    unsigned max_low_degree = 0;
    bool cap_holds = false;                 // max_low_degree <= D_kappa
    std::vector<MultiIndex> top_degree;     // Low indices of degree D_kappa (up to 8 shown)
};

DegreeCheck predictor_degree_check(const FrequencyPartition& part);

/// Smallest n = d^kappa at which beta enters Low: sigma^beta > n^{-1} d^{-delta0}.
double entry_sample_size(const MultiIndex& beta, const CovarianceSpec& cov, double delta0);

}  // namespace plk
