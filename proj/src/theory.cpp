#include "plk/theory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "plk/errors.hpp"

namespace plk {

namespace {

constexpr double kIntegerTol = 1e-12;

// Hermite level mass: sum_{|beta|=k} xi_k mult(beta) sigma^beta = xi_k (Tr Sigma)^k.
double hermite_level_mass(const KernelSpec& spec, const CovarianceSpec& cov, unsigned k) {
    return spec.level(k) * std::pow(cov.trace(), k);
}

}  // namespace

bool FrequencyPartition::in_low(const MultiIndex& beta) const {
    return std::binary_search(low.begin(), low.end(), beta, canonical_less);
}

double kappa_from_n(double n, std::size_t d) {
    if (!(n > 1.0) || d < 2) {
        throw DomainError("kappa_from_n: need n > 1 and d >= 2");
    }
    return std::log(n) / std::log(static_cast<double>(d));
}

FrequencyPartition partition_kappa(const CovarianceSpec& cov, const KernelSpec& spec, double kappa,
                                   double delta0) {
    spec.validate();
    const std::size_t d = cov.dim();
    if (d < 2) {
        throw DomainError("partition: need d >= 2");
    }
    FrequencyPartition part;
    part.kappa = kappa;
    part.delta0 = delta0;
    part.truncation = spec.truncation();
    const double log_d = std::log(static_cast<double>(d));
    part.n = std::exp(kappa * log_d);

    const double alpha = cov.alpha();
    part.alpha_in_range = alpha >= 0.0 && alpha < 1.0;
    part.kappa_non_integer = std::abs(kappa - std::round(kappa)) >= kIntegerTol;
    if (part.alpha_in_range) {
        part.D_kappa = static_cast<unsigned>(std::floor(kappa / (1.0 - alpha)));
        part.degree_condition = part.D_kappa * (1.0 - alpha) < kappa - kIntegerTol;
    } else {
        part.degree_condition = false;
    }

    const double threshold = -(kappa + delta0) * log_d;
    const auto log_sigma = cov.log_sigma();
    bool sorted = std::is_sorted(log_sigma.begin(), log_sigma.end(), std::greater<>());
    MultiIndex beta(d);
    std::function<void(std::size_t, double)> scan = [&](std::size_t start, double acc) {
        part.low.push_back(beta);
        for (std::size_t j = start; j < d; ++j) {
            if (acc + log_sigma[j] <= threshold) {
                if (sorted) {
                    break;
                }
                continue;
            }
            double a = acc;
            for (unsigned e = 1; beta.degree() + e <= part.truncation; ++e) {
                a += log_sigma[j];
                if (a <= threshold) {
                    break;
                }
                beta.push_term(static_cast<std::uint32_t>(j + 1), e);
                scan(j + 1, a);
                beta.pop_term();
            }
        }
    };
    scan(0, 0.0);
    std::sort(part.low.begin(), part.low.end(), canonical_less);

    part.low_lambda.reserve(part.low.size());
    double low_mass = 0.0;
    for (const auto& b : part.low) {
        const double lam = kernel_eigenvalue(spec, b, cov);
        part.low_lambda.push_back(lam);
        low_mass += lam;
    }
    for (unsigned k = 0; k <= part.truncation; ++k) {
        if (spec.is_inner_product()) {
            // sum_{|beta|=k} k! sigma^beta is not a closed form; sum it exactly
            double s = 0.0;
            for_each_multi_index_of_degree(d, k, [&](const MultiIndex& b) { s += kernel_eigenvalue(spec, b, cov); });
            part.total_mass += s;
        } else {
            part.total_mass += hermite_level_mass(spec, cov, k);
        }
    }
    part.high_mass = std::max(0.0, part.total_mass - low_mass);
    return part;
}

FrequencyPartition partition(const CovarianceSpec& cov, const KernelSpec& spec, double n, double delta0) {
    return partition_kappa(cov, spec, kappa_from_n(n, cov.dim()), delta0);
}

std::string to_string(TheoryMode mode) {
    return mode == TheoryMode::standard ? "default" : "literal";
}

TheoryMode parse_theory_mode(const std::string& text) {
    if (text == "default" || text == "standard") {
        return TheoryMode::standard;
    }
    if (text == "literal") {
        return TheoryMode::literal;
    }
    throw DomainError("unknown theory mode '" + text + "' (expected default or literal)");
}

EffectiveRiskPrediction effective_risk(const FrequencyPartition& part, const TargetFunction& target, double n,
                                       double lambda, const KernelSpec& spec, const CovarianceSpec& cov,
                                       TheoryMode mode, HighResidual residual) {
    if (!(n > 0.0) || !(lambda >= 0.0)) {
        throw DomainError("effective_risk: need n > 0 and lambda >= 0");
    }
    EffectiveRiskPrediction out;
    out.low = part.low;
    out.mode = mode;
    out.preconditions_hold = part.preconditions_hold();
    out.sigma_eff = lambda + part.high_mass;
    out.ridge = mode == TheoryMode::standard ? out.sigma_eff : lambda + out.sigma_eff;
    const double r0_value = r0(cov);

    out.shrinkage.resize(part.low.size());
    for (std::size_t i = 0; i < part.low.size(); ++i) {
        const double lam = part.low_lambda[i];
        if (spec.level(part.low[i].degree()) == 0.0 || !(lam > 0.0)) {
            throw DomainError("effective_risk: zero kernel eigenvalue on Low index " + part.low[i].to_string());
        }
        const double diag =
            mode == TheoryMode::standard ? lam : lam / std::pow(r0_value, part.low[i].degree());
        out.shrinkage[i] = 1.0 / (1.0 + out.ridge / (n * diag));
    }

    bool has_high = false;
    for (const auto& [beta, c] : target.hermite_coefficients(cov.dim())) {
        auto it = std::lower_bound(part.low.begin(), part.low.end(), beta, canonical_less);
        if (it != part.low.end() && *it == beta) {
            const double s = out.shrinkage[static_cast<std::size_t>(it - part.low.begin())];
            out.low_risk += (1.0 - s) * (1.0 - s) * c * c;
        } else {
            out.high_risk += c * c;
            has_high = has_high || c != 0.0;
        }
    }
    out.high_residual = residual == HighResidual::on || (residual == HighResidual::automatic && has_high);
    out.risk = out.low_risk + (out.high_residual ? out.high_risk : 0.0);
    return out;
}

DegreeCheck predictor_degree_check(const FrequencyPartition& part) {
    DegreeCheck out;
    out.D_kappa = part.D_kappa;
    for (const auto& b : part.low) {
        out.max_low_degree = std::max(out.max_low_degree, b.degree());
    }
    for (const auto& b : part.low) {
        if (b.degree() == part.D_kappa && out.top_degree.size() < 8) {
            out.top_degree.push_back(b);
        }
    }
    out.cap_holds = part.alpha_in_range && out.max_low_degree <= part.D_kappa;
    return out;
}

double entry_sample_size(const MultiIndex& beta, const CovarianceSpec& cov, double delta0) {
    const double log_d = std::log(static_cast<double>(cov.dim()));
    return std::exp(-log_sigma_power(beta, cov) - delta0 * log_d);
}

}  // namespace plk
