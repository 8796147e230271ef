#include "plk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "plk/errors.hpp"
#include "plk/rng.hpp"

namespace plk {

KernelSpec KernelSpec::monomial(unsigned degree, double coefficient) {
    KernelSpec s;
    s.kind = KernelKind::monomial;
    s.name = "monomial";
    s.coeffs.assign(degree + 1, 0.0);
    s.coeffs[degree] = coefficient;
    s.validate();
    return s;
}

KernelSpec KernelSpec::polynomial(std::vector<double> h) {
    KernelSpec s;
    s.kind = KernelKind::polynomial;
    s.name = "polynomial";
    s.coeffs = std::move(h);
    s.validate();
    return s;
}

KernelSpec KernelSpec::binomial_power(double c, unsigned degree) {
    std::vector<double> h(degree + 1);
    for (unsigned k = 0; k <= degree; ++k) {
        h[k] = static_cast<double>(binomial(degree, k)) * std::pow(c, static_cast<double>(degree - k));
    }
    KernelSpec s = polynomial(std::move(h));
    std::ostringstream os;
    os << "(" << c << "+t)^" << degree;
    s.name = os.str();
    return s;
}

KernelSpec KernelSpec::exp_truncated(unsigned degree) {
    KernelSpec s;
    s.kind = KernelKind::truncated_analytic;
    s.name = "exp";
    s.coeffs.resize(degree + 1);
    double f = 1.0;
    for (unsigned k = 0; k <= degree; ++k) {
        if (k > 0) {
            f *= static_cast<double>(k);
        }
        s.coeffs[k] = 1.0 / f;
    }
    s.validate();
    return s;
}

KernelSpec KernelSpec::hermite(std::vector<double> xi) {
    KernelSpec s;
    s.kind = KernelKind::hermite;
    s.name = "hermite";
    s.coeffs = std::move(xi);
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    if (coeffs.empty()) {
        throw DomainError("kernel: coefficient list is empty");
    }
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (!std::isfinite(coeffs[k]) || coeffs[k] < 0.0) {
            throw DomainError("kernel: coefficient " + std::to_string(k) +
                              " must be finite and >= 0");
        }
    }
}

std::string KernelSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case KernelKind::monomial: os << "monomial"; break;
        case KernelKind::polynomial: os << "polynomial"; break;
        case KernelKind::truncated_analytic: os << "truncated-analytic"; break;
        case KernelKind::hermite: os << "hermite"; break;
    }
    if (!name.empty() && name != os.str()) {
        os << ":" << name;
    }
    os << ":[";
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        os << (k ? "," : "") << coeffs[k];
    }
    os << "]";
    return os.str();
}

double sigma_power(const MultiIndex& beta, const CovarianceSpec& cov) {
    double out = 1.0;
    for (const auto& [j, e] : beta.terms()) {
        out *= std::pow(cov.sigma(j), static_cast<double>(e));
    }
    return out;
}

double log_sigma_power(const MultiIndex& beta, const CovarianceSpec& cov) {
    double out = 0.0;
    const auto ls = cov.log_sigma();
    for (const auto& [j, e] : beta.terms()) {
        out += static_cast<double>(e) * ls[j - 1];
    }
    return out;
}

double hermite_eigenvalue(const MultiIndex& beta, std::span<const double> xi,
                          const CovarianceSpec& cov) {
    const unsigned k = beta.degree();
    const double level = k < xi.size() ? xi[k] : 0.0;
    if (level == 0.0) {
        return 0.0;
    }
    return level * static_cast<double>(multinomial(beta)) * sigma_power(beta, cov);
}

double monomial_eigenvalue(const MultiIndex& beta, std::span<const double> h,
                           const CovarianceSpec& cov) {
    const unsigned k = beta.degree();
    const double level = k < h.size() ? h[k] : 0.0;
    if (level == 0.0) {
        return 0.0;
    }
    return level * static_cast<double>(factorial(k)) * sigma_power(beta, cov);
}

double kernel_eigenvalue(const KernelSpec& spec, const MultiIndex& beta, const CovarianceSpec& cov) {
    return spec.kind == KernelKind::hermite ? hermite_eigenvalue(beta, spec.coeffs, cov)
                                            : monomial_eigenvalue(beta, spec.coeffs, cov);
}

std::vector<SpectrumEntry> full_spectrum(const KernelSpec& spec, const CovarianceSpec& cov,
                                         std::uint64_t cap) {
    spec.validate();
    const unsigned D = spec.truncation();
    const std::uint64_t count = count_multi_indices(cov.dim(), D);
    if (count > cap) {
        throw ResourceError("full_spectrum: C(d + D, D) = " + std::to_string(count) +
                            " exceeds cap " + std::to_string(cap));
    }
    std::vector<SpectrumEntry> out;
    out.reserve(count);
    for_each_multi_index(cov.dim(), D, [&](const MultiIndex& b) {
        out.push_back({b, kernel_eigenvalue(spec, b, cov), b.degree()});
    });
    // Enumeration order is canonical, so a stable sort keeps canonical tie order.
    std::stable_sort(out.begin(), out.end(),
                     [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.lambda > b.lambda; });
    return out;
}

std::size_t counting_M(const std::vector<SpectrumEntry>& sorted_desc, double eps) {
    auto it = std::partition_point(sorted_desc.begin(), sorted_desc.end(),
                                   [eps](const SpectrumEntry& e) { return e.lambda >= eps; });
    return static_cast<std::size_t>(it - sorted_desc.begin());
}

std::size_t counting_M(const KernelSpec& spec, const CovarianceSpec& cov, double eps) {
    std::size_t count = 0;
    for_each_multi_index(cov.dim(), spec.truncation(), [&](const MultiIndex& b) {
        if (kernel_eigenvalue(spec, b, cov) >= eps) {
            ++count;
        }
    });
    return count;
}

namespace {

bool finite_d_gap(double r0_value, double alpha, std::size_t d, unsigned level) {
    // 1/(r0^l d^{alpha l}) > 1/r0^{l+1}  <=>  r0 > d^{alpha l}
    return std::log(r0_value) > alpha * static_cast<double>(level) * std::log(static_cast<double>(d));
}

}  // namespace

std::vector<GapReport> spectral_gaps(const KernelSpec& spec, const CovarianceSpec& cov) {
    spec.validate();
    const unsigned D = spec.truncation();
    const double r0v = r0(cov);
    const double alpha = cov.alpha();
    std::vector<double> level_min(D + 1, std::numeric_limits<double>::infinity());
    std::vector<double> level_max(D + 1, 0.0);
    for_each_multi_index(cov.dim(), D, [&](const MultiIndex& b) {
        const double lam = kernel_eigenvalue(spec, b, cov);
        level_min[b.degree()] = std::min(level_min[b.degree()], lam);
        level_max[b.degree()] = std::max(level_max[b.degree()], lam);
    });
    std::vector<GapReport> out;
    for (unsigned l = 0; l < D; ++l) {
        GapReport g;
        g.level = l;
        g.predicted = finite_d_gap(r0v, alpha, cov.dim(), l);
        g.asymptotic = alpha <= 1.0 / static_cast<double>(l + 1);
        g.empirical_ratio = level_max[l + 1] > 0.0 ? level_min[l] / level_max[l + 1]
                                                   : std::numeric_limits<double>::infinity();
        out.push_back(g);
    }
    return out;
}

std::vector<GapReport> spectral_gaps(double alpha, std::size_t d, unsigned D) {
    return spectral_gaps(KernelSpec::binomial_power(1.0, D), CovarianceSpec::power_law(d, alpha));
}

SectorLayout sector_layout(const KernelSpec& spec, const CovarianceSpec& cov) {
    spec.validate();
    const std::size_t d = cov.dim();
    const unsigned D = spec.truncation();
    SectorLayout lay;
    lay.alpha = cov.alpha();
    lay.r0 = r0(cov);
    lay.total = count_multi_indices(d, D);

    if (spec.kind == KernelKind::monomial) {
        const std::uint64_t positive = binomial(d - 1 + D, D);
        lay.sectors.push_back({"monomial", D == 0 ? 0U : D - 1, 1, positive, 0});
        if (positive < lay.total) {
            lay.sectors.push_back({"null", D, positive + 1, lay.total, positive});
        }
        return lay;
    }

    unsigned gaps = 0;
    while (gaps < D && finite_d_gap(lay.r0, lay.alpha, d, gaps)) {
        ++gaps;
    }
    lay.consecutive_gaps = gaps;
    // Level k is isolated when gaps sit both above and below it (or it is the last level).
    const unsigned isolated = (gaps == D) ? D : (gaps == 0 ? 0 : gaps - 1);

    lay.sectors.push_back({"level-0", 0, 1, 1, 0});
    for (unsigned j = 0; j < isolated; ++j) {
        const std::uint64_t lo = binomial(d + j, j);
        const std::uint64_t hi = binomial(d + j + 1, j + 1);
        lay.sectors.push_back({"gap-" + std::to_string(j), j, lo + 1, hi, lo});
    }
    const std::uint64_t start = binomial(d + isolated, isolated);
    if (start >= lay.total) {
        return lay;
    }
    // Continuous region: split by sigma^beta >= d^{-(j+1)} among levels above `isolated`.
    std::vector<std::uint64_t> above(D + 1, 0);  // above[j]: count with sigma^beta >= d^{-(j+1)}
    const double logd = std::log(static_cast<double>(d));
    for (unsigned k = isolated + 1; k <= D; ++k) {
        for_each_multi_index_of_degree(d, k, [&](const MultiIndex& b) {
            const double ls = log_sigma_power(b, cov);
            for (unsigned j = isolated; j < D; ++j) {
                if (ls >= -static_cast<double>(j + 1) * logd) {
                    ++above[j];
                }
            }
        });
    }
    std::uint64_t prev = start;
    for (unsigned j = isolated; j < D; ++j) {
        const std::uint64_t end = (j + 1 == D) ? lay.total : std::min(lay.total, start + above[j]);
        if (end > prev) {
            lay.sectors.push_back({"continuous-" + std::to_string(j), j, prev + 1, end, prev});
            prev = end;
        }
    }
    if (prev < lay.total) {
        lay.sectors.push_back({"continuous-" + std::to_string(D - 1), D - 1, prev + 1, lay.total, prev});
    }
    return lay;
}

OrderPrediction predicted_order(const SectorLayout& layout, std::uint64_t m) {
    if (m < 1 || m > layout.total) {
        throw DomainError("predicted_order: rank " + std::to_string(m) + " outside [1, " +
                          std::to_string(layout.total) + "]");
    }
    auto it = std::find_if(layout.sectors.begin(), layout.sectors.end(),
                           [m](const Sector& s) { return m >= s.first && m <= s.last; });
    if (it == layout.sectors.end()) {
        throw DomainError("predicted_order: rank not covered by any sector");
    }
    OrderPrediction p;
    p.sector = it->label;
    p.level = it->level;
    p.m_plus = m - it->offset;
    if (it->label == "level-0") {
        p.value = 1.0;
    } else if (it->label == "null") {
        p.value = 0.0;
    } else {
        p.value = std::pow(static_cast<double>(p.m_plus), -layout.alpha) /
                  std::pow(layout.r0, static_cast<double>(it->level + 1));
    }
    return p;
}

OrderPrediction predicted_order(const KernelSpec& spec, const CovarianceSpec& cov, std::uint64_t m) {
    return predicted_order(sector_layout(spec, cov), m);
}

AnalyticCoefficients AnalyticCoefficients::exp() {
    AnalyticCoefficients a;
    a.name = "exp";
    a.coeff = [](unsigned k) { return 1.0 / std::tgamma(static_cast<double>(k) + 1.0); };
    return a;
}

AnalyticCoefficients AnalyticCoefficients::polynomial(std::vector<double> h) {
    AnalyticCoefficients a;
    a.name = "polynomial";
    a.degree = h.empty() ? 0U : static_cast<unsigned>(h.size() - 1);
    a.coeff = [h = std::move(h)](unsigned k) { return k < h.size() ? h[k] : 0.0; };
    return a;
}

HsEstimate truncation_hs_error(const AnalyticCoefficients& h, unsigned D, const CovarianceSpec& cov,
                               std::size_t mc_samples, std::uint64_t seed) {
    HsEstimate est;
    est.samples = mc_samples;
    if (h.degree && *h.degree <= D) {
        return est;  // empty tail
    }
    if (mc_samples < 2) {
        throw DomainError("truncation_hs_error: need at least two samples");
    }
    constexpr unsigned kMaxTerms = 400;
    auto rng = make_stream(seed, {0x4853});
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto sigma = cov.sigma();
    std::vector<double> sd(sigma.size());
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        sd[j] = std::sqrt(sigma[j]);
    }
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < mc_samples; ++i) {
        double t = 0.0;
        for (std::size_t j = 0; j < sd.size(); ++j) {
            const double x = sd[j] * normal(rng);
            const double xp = sd[j] * normal(rng);
            t += x * xp;
        }
        double tail = 0.0;
        double power = std::pow(t, static_cast<double>(D + 1));
        const unsigned last = h.degree ? *h.degree : D + kMaxTerms;
        for (unsigned k = D + 1; k <= last; ++k) {
            const double term = h.coeff(k) * power;
            tail += term;
            if (!h.degree && std::abs(term) <= 1e-18 * std::abs(tail)) {
                break;
            }
            power *= t;
        }
        const double sq = tail * tail;
        if (!std::isfinite(sq)) {
            throw NumericalError("truncation_hs_error: tail series diverged numerically");
        }
        const double delta = sq - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (sq - mean);
    }
    const double var = m2 / static_cast<double>(mc_samples - 1);
    const double se_mean = std::sqrt(var / static_cast<double>(mc_samples));
    est.value = std::sqrt(mean);
    est.std_err = est.value > 0.0 ? se_mean / (2.0 * est.value) : 0.0;
    return est;
}

}  // namespace plk
