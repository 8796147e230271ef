#include "plk/basis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "plk/errors.hpp"
#include "plk/hermite.hpp"
#include "plk/rng.hpp"
#include "plk/spectral.hpp"

namespace plk {

namespace {

struct CanonicalLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const { return canonical_less(a, b); }
};

using IndexMap = std::map<MultiIndex, std::size_t, CanonicalLess>;

// (2m-1)!! as a double; exact for the small m used here.
double double_factorial_odd(unsigned m) {
    double out = 1.0;
    for (unsigned k = 1; k <= m; ++k) {
        out *= static_cast<double>(2 * k - 1);
    }
    return out;
}

// beta_i! / (2^m m! sqrt(k!)) with m = (b - k) / 2, rewritten as C(b, 2m) (2m-1)!! sqrt(k!).
double coordinate_factor(unsigned b, unsigned k) {
    const unsigned m = (b - k) / 2;
    return static_cast<double>(binomial(b, 2 * m)) * double_factorial_odd(m) *
           std::sqrt(static_cast<double>(factorial(k)));
}

std::vector<MultiIndex> checked_index(std::size_t d, unsigned D, std::size_t cap, const char* who) {
    const std::uint64_t n = count_multi_indices(d, D);
    if (n > cap) {
        throw ResourceError(std::string(who) + ": dimension C(d + D, D) = " + std::to_string(n) +
                            " exceeds dense cap " + std::to_string(cap));
    }
    return enumerate(d, D);
}

double feature_weight(const MultiIndex& b, std::span<const double> h) {
    const double level = b.degree() < h.size() ? h[b.degree()] : 0.0;
    return level * static_cast<double>(multinomial(b));
}

std::vector<double> sorted_desc(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

std::vector<std::pair<MultiIndex, double>> hermite_expand_monomial(const MultiIndex& beta) {
    if (beta.degree() > 20) {
        throw OverflowError("hermite_expand_monomial: |beta| > 20");
    }
    std::vector<std::pair<MultiIndex, double>> out;
    const auto terms = beta.terms();
    MultiIndex scratch(beta.dim());
    std::function<void(std::size_t, double)> rec = [&](std::size_t pos, double coef) {
        if (pos == terms.size()) {
            out.emplace_back(scratch, coef);
            return;
        }
        const auto [j, b] = terms[pos];
        for (int k = static_cast<int>(b); k >= 0; k -= 2) {
            const double c = coordinate_factor(b, static_cast<unsigned>(k));
            if (k > 0) {
                scratch.push_term(j, static_cast<unsigned>(k));
            }
            rec(pos + 1, coef * c);
            if (k > 0) {
                scratch.pop_term();
            }
        }
    };
    rec(0, 1.0);
    return out;
}

double gaussian_moment(const MultiIndex& beta, const CovarianceSpec& cov) {
    double out = 1.0;
    for (const auto& [j, e] : beta.terms()) {
        if (e % 2 == 1) {
            return 0.0;
        }
        // m_{2k} = (2k - 1) sigma m_{2k-2}
        const double s = cov.sigma(j);
        for (unsigned k = 1; k <= e / 2; ++k) {
            out *= static_cast<double>(2 * k - 1) * s;
        }
    }
    return out;
}

BasisMatrix build_lambda(std::size_t d, unsigned D, std::span<const double> h, const CovarianceSpec& cov,
                         std::size_t cap) {
    if (cov.dim() != d) {
        throw DomainError("build_lambda: covariance dimension differs from d");
    }
    for (unsigned k = 0; k <= D; ++k) {
        if (!(k < h.size() && h[k] > 0.0)) {
            throw DomainError("build_lambda: level coefficient h_" + std::to_string(k) +
                              " must be > 0 (it divides Lambda entries)");
        }
    }
    BasisMatrix out;
    out.index = checked_index(d, D, cap, "build_lambda");
    const std::size_t n = out.index.size();
    IndexMap pos;
    for (std::size_t i = 0; i < n; ++i) {
        pos.emplace(out.index[i], i);
    }
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        weight[i] = feature_weight(out.index[i], h) * sigma_power(out.index[i], cov);
    }
    out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t row = 0; row < n; ++row) {
        for (const auto& [kbar, coef] : hermite_expand_monomial(out.index[row])) {
            const std::size_t col = pos.at(kbar);
            out.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                std::sqrt(weight[row] / weight[col]) * coef;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.values);
    const auto& sv = svd.singularValues();
    out.op_norm = sv(0);
    out.inv_op_norm = 1.0 / sv(sv.size() - 1);
    return out;
}

BasisMatrix moment_matrix(std::size_t d, unsigned D, std::span<const double> h, const CovarianceSpec& cov,
                          std::size_t cap) {
    if (cov.dim() != d) {
        throw DomainError("moment_matrix: covariance dimension differs from d");
    }
    BasisMatrix out;
    out.index = checked_index(d, D, cap, "moment_matrix");
    const std::size_t n = out.index.size();
    std::vector<double> root(n);
    for (std::size_t i = 0; i < n; ++i) {
        root[i] = std::sqrt(feature_weight(out.index[i], h));
    }
    out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            const double v = root[a] * root[b] * gaussian_moment(out.index[a] + out.index[b], cov);
            out.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
            out.values(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.values, Eigen::EigenvaluesOnly);
    out.op_norm = es.eigenvalues().cwiseAbs().maxCoeff();
    const double smallest = es.eigenvalues().minCoeff();
    out.inv_op_norm = smallest > 0.0 ? 1.0 / smallest : std::numeric_limits<double>::infinity();
    return out;
}

FactorizationReport verify_factorization(std::size_t d, unsigned D, std::span<const double> h,
                                         const CovarianceSpec& cov, std::size_t mc_samples,
                                         std::uint64_t seed) {
    const BasisMatrix lambda = build_lambda(d, D, h, cov);
    const BasisMatrix moments = moment_matrix(d, D, h, cov);
    const std::size_t n = lambda.index.size();
    const auto N = static_cast<Eigen::Index>(n);

    FactorizationReport rep;
    rep.dim = n;
    rep.op_norm = lambda.op_norm;
    rep.inv_op_norm = lambda.inv_op_norm;

    Eigen::VectorXd weight(N);
    std::vector<double> exact(n);
    std::vector<double> sig(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& b = lambda.index[i];
        sig[i] = sigma_power(b, cov);
        weight(static_cast<Eigen::Index>(i)) = feature_weight(b, h) * sig[i];
        exact[i] = monomial_eigenvalue(b, h, cov);
    }

    // (a) Phi(z) = Lambda Psi(z) on sampled whitened points.
    HermiteEvaluator he(D);
    auto rng = make_stream(seed, {0x4641});
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(d);
    Eigen::VectorXd phi(N);
    Eigen::VectorXd psi(N);
    for (std::size_t s = 0; s < mc_samples; ++s) {
        for (double& zj : z) {
            zj = normal(rng);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto& b = lambda.index[i];
            double mono = 1.0;
            for (const auto& [j, e] : b.terms()) {
                mono *= std::pow(z[j - 1], static_cast<double>(e));
            }
            const double root = std::sqrt(weight(static_cast<Eigen::Index>(i)));
            phi(static_cast<Eigen::Index>(i)) = root * mono;
            psi(static_cast<Eigen::Index>(i)) = root * he.He(b, z);
        }
        rep.phi_deviation = std::max(rep.phi_deviation, (phi - lambda.values * psi).cwiseAbs().maxCoeff());
    }

    // (b) M = Lambda diag(C) Lambda^T.
    const Eigen::MatrixXd rebuilt = lambda.values * weight.asDiagonal() * lambda.values.transpose();
    rep.reconstruction_deviation = (rebuilt - moments.values).cwiseAbs().maxCoeff();

    // (c) spectrum of M against h_k k! sigma^beta.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(moments.values, Eigen::EigenvaluesOnly);
    rep.eig_m.assign(es.eigenvalues().data(), es.eigenvalues().data() + N);
    rep.eig_m = sorted_desc(std::move(rep.eig_m));
    rep.exact_values = sorted_desc(exact);
    rep.hermite_diag = sorted_desc(std::vector<double>(weight.data(), weight.data() + N));
    rep.sigma_beta = sorted_desc(sig);
    for (std::size_t k = 0; k < n; ++k) {
        const double ref = rep.exact_values[k];
        if (ref > 0.0) {
            rep.exact_value_deviation =
                std::max(rep.exact_value_deviation, std::abs(rep.eig_m[k] - ref) / ref);
        }
    }

    // Congruence bounds: eig_k(L C L^T) / C_(k) lies in [s_min(L)^2, s_max(L)^2].
    const double lo = 1.0 / (rep.inv_op_norm * rep.inv_op_norm);
    const double hi = rep.op_norm * rep.op_norm;
    constexpr double kRoundOff = 1e-10;
    auto within = [&](const std::vector<double>& ref, double* margin) {
        bool ok = true;
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            const double e = rep.eig_m[k];
            const double lower = lo * ref[k];
            const double upper = hi * ref[k];
            const double slack = std::min(e - lower, upper - e) / std::max(ref[k], 1e-300);
            worst = std::min(worst, slack);
            if (e < lower * (1.0 - kRoundOff) || e > upper * (1.0 + kRoundOff)) {
                ok = false;
            }
        }
        if (margin) {
            *margin = worst;
        }
        return ok;
    };
    rep.weighted_bound_ok = within(rep.hermite_diag, &rep.weighted_bound_margin);
    rep.sigma_bound_ok = within(rep.sigma_beta, nullptr);
    return rep;
}

}  // namespace plk
