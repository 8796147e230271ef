#include "plk/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "plk/errors.hpp"
#include "plk/fit.hpp"

namespace plk {

double power_partial_sum(std::size_t d, double alpha) {
    double sum = 0.0;
    for (std::size_t j = d; j >= 1; --j) {
        sum += std::pow(static_cast<double>(j), -alpha);
    }
    return sum;
}

CovarianceSpec CovarianceSpec::power_law(std::size_t d, double alpha) {
    if (d < 1) {
        throw DomainError("covariance: d must be >= 1");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw DomainError("covariance: alpha must be finite and >= 0");
    }
    CovarianceSpec out;
    out.alpha_ = alpha;
    out.c_alpha_ = 1.0 / power_partial_sum(d, alpha);
    out.sigma_.resize(d);
    for (std::size_t j = 1; j <= d; ++j) {
        out.sigma_[j - 1] = out.c_alpha_ * std::pow(static_cast<double>(j), -alpha);
    }
    out.finish();
    return out;
}

CovarianceSpec CovarianceSpec::from_diagonal(std::vector<double> sigma) {
    if (sigma.empty()) {
        throw DomainError("covariance: empty diagonal");
    }
    for (double s : sigma) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw DomainError("covariance: diagonal entries must be positive and finite");
        }
    }
    CovarianceSpec out;
    out.alpha_ = std::numeric_limits<double>::quiet_NaN();
    out.sigma_ = std::move(sigma);
    out.c_alpha_ = out.sigma_.front();
    out.finish();
    return out;
}

void CovarianceSpec::finish() {
    log_sigma_.resize(sigma_.size());
    trace_ = 0.0;
    for (std::size_t i = sigma_.size(); i-- > 0;) {
        trace_ += sigma_[i];
        log_sigma_[i] = std::log(sigma_[i]);
    }
}

CovarianceSpec build_covariance(std::size_t d, double alpha) {
    return CovarianceSpec::power_law(d, alpha);
}

double r0(const CovarianceSpec& cov) {
    double top = cov.sigma()[0];
    for (double s : cov.sigma()) {
        top = std::max(top, s);
    }
    return cov.trace() / top;
}

double R0(const CovarianceSpec& cov) {
    double sq = 0.0;
    const auto s = cov.sigma();
    for (std::size_t i = s.size(); i-- > 0;) {
        sq += s[i] * s[i];
    }
    return cov.trace() * cov.trace() / sq;
}

double predicted_r0_exponent(double alpha) {
    return alpha < 1.0 ? 1.0 - alpha : 0.0;
}

double predicted_R0_exponent(double alpha) {
    if (alpha <= 0.5) {
        return 1.0;
    }
    if (alpha < 1.0) {
        return 2.0 - 2.0 * alpha;
    }
    return 0.0;
}

ScalingReport check_asymptotics(double alpha, std::span<const std::size_t> d_grid) {
    if (d_grid.size() < 2) {
        throw DomainError("check_asymptotics: need at least two dimensions");
    }
    for (std::size_t i = 1; i < d_grid.size(); ++i) {
        if (d_grid[i] <= d_grid[i - 1]) {
            throw DomainError("check_asymptotics: d_grid must be strictly increasing");
        }
    }
    ScalingReport rep;
    rep.alpha = alpha;
    for (std::size_t d : d_grid) {
        const auto cov = CovarianceSpec::power_law(d, alpha);
        rep.d_grid.push_back(static_cast<double>(d));
        rep.r0_values.push_back(r0(cov));
        rep.R0_values.push_back(R0(cov));
    }
    rep.r0_exponent = fit_loglog(rep.d_grid, rep.r0_values).slope;
    rep.R0_exponent = fit_loglog(rep.d_grid, rep.R0_values).slope;
    rep.predicted_r0_exponent = predicted_r0_exponent(alpha);
    rep.predicted_R0_exponent = predicted_R0_exponent(alpha);
    return rep;
}

}  // namespace plk
