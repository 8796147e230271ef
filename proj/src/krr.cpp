#include "plk/krr.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "plk/errors.hpp"
#include "plk/hermite.hpp"
#include "plk/rng.hpp"

namespace plk {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_dim(Eigen::Index cols, std::size_t d, const char* who) {
    if (static_cast<std::size_t>(cols) != d) {
        throw DomainError(std::string(who) + ": data has " + std::to_string(cols) +
                          " columns, covariance has dimension " + std::to_string(d));
    }
}

}  // namespace

Dataset sample_from(std::size_t n, const CovarianceSpec& cov, std::mt19937_64& rng) {
    const auto d = static_cast<Eigen::Index>(cov.dim());
    const auto rows = static_cast<Eigen::Index>(n);
    std::normal_distribution<double> normal(0.0, 1.0);
    Dataset out;
    out.Z.resize(rows, d);
    // row by row so that a prefix of a larger sample equals a smaller sample
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            out.Z(i, j) = normal(rng);
        }
    }
    Eigen::VectorXd root(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        root(j) = std::sqrt(cov.sigma()[static_cast<std::size_t>(j)]);
    }
    out.X = out.Z * root.asDiagonal();
    return out;
}

Dataset sample(std::size_t n, const CovarianceSpec& cov, std::uint64_t seed) {
    auto rng = make_stream(seed, {0x53414d50});
    Dataset out = sample_from(n, cov, rng);
    out.seed = seed;
    return out;
}

TargetFunction::TargetFunction(std::vector<TargetTerm> terms, std::string label)
    : terms_(std::move(terms)), label_(std::move(label)) {
    std::set<std::pair<std::uint32_t, unsigned>> seen;
    for (const auto& t : terms_) {
        if (t.coordinate == 0) {
            throw DomainError("TargetFunction: coordinates are 1-based");
        }
        if (!seen.emplace(t.coordinate, t.degree).second) {
            throw DomainError("TargetFunction: duplicate term on coordinate " +
                              std::to_string(t.coordinate) + " degree " + std::to_string(t.degree));
        }
    }
}

unsigned TargetFunction::max_degree() const {
    unsigned out = 0;
    for (const auto& t : terms_) {
        out = std::max(out, t.degree);
    }
    return out;
}

double TargetFunction::operator()(std::span<const double> z) const {
    HermiteEvaluator he(max_degree());
    double out = 0.0;
    for (const auto& t : terms_) {
        if (t.coordinate > z.size()) {
            throw DomainError("TargetFunction: coordinate exceeds point dimension");
        }
        out += t.coefficient * he.he(t.degree, z[t.coordinate - 1]);
    }
    return out;
}

Eigen::VectorXd TargetFunction::evaluate(const Eigen::MatrixXd& Z) const {
    HermiteEvaluator he(max_degree());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(Z.rows());
    for (const auto& t : terms_) {
        if (t.coordinate > static_cast<std::size_t>(Z.cols())) {
            throw DomainError("TargetFunction: coordinate exceeds data dimension");
        }
        for (Eigen::Index i = 0; i < Z.rows(); ++i) {
            out(i) += t.coefficient * he.he(t.degree, Z(i, t.coordinate - 1));
        }
    }
    return out;
}

double TargetFunction::norm_squared() const {
    double out = 0.0;
    for (const auto& [beta, c] : hermite_coefficients(0)) {
        out += c * c;
    }
    return out;
}

std::vector<std::pair<MultiIndex, double>> TargetFunction::hermite_coefficients(std::size_t d) const {
    std::size_t dim = d;
    for (const auto& t : terms_) {
        dim = std::max<std::size_t>(dim, t.coordinate);
    }
    std::vector<std::pair<MultiIndex, double>> out;
    for (const auto& t : terms_) {
        MultiIndex beta = t.degree == 0 ? MultiIndex(dim) : MultiIndex::unit(dim, t.coordinate, t.degree);
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == beta; });
        if (it == out.end()) {
            out.emplace_back(std::move(beta), t.coefficient);
        } else {
            it->second += t.coefficient;  // constant terms on different coordinates coincide
        }
    }
    return out;
}

TargetFunction make_target(TargetKind kind, const CovarianceSpec& cov, std::vector<TargetTerm> custom_terms) {
    switch (kind) {
        case TargetKind::first_coord:
        case TargetKind::last_coord: {
            const auto j = kind == TargetKind::first_coord ? 1u : static_cast<std::uint32_t>(cov.dim());
            return TargetFunction({{j, 1, 1.0}, {j, 2, 1.0}, {j, 3, 1.0}},
                                  kind == TargetKind::first_coord ? "first" : "last");
        }
        case TargetKind::custom:
            for (const auto& t : custom_terms) {
                if (t.coordinate > cov.dim()) {
                    throw DomainError("make_target: coordinate " + std::to_string(t.coordinate) +
                                      " outside [1, " + std::to_string(cov.dim()) + "]");
                }
            }
            return TargetFunction(std::move(custom_terms), "custom");
    }
    throw DomainError("make_target: unknown kind");
}

void label(Dataset& data, const TargetFunction& target, double noise_sigma, std::uint64_t seed) {
    if (!(noise_sigma >= 0.0)) {
        throw DomainError("label: noise_sigma must be >= 0");
    }
    data.y = target.evaluate(data.Z);
    data.noise_sigma = noise_sigma;
    if (noise_sigma > 0.0) {
        auto rng = make_stream(seed, {0x4e4f4953});
        std::normal_distribution<double> normal(0.0, noise_sigma);
        for (Eigen::Index i = 0; i < data.y.size(); ++i) {
            data.y(i) += normal(rng);
        }
    }
}

HermiteKernel::HermiteKernel(KernelSpec spec, CovarianceSpec cov) : spec_(std::move(spec)), cov_(std::move(cov)) {
    if (spec_.kind != KernelKind::hermite) {
        throw DomainError("HermiteKernel: spec must be a Hermite kernel");
    }
    spec_.validate();
    if (spec_.truncation() > 20) {
        throw DomainError("HermiteKernel: truncation above 20 is not supported");
    }
    level_weight_.resize(spec_.truncation() + 1);
    for (unsigned k = 0; k <= spec_.truncation(); ++k) {
        level_weight_[k] = spec_.level(k) * static_cast<double>(factorial(k));
    }
}

RowMatrix HermiteKernel::features(const Eigen::MatrixXd& Z) const {
    const std::size_t d = cov_.dim();
    check_dim(Z.cols(), d, "HermiteKernel");
    const unsigned L = spec_.truncation();
    RowMatrix U(Z.rows(), static_cast<Eigen::Index>(L * d));
    std::vector<double> root(d);
    for (std::size_t j = 0; j < d; ++j) {
        root[j] = std::sqrt(cov_.sigma()[j]);
    }
    for (Eigen::Index i = 0; i < Z.rows(); ++i) {
        double* row = U.row(i).data();
        for (std::size_t j = 0; j < d; ++j) {
            const double z = Z(i, static_cast<Eigen::Index>(j));
            // H_{m+1} = z H_m - m H_{m-1}; feature = (sqrt(sigma))^m H_m / m!
            double h_prev = 1.0;
            double h_cur = z;
            double scale = root[j];
            for (unsigned m = 1; m <= L; ++m) {
                row[(m - 1) * d + j] = scale * h_cur;
                const double h_next = z * h_cur - m * h_prev;
                h_prev = h_cur;
                h_cur = h_next;
                scale *= root[j] / static_cast<double>(m + 1);
            }
        }
    }
    return U;
}

double HermiteKernel::pair_value(const double* u, const double* v) const {
    const std::size_t d = cov_.dim();
    const unsigned L = spec_.truncation();
    double c[21] = {1.0};
    double a[21] = {0.0};
    for (std::size_t j = 0; j < d; ++j) {
        for (unsigned m = 1; m <= L; ++m) {
            a[m] = u[(m - 1) * d + j] * v[(m - 1) * d + j];
        }
        for (unsigned k = L; k >= 1; --k) {
            double acc = 0.0;
            for (unsigned m = 1; m <= k; ++m) {
                acc += c[k - m] * a[m];
            }
            c[k] += acc;
        }
    }
    double out = 0.0;
    for (unsigned k = 0; k <= L; ++k) {
        out += level_weight_[k] * c[k];
    }
    return out;
}

double HermiteKernel::eval(std::span<const double> z, std::span<const double> zp) const {
    const auto d = static_cast<Eigen::Index>(cov_.dim());
    if (static_cast<Eigen::Index>(z.size()) != d || static_cast<Eigen::Index>(zp.size()) != d) {
        throw DomainError("HermiteKernel::eval: point dimension mismatch");
    }
    Eigen::MatrixXd pts(2, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        pts(0, j) = z[static_cast<std::size_t>(j)];
        pts(1, j) = zp[static_cast<std::size_t>(j)];
    }
    const RowMatrix U = features(pts);
    return pair_value(U.row(0).data(), U.row(1).data());
}

double HermiteKernel::eval_direct(std::span<const double> z, std::span<const double> zp,
                                  std::uint64_t cap) const {
    const std::size_t d = cov_.dim();
    if (z.size() != d || zp.size() != d) {
        throw DomainError("HermiteKernel::eval_direct: point dimension mismatch");
    }
    const unsigned L = spec_.truncation();
    const std::uint64_t count = count_multi_indices(d, L);
    if (count > cap) {
        throw ResourceError("HermiteKernel::eval_direct: " + std::to_string(count) +
                            " multi-indices exceed cap " + std::to_string(cap));
    }
    HermiteEvaluator he(L);
    std::vector<double> hz((L + 1) * d);
    std::vector<double> hzp((L + 1) * d);
    for (std::size_t j = 0; j < d; ++j) {
        he.evaluate_all(z[j], std::span<double>(hz.data() + j * (L + 1), L + 1));
        he.evaluate_all(zp[j], std::span<double>(hzp.data() + j * (L + 1), L + 1));
    }
    double out = 0.0;
    for_each_multi_index(d, L, [&](const MultiIndex& beta) {
        double term = spec_.level(beta.degree()) * static_cast<double>(multinomial(beta));
        for (const auto& [j, e] : beta.terms()) {
            const std::size_t base = (j - 1) * (L + 1);
            term *= std::pow(cov_.sigma()[j - 1], static_cast<double>(e)) * hz[base + e] * hzp[base + e];
        }
        out += term;
    });
    return out;
}

Eigen::MatrixXd HermiteKernel::cross(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) const {
    const RowMatrix UA = features(A);
    const RowMatrix UB = features(B);
    Eigen::MatrixXd K(A.rows(), B.rows());
    for (Eigen::Index b = 0; b < B.rows(); ++b) {
        const double* v = UB.row(b).data();
        for (Eigen::Index a = 0; a < A.rows(); ++a) {
            K(a, b) = pair_value(UA.row(a).data(), v);
        }
    }
    return K;
}

Eigen::MatrixXd HermiteKernel::gram(const Eigen::MatrixXd& Z) const {
    const RowMatrix U = features(Z);
    const Eigen::Index n = Z.rows();
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        const double* v = U.row(b).data();
        for (Eigen::Index a = b; a < n; ++a) {
            const double value = pair_value(U.row(a).data(), v);
            K(a, b) = value;
            K(b, a) = value;
        }
    }
    return K;
}

RidgeSolver::RidgeSolver(const Eigen::MatrixXd& K, double lambda) : K_(K), lambda_(lambda) {
    if (!(lambda > 0.0)) {
        throw DomainError("RidgeSolver: lambda must be > 0");
    }
    if (K.rows() != K.cols()) {
        throw DomainError("RidgeSolver: kernel matrix must be square");
    }
    Eigen::MatrixXd A = K;
    A.diagonal().array() += lambda;
    llt_.compute(A);
    if (llt_.info() != Eigen::Success) {
        throw NumericalError("RidgeSolver: K + lambda I is not positive definite (kernel matrix not PSD)");
    }
}

Eigen::VectorXd RidgeSolver::solve(const Eigen::VectorXd& y) const {
    if (y.size() != K_.rows()) {
        throw DomainError("RidgeSolver::solve: right-hand side has wrong length");
    }
    return llt_.solve(y);
}

double RidgeSolver::relative_residual(const Eigen::VectorXd& a, const Eigen::VectorXd& y) const {
    const double ny = y.norm();
    if (ny == 0.0) {
        return 0.0;
    }
    return (K_ * a + lambda_ * a - y).norm() / ny;
}

FittedKRR fit(const Dataset& data, const HermiteKernel& kernel, double lambda) {
    if (data.y.size() != data.Z.rows()) {
        throw DomainError("fit: dataset has no labels");
    }
    const RidgeSolver solver(kernel.gram(data.Z), lambda);
    FittedKRR model;
    model.Z_train = data.Z;
    model.lambda = lambda;
    model.dual = solver.solve(data.y);
    model.residual = solver.relative_residual(model.dual, data.y);
    return model;
}

Eigen::VectorXd predict_whitened(const FittedKRR& model, const HermiteKernel& kernel, const Eigen::MatrixXd& Z) {
    return kernel.cross(Z, model.Z_train) * model.dual;
}

double predict(const FittedKRR& model, const HermiteKernel& kernel, std::span<const double> x) {
    const auto& cov = kernel.covariance();
    check_dim(static_cast<Eigen::Index>(x.size()), cov.dim(), "predict");
    Eigen::MatrixXd z(1, static_cast<Eigen::Index>(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) {
        z(0, static_cast<Eigen::Index>(j)) = x[j] / std::sqrt(cov.sigma()[j]);
    }
    return predict_whitened(model, kernel, z)(0);
}

RiskEstimate squared_error(const Eigen::VectorXd& prediction, const Eigen::VectorXd& truth) {
    if (prediction.size() != truth.size() || prediction.size() < 2) {
        throw DomainError("squared_error: need matching vectors with at least two entries");
    }
    const Eigen::ArrayXd sq = (prediction - truth).array().square();
    RiskEstimate out;
    out.samples = static_cast<std::size_t>(sq.size());
    out.mean = sq.mean();
    const double var = (sq - out.mean).square().sum() / static_cast<double>(sq.size() - 1);
    out.std_err = std::sqrt(var / static_cast<double>(sq.size()));
    return out;
}

RiskEstimate excess_risk_mc(const FittedKRR& model, const HermiteKernel& kernel, const TargetFunction& target,
                            std::size_t n_test, std::uint64_t seed) {
    if (n_test < 100) {
        throw DomainError("excess_risk_mc: n_test must be >= 100");
    }
    const Dataset test = sample(n_test, kernel.covariance(), seed);
    return squared_error(predict_whitened(model, kernel, test.Z), target.evaluate(test.Z));
}

}  // namespace plk
