#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "plk/errors.hpp"
#include "plk/krr.hpp"

using namespace plk;

namespace {

std::span<const double> row_span(const Eigen::MatrixXd& M, Eigen::Index i, std::vector<double>& buf) {
    buf.resize(static_cast<std::size_t>(M.cols()));
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        buf[static_cast<std::size_t>(j)] = M(i, j);
    }
    return buf;
}

}  // namespace

TEST_CASE("sampling is reproducible and whitened") {
    const auto cov = build_covariance(2, 0.0);
    const auto a = sample(3, cov, 7);
    const auto b = sample(3, cov, 7);
    CHECK(a.X == b.X);
    CHECK(sample(3, cov, 8).X != a.X);

    const auto wide = build_covariance(4, 0.8);
    const auto big = sample(100000, wide, 1);
    for (Eigen::Index j = 0; j < 4; ++j) {
        const double vz = big.Z.col(j).squaredNorm() / 1e5;
        CHECK(std::abs(vz - 1.0) <= 0.02);
        const double vx = big.X.col(j).squaredNorm() / 1e5;
        const double se = wide.sigma()[std::size_t(j)] * std::sqrt(2.0 / 1e5);
        CHECK(std::abs(vx - wide.sigma()[std::size_t(j)]) <= 3 * se);
        for (Eigen::Index i = 0; i < 10; ++i) {
            CHECK(big.Z(i, j) == doctest::Approx(big.X(i, j) / std::sqrt(wide.sigma()[std::size_t(j)])));
        }
    }
}

TEST_CASE("kernel special cases") {
    const auto cov = build_covariance(6, 0.5);
    const auto pts = sample(10, cov, 2);
    std::vector<double> a, b;
    const HermiteKernel constant(KernelSpec::hermite({1.0, 0.0, 0.0}), cov);
    const HermiteKernel linear(KernelSpec::hermite({0.0, 1.0, 0.0}), cov);
    for (Eigen::Index i = 0; i + 1 < 10; ++i) {
        const auto za = row_span(pts.Z, i, a);
        const auto zb = row_span(pts.Z, i + 1, b);
        CHECK(constant.eval(za, zb) == doctest::Approx(1.0));
        const double dot = pts.X.row(i).dot(pts.X.row(i + 1));
        CHECK(std::abs(linear.eval(za, zb) - dot) <= 1e-10);
    }
}

TEST_CASE("fast kernel evaluation agrees with direct summation") {
    const std::pair<std::size_t, unsigned> cases[] = {{3, 3}, {5, 2}, {10, 3}};
    for (const auto& [d, L] : cases) {
        const auto cov = build_covariance(d, 0.6);
        const HermiteKernel k(KernelSpec::hermite(std::vector<double>(L + 1, 1.0)), cov);
        const auto pts = sample(200, cov, 40 + d);
        std::vector<double> a, b;
        for (Eigen::Index i = 0; i < 200; i += 2) {
            const auto za = row_span(pts.Z, i, a);
            const auto zb = row_span(pts.Z, i + 1, b);
            CHECK(std::abs(k.eval(za, zb) - k.eval_direct(za, zb)) <= 1e-10);
        }
    }
}

TEST_CASE("kernel matrices are symmetric PSD and consistent") {
    const auto cov = build_covariance(20, 0.5);
    const HermiteKernel k(KernelSpec::hermite({1.0, 1.0, 1.0, 1.0}), cov);
    const auto pts = sample(200, cov, 9);
    const Eigen::MatrixXd K = k.gram(pts.Z);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * K.norm());
    const Eigen::MatrixXd C = k.cross(pts.Z.topRows(5), pts.Z);
    CHECK((C - K.topRows(5)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("scalar ridge solve") {
    const auto cov = build_covariance(3, 0.0);
    Dataset one = sample(1, cov, 1);
    one.y = Eigen::VectorXd::Ones(1);
    const HermiteKernel k(KernelSpec::hermite({1.0, 1.0}), cov);
    const double c = k.gram(one.Z)(0, 0);
    const auto model = fit(one, k, 0.3);
    CHECK(model.dual(0) == doctest::Approx(1.0 / (c + 0.3)));
}

TEST_CASE("degree-1 kernel equals primal linear ridge") {
    const auto cov = build_covariance(10, 0.4);
    Dataset data = sample(50, cov, 11);
    label(data, make_target(TargetKind::first_coord, cov), 0.2, 12);
    const double lambda = 0.05;
    const HermiteKernel k(KernelSpec::hermite({0.0, 1.0}), cov);
    const auto model = fit(data, k, lambda);
    Eigen::MatrixXd A = data.X.transpose() * data.X;
    A.diagonal().array() += lambda;
    const Eigen::VectorXd w = A.ldlt().solve(data.X.transpose() * data.y);
    const auto test = sample(30, cov, 13);
    for (Eigen::Index i = 0; i < 30; ++i) {
        std::vector<double> x(10);
        for (Eigen::Index j = 0; j < 10; ++j) {
            x[std::size_t(j)] = test.X(i, j);
        }
        CHECK(std::abs(predict(model, k, x) - test.X.row(i).dot(w)) <= 1e-8);
    }
}

TEST_CASE("training residual, interpolation and shrinkage limits") {
    const auto cov = build_covariance(8, 0.3);
    const HermiteKernel k(KernelSpec::hermite({1.0, 1.0, 1.0, 1.0}), cov);
    Dataset data = sample(40, cov, 21);
    label(data, make_target(TargetKind::last_coord, cov), 0.5, 22);
    const auto model = fit(data, k, 0.01);
    CHECK(model.residual <= 1e-10);

    const auto interp = fit(data, k, 1e-8);
    const Eigen::VectorXd fitted = predict_whitened(interp, k, data.Z);
    CHECK((fitted - data.y).cwiseAbs().maxCoeff() <= 1e-4);

    const auto huge = fit(data, k, 1e12);
    CHECK(predict_whitened(huge, k, data.Z).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK_THROWS_AS(fit(data, k, 0.0), DomainError);
}

TEST_CASE("risk is invariant under permutations of the training set") {
    const auto cov = build_covariance(12, 0.5);
    const HermiteKernel k(KernelSpec::hermite({1.0, 1.0, 1.0, 1.0}), cov);
    const auto target = make_target(TargetKind::first_coord, cov);
    Dataset data = sample(60, cov, 31);
    label(data, target, 0.0, 0);
    std::vector<int> perm(60);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    std::rotate(perm.begin(), perm.begin() + 17, perm.end());
    Dataset shuffled = data;
    for (int i = 0; i < 60; ++i) {
        shuffled.Z.row(i) = data.Z.row(perm[std::size_t(i)]);
        shuffled.X.row(i) = data.X.row(perm[std::size_t(i)]);
        shuffled.y(i) = data.y(perm[std::size_t(i)]);
    }
    const auto r1 = excess_risk_mc(fit(data, k, 0.01), k, target, 500, 5);
    const auto r2 = excess_risk_mc(fit(shuffled, k, 0.01), k, target, 500, 5);
    CHECK(r1.mean == doctest::Approx(r2.mean).epsilon(1e-9));
}

TEST_CASE("excess risk examples") {
    const auto cov = build_covariance(10, 0.5);
    const HermiteKernel k(KernelSpec::hermite({1.0, 1.0, 1.0, 1.0}), cov);
    // 400 points exceed the 286 features, so the ridgeless fit recovers any target in the span
    const TargetFunction constant({{1, 0, 0.7}});
    Dataset data = sample(400, cov, 41);
    label(data, constant, 0.0, 0);
    const auto fitted = fit(data, k, 1e-9);
    CHECK(excess_risk_mc(fitted, k, constant, 1000, 42).mean <= 1e-6);

    // null model: risk estimates ||f*||^2 = 3
    FittedKRR null_model;
    null_model.Z_train = data.Z;
    null_model.dual = Eigen::VectorXd::Zero(400);
    const auto target = make_target(TargetKind::first_coord, cov);
    const auto r = excess_risk_mc(null_model, k, target, 20000, 43);
    CHECK(std::abs(r.mean - 3.0) <= 4 * r.std_err);
    const auto r_other = excess_risk_mc(null_model, k, target, 20000, 44);
    CHECK(std::abs(r.mean - r_other.mean) <= 4 * std::hypot(r.std_err, r_other.std_err));

    const auto zero = make_target(TargetKind::custom, cov);
    CHECK(excess_risk_mc(null_model, k, zero, 200, 45).mean == 0.0);
    CHECK_THROWS_AS(excess_risk_mc(null_model, k, zero, 50, 45), DomainError);
}

TEST_CASE("targets") {
    const auto cov = build_covariance(100, 0.5);
    const auto first = make_target(TargetKind::first_coord, cov);
    REQUIRE(first.terms().size() == 3);
    for (unsigned p = 1; p <= 3; ++p) {
        CHECK(first.terms()[p - 1].coordinate == 1);
        CHECK(first.terms()[p - 1].degree == p);
        CHECK(first.terms()[p - 1].coefficient == 1.0);
    }
    const auto last = make_target(TargetKind::last_coord, cov);
    for (const auto& t : last.terms()) {
        CHECK(t.coordinate == 100);
    }
    CHECK(first.norm_squared() == 3.0);
    CHECK(make_target(TargetKind::custom, cov).terms().empty());
    CHECK_THROWS_AS(TargetFunction({{1, 2, 1.0}, {1, 2, 0.5}}), DomainError);
    CHECK_THROWS_AS(make_target(TargetKind::custom, cov, {{101, 1, 1.0}}), DomainError);
}
