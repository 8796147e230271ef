#include <doctest.h>

#include <cmath>

#include "plk/errors.hpp"
#include "plk/smoothcount.hpp"
#include "plk/theory.hpp"

using namespace plk;

namespace {

const KernelSpec kHermite3 = KernelSpec::hermite({1.0, 1.0, 1.0, 1.0});

}  // namespace

TEST_CASE("kappa and predictor degree") {
    CHECK(kappa_from_n(1000.0, 10) == doctest::Approx(3.0));
    CHECK(predictor_degree(0.5, 1.2) == 2);
    CHECK(predictor_degree(0.0, 1.5) == 1);
    CHECK(predictor_degree(0.9, 1.5) == 15);
}

TEST_CASE("isotropic Low set") {
    const auto cov = build_covariance(100, 0.0);
    const auto part = partition_kappa(cov, kHermite3, 1.5, 0.1);
    CHECK(part.low.size() == 101);
    CHECK(part.D_kappa == 1);
    CHECK(part.preconditions_hold());
    CHECK(predictor_degree_check(part).max_low_degree == 1);
    CHECK(part.in_low(MultiIndex(100)));
    CHECK(part.in_low(MultiIndex::unit(100, 37)));
    CHECK_FALSE(part.in_low(MultiIndex::unit(100, 1, 2)));
    CHECK(part.total_mass == doctest::Approx(4.0));
    CHECK(part.high_mass == doctest::Approx(2.0));

    // shrinkage is shared by all degree-1 indices
    const auto target = make_target(TargetKind::first_coord, cov);
    const auto pred = effective_risk(part, target, part.n, 0.01, kHermite3, cov);
    for (std::size_t i = 1; i < pred.low.size(); ++i) {
        CHECK(pred.shrinkage[i] == doctest::Approx(pred.shrinkage[1]));
    }
}

TEST_CASE("High is empty once the threshold passes every eigenvalue") {
    const auto cov = build_covariance(5, 0.3);
    const auto part = partition_kappa(cov, kHermite3, 20.5, 0.05);
    CHECK(part.low.size() == count_multi_indices(5, 3));
    CHECK(part.high_mass == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("preconditions are flagged rather than thrown") {
    const auto cov = build_covariance(100, 0.5);
    CHECK_FALSE(partition_kappa(cov, kHermite3, 2.0, 0.05).kappa_non_integer);
    CHECK_FALSE(partition_kappa(cov, kHermite3, 1.5, 0.05).degree_condition);
    CHECK_FALSE(partition_kappa(build_covariance(100, 1.2), kHermite3, 1.5, 0.05).alpha_in_range);
    CHECK(partition_kappa(cov, kHermite3, 1.2, 0.05).preconditions_hold());
}

TEST_CASE("degree-15 index against the threshold at alpha = 0.9") {
    const auto cov = build_covariance(100, 0.9);
    const auto part = partition_kappa(cov, KernelSpec::hermite(std::vector<double>(16, 1.0)), 1.5, 0.1);
    CHECK(part.D_kappa == 15);
    const bool expected = 15.0 * std::log(cov.sigma(1)) > -1.6 * std::log(100.0);
    CHECK(part.in_low(MultiIndex::unit(100, 1, 15)) == expected);
    CHECK(predictor_degree_check(part).cap_holds);
}

TEST_CASE("second Hermite level on the top coordinate enters at 2 log_d(1/sigma_1)") {
    const auto cov = build_covariance(100, 0.5);
    const double delta0 = 0.05;
    const double edge = 2.0 * std::log(1.0 / cov.sigma(1)) / std::log(100.0);
    for (double kappa = 0.3; kappa < 3.0; kappa += 0.137) {
        const auto part = partition_kappa(cov, kHermite3, kappa, delta0);
        CHECK(part.in_low(MultiIndex::unit(100, 1, 2)) == (kappa + delta0 > edge));
    }
}

TEST_CASE("Low grows with kappa and delta0") {
    const auto cov = build_covariance(80, 0.6);
    std::size_t prev = 0;
    for (double kappa = 0.3; kappa < 3.0; kappa += 0.21) {
        const auto part = partition_kappa(cov, kHermite3, kappa, 0.05);
        CHECK(part.low.size() >= prev);
        CHECK(part.low.size() >= 1);
        prev = part.low.size();
        CHECK(partition_kappa(cov, kHermite3, kappa, 0.2).low.size() >= part.low.size());
    }
}

TEST_CASE("shrinkage ordering follows eigenvalue ordering") {
    const auto cov = build_covariance(30, 0.4);
    const auto part = partition(cov, kHermite3, 400.0, 0.05);
    const auto target = make_target(TargetKind::first_coord, cov);
    for (auto mode : {TheoryMode::standard, TheoryMode::literal}) {
        const auto pred = effective_risk(part, target, part.n, 0.01, kHermite3, cov, mode);
        REQUIRE(pred.shrinkage.size() == part.low_lambda.size());
        for (std::size_t i = 0; i < pred.shrinkage.size(); ++i) {
            CHECK(pred.shrinkage[i] > 0.0);
            CHECK(pred.shrinkage[i] <= 1.0);
            for (std::size_t j = 0; j < pred.shrinkage.size(); ++j) {
                if (part.low_lambda[i] > part.low_lambda[j] * (1 + 1e-12)) {
                    CHECK(pred.shrinkage[i] >= pred.shrinkage[j]);
                }
            }
        }
        CHECK(pred.risk >= 0.0);
    }
}

TEST_CASE("risk without a Low component") {
    const auto cov = build_covariance(100, 0.5);
    const auto part = partition_kappa(cov, kHermite3, 0.5, 0.05);
    const auto target = make_target(TargetKind::last_coord, cov);
    const auto off = effective_risk(part, target, part.n, 0.01, kHermite3, cov, TheoryMode::standard,
                                    HighResidual::off);
    CHECK(off.risk == 0.0);
    const auto autom = effective_risk(part, target, part.n, 0.01, kHermite3, cov);
    CHECK(autom.high_residual);
    CHECK(autom.risk == doctest::Approx(3.0));
}

TEST_CASE("risk vanishes as n grows") {
    const auto cov = build_covariance(10, 0.5);
    const auto target = make_target(TargetKind::first_coord, cov);
    double prev = 1e300;
    for (double n : {10.0, 100.0, 1e3, 1e4, 1e6}) {
        const auto part = partition(cov, kHermite3, n, 0.05);
        const auto pred = effective_risk(part, target, n, 0.01, kHermite3, cov);
        CHECK(pred.risk <= prev + 1e-12);
        prev = pred.risk;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("zero-weight level inside Low is rejected") {
    const auto cov = build_covariance(10, 0.0);
    const KernelSpec holes = KernelSpec::hermite({1.0, 0.0, 1.0});
    const auto part = partition_kappa(cov, holes, 1.5, 0.05);
    const auto target = make_target(TargetKind::first_coord, cov);
    CHECK_THROWS_AS(effective_risk(part, target, part.n, 0.01, holes, cov), DomainError);
}

TEST_CASE("entry sample sizes separate aligned and misaligned targets") {
    const double delta0 = 0.05;
    for (std::size_t d : {50, 100, 400}) {
        const auto cov = build_covariance(d, 0.6);
        const double dd = static_cast<double>(d);
        const double first = entry_sample_size(MultiIndex::unit(d, 1, 2), cov, delta0);
        const double last = entry_sample_size(MultiIndex::unit(d, static_cast<std::uint32_t>(d), 2), cov, delta0);
        CHECK(first == doctest::Approx(r0(cov) * r0(cov) * std::pow(dd, -delta0)));
        CHECK(last >= dd * dd * std::pow(dd, -delta0) * (1 - 1e-12));
        CHECK(last > first);
    }
}

TEST_CASE("theory mode names") {
    CHECK(to_string(TheoryMode::standard) == "default");
    CHECK(to_string(TheoryMode::literal) == "literal");
    CHECK(parse_theory_mode("literal") == TheoryMode::literal);
    CHECK(parse_theory_mode("default") == TheoryMode::standard);
    CHECK_THROWS_AS(parse_theory_mode("other"), DomainError);
}
