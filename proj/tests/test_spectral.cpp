#include <doctest.h>

#include <cmath>

#include "plk/covariance.hpp"
#include "plk/errors.hpp"
#include "plk/spectral.hpp"

using namespace plk;

namespace {

MultiIndex dense(std::initializer_list<unsigned> e) {
    const std::vector<unsigned> v(e);
    return MultiIndex::from_dense(v);
}

}  // namespace

TEST_CASE("Hermite kernel eigenvalues") {
    const auto cov = build_covariance(3, 1.0);
    const std::vector<double> xi = {0.7, 1.0, 1.0};
    CHECK(hermite_eigenvalue(MultiIndex(3), xi, cov) == doctest::Approx(0.7));
    CHECK(hermite_eigenvalue(MultiIndex::unit(3, 1), xi, cov) == doctest::Approx(6.0 / 11));
    CHECK(hermite_eigenvalue(dense({1, 1, 0}), xi, cov) == doctest::Approx(36.0 / 121).epsilon(1e-14));
}

TEST_CASE("inner-product kernel eigenvalues") {
    const std::vector<double> h = {1.0, 0.0, 1.0, 1.0};
    CHECK(monomial_eigenvalue(dense({1, 1}), h, build_covariance(2, 0.0)) == doctest::Approx(0.5));
    CHECK(monomial_eigenvalue(dense({0, 0}), h, build_covariance(2, 0.0)) == doctest::Approx(1.0));
    // 3! (2/3)^3
    CHECK(monomial_eigenvalue(dense({3, 0}), h, build_covariance(2, 1.0)) ==
          doctest::Approx(16.0 / 9).epsilon(1e-14));
}

TEST_CASE("full spectrum small cases") {
    const auto single = full_spectrum(KernelSpec::hermite({1.0}), build_covariance(5, 0.3));
    REQUIRE(single.size() == 1);
    CHECK(single[0].beta.is_zero());
    CHECK(single[0].lambda == 1.0);

    const auto mono = full_spectrum(KernelSpec::monomial(2), build_covariance(2, 0.0));
    REQUIRE(mono.size() == 6);
    for (int i = 0; i < 3; ++i) {
        CHECK(mono[i].degree == 2);
        CHECK(mono[i].lambda == doctest::Approx(0.5));
    }
    // ties keep canonical order
    CHECK(mono[0].beta.to_string() == "1^2");
    CHECK(mono[1].beta.to_string() == "1^1*2^1");
    CHECK(mono[2].beta.to_string() == "2^2");
    for (int i = 3; i < 6; ++i) {
        CHECK(mono[i].lambda == 0.0);
    }
}

TEST_CASE("counting function") {
    const auto spec = KernelSpec::monomial(2);
    const auto cov = build_covariance(3, 1.0);
    // exhaustive: 2 sigma^beta over the six degree-2 indices, sigma = (6, 3, 2)/11
    std::size_t expected = 0;
    for (const auto& b : enumerate(3, 2)) {
        if (b.degree() == 2 && 2.0 * sigma_power(b, cov) >= 0.1) {
            ++expected;
        }
    }
    CHECK(expected == 4);
    CHECK(counting_M(spec, cov, 0.1) == 4);
    CHECK(counting_M(spec, cov, 10.0) == 0);
    const auto all_pos = KernelSpec::polynomial({1.0, 1.0, 1.0});
    CHECK(counting_M(all_pos, cov, 1e-300) == 10);
}

TEST_CASE("counting function is a non-increasing step function") {
    const auto spec = KernelSpec::binomial_power(1.0, 3);
    const auto cov = build_covariance(8, 0.5);
    const auto spectrum = full_spectrum(spec, cov);
    std::size_t prev = spectrum.size();
    for (double log_eps = -12; log_eps <= 1; log_eps += 0.25) {
        const std::size_t m = counting_M(spectrum, std::pow(10.0, log_eps));
        CHECK(m <= prev);
        prev = m;
    }
    for (const auto& e : spectrum) {
        // right-continuity: the count at an eigenvalue includes it
        CHECK(counting_M(spectrum, e.lambda) >= 1);
    }
}

TEST_CASE("Hermite spectrum mass per level is xi_k") {
    for (double alpha : {0.0, 0.4, 1.2}) {
        const auto cov = build_covariance(12, alpha);
        const std::vector<double> xi = {0.5, 1.0, 2.0, 0.25};
        double total = 0.0;
        for (const auto& e : full_spectrum(KernelSpec::hermite(xi), cov)) {
            total += e.lambda;
        }
        CHECK(std::abs(total - 3.75) <= 1e-10);
    }
}

TEST_CASE("spectral gaps") {
    for (const auto& g : spectral_gaps(0.0, 100, 3)) {
        CHECK(g.predicted);
        CHECK(g.empirical_ratio > 1.0);
    }
    const auto g3 = spectral_gaps(0.3, 100, 4);
    REQUIRE(g3.size() == 4);
    CHECK(g3[1].asymptotic);
    CHECK(g3[2].asymptotic);
    CHECK_FALSE(g3[3].asymptotic);
    const auto g7 = spectral_gaps(0.7, 200, 3);
    CHECK(g7[0].predicted);
    CHECK_FALSE(g7[1].predicted);
    CHECK_FALSE(g7[2].predicted);
    CHECK(g7[0].empirical_ratio > 1.0);
}

TEST_CASE("predicted order sectors partition the ranks") {
    for (double alpha : {0.0, 0.3, 0.7, 1.05}) {
        for (const auto& spec : {KernelSpec::binomial_power(1.0, 3), KernelSpec::monomial(3), KernelSpec::exp_truncated(4)}) {
            const auto cov = build_covariance(20, alpha);
            const auto lay = sector_layout(spec, cov);
            REQUIRE(!lay.sectors.empty());
            CHECK(lay.sectors.front().first == 1);
            CHECK(lay.sectors.back().last == lay.total);
            for (std::size_t i = 1; i < lay.sectors.size(); ++i) {
                CHECK(lay.sectors[i].first == lay.sectors[i - 1].last + 1);
            }
        }
    }
}

TEST_CASE("predicted order values") {
    const auto spec = KernelSpec::binomial_power(1.0, 3);
    const auto cov = build_covariance(50, 0.0);
    const auto lay = sector_layout(spec, cov);
    const auto first = predicted_order(lay, 1);
    CHECK(first.value == 1.0);
    CHECK(first.sector == "level-0");
    // isotropic: every level is a gap sector; level 1 occupies ranks 2..51
    const auto p2 = predicted_order(lay, 2);
    CHECK(p2.sector == "gap-0");
    CHECK(p2.m_plus == 1);
    const auto p52 = predicted_order(lay, 52);
    CHECK(p52.sector == "gap-1");
    CHECK(p52.m_plus == 1);
    CHECK(p52.value == doctest::Approx(1.0 / (r0(cov) * r0(cov))));
    CHECK_THROWS_AS(predicted_order(lay, 0), DomainError);
    CHECK_THROWS_AS(predicted_order(lay, lay.total + 1), DomainError);
}

TEST_CASE("truncation error") {
    const auto cov = build_covariance(20, 0.3);
    const auto poly = AnalyticCoefficients::polynomial({1.0, 1.0, 0.5});
    CHECK(truncation_hs_error(poly, 2, cov, 100, 1).value == 0.0);
    const auto e5 = truncation_hs_error(AnalyticCoefficients::exp(), 5, cov, 100000, 7);
    const auto e7 = truncation_hs_error(AnalyticCoefficients::exp(), 7, cov, 100000, 7);
    CHECK(e5.value > 0.0);
    CHECK(e5.value < 1e-2);
    CHECK(e7.value < e5.value);
    CHECK(e5.std_err > 0.0);
}
