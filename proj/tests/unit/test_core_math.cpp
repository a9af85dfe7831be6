#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "hgscan/core_math.hpp"
#include "hgscan/errors.hpp"
#include "oracles.hpp"

using namespace hgscan;
namespace hm = hgscan::math;

namespace {
const double kE = std::exp(1.0);
}

TEST_CASE("h: closed-form values") {
    CHECK(hm::h(0.0) == 0.0);
    CHECK(hm::h(kE - 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(hm::h(1.0) == doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-14));
    CHECK(hm::h(1.0) == doctest::Approx(0.386294).epsilon(1e-6));
    CHECK_THROWS_AS(hm::h(-1.0), DomainError);
    CHECK_THROWS_AS(hm::h(-2.0), DomainError);
}

TEST_CASE("h: agrees with a long-double reference including the series region") {
    for (double x : {-0.9, -0.5, -1e-3, -1e-6, 1e-9, 1e-5, 5e-3, 0.0099, 0.011, 0.5, 3.0, 100.0}) {
        const double ref = static_cast<double>(oracle::cramer(x));
        CHECK(hm::h(x) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("h: convex, positive off zero, flat at zero") {
    CHECK(hm::h_prime(0.0) == 0.0);
    for (double x = -0.99; x < 20.0; x += 0.01) {
        if (std::fabs(x) > 1e-9) CHECK(hm::h(x) > 0.0);
        const double step = 1e-3;
        if (x - step > -1.0) {
            CHECK(hm::h(x - step) + hm::h(x + step) - 2.0 * hm::h(x) >= -1e-12);
        }
    }
}

TEST_CASE("h: growth against x ln x") {
    for (double x = 1.0; x <= 200.0; x += 0.25) CHECK(hm::h(x - 1.0) <= x * std::log(x) + 1e-12);
    for (double x = 10.0; x <= 1e6; x *= 1.37) {
        CHECK(std::fabs(hm::h(x - 1.0) - x * std::log(x) + x) / (x * std::log(x)) <= 0.25);
    }
}

TEST_CASE("h_inverse: values, lower bound and round trip") {
    CHECK(hm::h_inverse(0.0) == 0.0);
    CHECK(hm::h_inverse(1.0) == doctest::Approx(kE - 1.0).epsilon(1e-12));
    CHECK(hm::h_inverse(0.386294361119890618) == doctest::Approx(1.0).epsilon(1e-9));
    for (double y = 0.0; y <= 400.0; y += 0.37) CHECK(hm::h_inverse(y) >= std::sqrt(y) - 1e-12);
    for (double x = 0.0; x <= 50.0; x += 0.05) CHECK(std::fabs(hm::h_inverse(hm::h(x)) - x) <= 1e-9);
    CHECK_THROWS_AS(hm::h_inverse(-0.1), DomainError);
}

TEST_CASE("kl_bernoulli: values, Pinsker and domain") {
    CHECK(hm::kl_bernoulli(0.3, 0.3) == 0.0);
    CHECK(hm::kl_bernoulli(0.5, 0.25) ==
          doctest::Approx(0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0)).epsilon(1e-13));
    CHECK(hm::kl_bernoulli(0.5, 0.25) == doctest::Approx(0.143841).epsilon(1e-5));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-4, 1.0 - 1e-4);
    for (int i = 0; i < 2000; ++i) {
        const double q = u(rng);
        const double p = u(rng);
        CHECK(hm::kl_bernoulli(q, p) >= 2.0 * (q - p) * (q - p) - 1e-15);
    }
    CHECK_THROWS_AS(hm::kl_bernoulli(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(hm::kl_bernoulli(0.5, 1.0), DomainError);
}

TEST_CASE("theta and lambda_mgf: values and likelihood identity") {
    CHECK(hm::theta(0.2, 0.2) == 0.0);
    CHECK(hm::theta(0.1, 0.3) == doctest::Approx(std::log(27.0 / 7.0)).epsilon(1e-14));
    CHECK(hm::theta(0.1, 0.3) == doctest::Approx(1.349927).epsilon(1e-6));
    CHECK(hm::lambda_mgf(0.4, 0.0) == 0.0);
    CHECK(hm::lambda_mgf(0.5, std::log(3.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(hm::theta(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(hm::theta(0.5, 1.0), DomainError);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
    for (int i = 0; i < 2000; ++i) {
        const double p = u(rng);
        const double q = u(rng);
        const double t = hm::theta(p, q);
        CHECK(hm::lambda_mgf(p, t) == doctest::Approx(std::log((1.0 - p) / (1.0 - q))).epsilon(1e-10));
        for (int a : {0, 1}) {
            const double lhs = a * t - hm::lambda_mgf(p, t);
            const double rhs = a ? std::log(q / p) : std::log((1.0 - q) / (1.0 - p));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("theta is increasing in q and lambda is convex in t") {
    for (double q = 0.01; q < 0.98; q += 0.01) CHECK(hm::theta(0.3, q + 0.01) > hm::theta(0.3, q));
    for (double t = -20.0; t < 40.0; t += 0.5) {
        CHECK(hm::lambda_mgf(0.2, t - 0.5) + hm::lambda_mgf(0.2, t + 0.5) - 2.0 * hm::lambda_mgf(0.2, t) >= -1e-12);
    }
    CHECK(hm::lambda_mgf(0.3, 800.0) == doctest::Approx(800.0 + std::log(0.3)).epsilon(1e-12));
}

TEST_CASE("bennett_tail: values and Monte Carlo domination") {
    CHECK(hm::bennett_tail(5.0, 0.0) == 1.0);
    CHECK(hm::bennett_tail(1.0, kE - 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(hm::bennett_tail(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(hm::bennett_tail(1.0, -1.0), DomainError);

    std::mt19937_64 rng(2024);
    std::binomial_distribution<int> bin(200, 0.05);
    const int draws = 100000;
    int exceed[3] = {0, 0, 0};
    const int ts[3] = {2, 5, 8};
    for (int i = 0; i < draws; ++i) {
        const int x = bin(rng);
        for (int j = 0; j < 3; ++j) exceed[j] += x >= 10 + ts[j];
    }
    for (int j = 0; j < 3; ++j) {
        CHECK(static_cast<double>(exceed[j]) / draws <= hm::bennett_tail(10.0, ts[j]));
    }
}

TEST_CASE("binom: exact values against Pascal's triangle") {
    CHECK(hm::binom(5, 2) == 10);
    CHECK(hm::binom(3, 5) == 0);
    CHECK(hm::binom(24, 6) == 134596);
    const auto table = oracle::pascal(66);
    for (std::uint64_t n = 0; n <= 66; ++n) {
        for (std::uint64_t k = 0; k <= n; ++k) {
            CHECK(hm::binom(n, k) == table[n][k]);
            CHECK(hm::binom_real(n, k) == doctest::Approx(static_cast<double>(table[n][k])).epsilon(1e-15));
        }
    }
    CHECK_THROWS_AS(hm::binom(200, 100), std::overflow_error);
    CHECK(hm::binom_real(200, 100) == doctest::Approx(9.054851465610328e58).epsilon(1e-12));
}

TEST_CASE("moment_ratio_bound: values and random-search domination") {
    for (int n : {2, 3, 7}) {
        for (int k : {2, 3, 5}) {
            CHECK(hm::moment_ratio_bound(n, k, 0.2, 0.2) == doctest::Approx(std::pow(n, 1 - k)).epsilon(1e-14));
        }
    }
    CHECK(hm::moment_ratio_bound(4, 2, 0.1, 0.2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(hm::moment_ratio_bound(4, 2, 0.0, 0.2), DomainError);
    CHECK_THROWS_AS(hm::moment_ratio_bound(4, 2, 0.3, 0.2), DomainError);
    CHECK_THROWS_AS(hm::moment_ratio_bound(4, 2, 0.1, 1.0), DomainError);
    CHECK_THROWS_AS(hm::moment_ratio_bound(1, 2, 0.1, 0.2), DomainError);

    std::mt19937_64 rng(3);
    const int n = 5;
    const int k = 3;
    const double a = 0.1;
    const double b = 0.3;
    std::uniform_real_distribution<double> u(a, b);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double s = 0.0;
        double sk = 0.0;
        for (int j = 0; j < n; ++j) {
            const double x = u(rng);
            s += x;
            sk += std::pow(x, k);
        }
        worst = std::max(worst, sk / std::pow(s, k));
    }
    CHECK(worst <= hm::moment_ratio_interior(n, k, a, b) + 1e-15);
    CHECK(hm::moment_ratio_interior(n, k, a, b) <= hm::moment_ratio_bound(n, k, a, b) + 1e-15);
}
