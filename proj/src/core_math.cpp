#include "hgscan/core_math.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hgscan/errors.hpp"

namespace hgscan::math {

namespace {

void require_open_unit(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
        throw DomainError(std::string(name) + " must lie in (0,1), got " + std::to_string(v));
    }
}

}  // namespace

double h(double x) {
    if (!(x > -1.0)) {
        throw DomainError("h(x) requires x > -1, got " + std::to_string(x));
    }
    if (std::isinf(x)) return x;
    if (std::fabs(x) < 1e-2) {
        // h(x) = sum_{k>=2} (-1)^k x^k / (k(k-1))
        double term = x * x;
        double sum = 0.0;
        for (int k = 2; k < 14; ++k) {
            sum += ((k % 2 == 0) ? term : -term) / (static_cast<double>(k) * (k - 1));
            term *= x;
        }
        return sum;
    }
    return (x + 1.0) * std::log1p(x) - x;
}

double h_prime(double x) {
    if (!(x > -1.0)) {
        throw DomainError("h'(x) requires x > -1, got " + std::to_string(x));
    }
    return std::log1p(x);
}

double h_inverse(double y) {
    if (!(y >= 0.0)) {
        throw DomainError("h_inverse(y) requires y >= 0, got " + std::to_string(y));
    }
    if (y == 0.0) return 0.0;
    if (std::isinf(y)) return y;
    double lo = 0.0;
    double hi = 1.0;
    while (h(hi) < y) {
        lo = hi;
        hi *= 2.0;
    }
    // Bisect to full double resolution; the 1e-12 absolute target is
    // reached well before the bracket stops shrinking.
    for (int iter = 0; iter < 2000; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (h(mid) < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (y - h(lo) <= h(hi) - y) ? lo : hi;
}

double kl_bernoulli(double q, double p) {
    require_open_unit(q, "q");
    require_open_unit(p, "p");
    const double value = q * std::log(q / p) + (1.0 - q) * std::log((1.0 - q) / (1.0 - p));
    return value < 0.0 ? 0.0 : value;
}

double theta(double p, double q) {
    require_open_unit(p, "p");
    require_open_unit(q, "q");
    return std::log(q) - std::log(p) + std::log1p(-p) - std::log1p(-q);
}

double lambda_mgf(double p, double t) {
    require_open_unit(p, "p");
    if (!std::isfinite(t)) {
        throw DomainError("lambda_mgf requires finite t");
    }
    // log(1 - p + p e^t) = log1p(p (e^t - 1))
    if (t < 30.0) {
        return std::log1p(p * std::expm1(t));
    }
    return t + std::log(p) + std::log1p((1.0 - p) * std::exp(-t) / p);
}

double bennett_tail(double mu, double t) {
    if (!(mu > 0.0)) {
        throw DomainError("bennett_tail requires mu > 0");
    }
    if (!(t >= 0.0)) {
        throw DomainError("bennett_tail requires t >= 0");
    }
    if (t == 0.0) return 1.0;
    return std::exp(-mu * h(t / mu));
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i, reduced by gcd to keep intermediates small.
        std::uint64_t num = n - k + i;
        std::uint64_t den = i;
        const std::uint64_t g1 = std::gcd(num, den);
        num /= g1;
        den /= g1;
        const std::uint64_t g2 = std::gcd(result, den);
        result /= g2;
        den /= g2;
        // den is now 1 because the running product is always an integer.
        if (num != 0 && result > std::numeric_limits<std::uint64_t>::max() / num) {
            throw std::overflow_error("binom(" + std::to_string(n) + ", " + std::to_string(k) +
                                      ") exceeds 64 bits");
        }
        result *= num;
    }
    return result;
}

double binom_real(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0.0;
    if (k > n - k) k = n - k;
    try {
        return static_cast<double>(binom(n, k));
    } catch (const std::overflow_error&) {
    }
    double result = 1.0;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result *= static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return result;
}

namespace {

void check_moment_args(int n, int k, double a, double b) {
    if (n < 2 || k < 2) {
        throw DomainError("moment ratio bound requires n, k >= 2");
    }
    if (!(a > 0.0) || !(b < 1.0) || a > b) {
        throw DomainError("moment ratio bound requires 0 < a <= b < 1");
    }
}

}  // namespace

double moment_ratio_bound(int n, int k, double a, double b) {
    check_moment_args(n, k, a, b);
    const double ratio = b / a;
    double sum = 0.0;
    double power = 1.0;
    for (int t = 1; t < k; ++t) {
        power *= ratio;
        sum += power;
    }
    return sum / ((k - 1) * std::pow(static_cast<double>(n), k - 1));
}

double moment_ratio_x0(int n, int k, double a, double b) {
    check_moment_args(n, k, a, b);
    if (a == b) {
        throw DomainError("moment_ratio_x0 requires a < b");
    }
    const double ak = std::pow(a, k);
    const double bk = std::pow(b, k);
    return ((ak - bk) * n * b - k * n * (a - b) * bk) / ((k - 1) * (a - b) * (ak - bk));
}

double moment_ratio_interior(int n, int k, double a, double b) {
    const double x0 = moment_ratio_x0(n, k, a, b);
    const double ak = std::pow(a, k);
    const double bk = std::pow(b, k);
    return (x0 * (ak - bk) + n * bk) / std::pow(x0 * (a - b) + n * b, k);
}

}  // namespace hgscan::math
