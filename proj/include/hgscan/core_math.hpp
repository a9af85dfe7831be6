#pragma once

#include <cstdint>

namespace hgscan::math {

/// Cramér rate function h(x) = (x+1)ln(x+1) - x on x > -1.
///
/// Convex with minimum h(0) = 0. Near zero a power series is used so that
/// h(x) ~ x^2/2 keeps full relative precision.
double h(double x);

/// Derivative h'(x) = ln(1+x).
double h_prime(double x);

/// Inverse of h on the nonnegative branch: the unique x >= 0 with h(x) = y.
double h_inverse(double y);

/// Bernoulli KL divergence H_p(q) = q ln(q/p) + (1-q) ln((1-q)/(1-p)).
double kl_bernoulli(double q, double p);

/// Log-odds tilt ln(q(1-p) / (p(1-q))) mapping Bern(p) to Bern(q).
double theta(double p, double q);

/// Bernoulli log-MGF ln(1 - p + p e^t).
double lambda_mgf(double p, double t);

/// Bennett upper bound exp(-mu h(t/mu)) on P(X - EX >= t) for a sum of
/// independent Bernoullis with mean mu.
double bennett_tail(double mu, double t);

/// Exact binomial coefficient. Throws std::overflow_error when the value
/// does not fit in 64 bits.
std::uint64_t binom(std::uint64_t n, std::uint64_t k);

/// Binomial coefficient in floating point; correctly rounded while the exact
/// value fits in 64 bits.
double binom_real(std::uint64_t n, std::uint64_t k);

/// Upper bound on max sum(x_i^k) / (sum x_i)^k over x in [a,b]^n:
/// (1/((k-1) n^(k-1))) * sum_{t=1}^{k-1} (b/a)^t.
double moment_ratio_bound(int n, int k, double a, double b);

/// The tighter intermediate bound g(x0) from the same argument, with
/// x0 = ((a^k-b^k)nb - kn(a-b)b^k) / ((k-1)(a-b)(a^k-b^k)). Requires a < b.
double moment_ratio_interior(int n, int k, double a, double b);

/// Location x0 of the interior maximiser of g. Requires a < b.
double moment_ratio_x0(int n, int k, double a, double b);

}  // namespace hgscan::math
