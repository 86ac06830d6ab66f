#pragma once

// Exact rational arithmetic helpers on top of GMP's mpq_class.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace loopinvar {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "p/q" or a finite decimal ("1.5", "-0.25") exactly.
/// Returns std::nullopt on malformed input or a zero denominator.
std::optional<Rational> parse_rational(const std::string& text);

/// Canonical rendering: "p" for integers, "p/q" otherwise (q > 0, reduced).
std::string to_string(const Rational& r);

/// r^e for e >= 0 (0^0 = 1).
Rational pow_rational(const Rational& r, unsigned long e);

/// Binomial coefficient C(n, k) as an exact integer (0 when k > n).
Integer binomial(unsigned long n, unsigned long k);

/// Double factorial (k-1)!! for odd-order Gaussian moment coefficients;
/// dfact(-1) = dfact(0) = 1.
Integer double_factorial(long k);

/// True iff r is an integer.
bool is_integer(const Rational& r);

/// Factors |n| into primes (trial division + Pollard rho); returns
/// (prime, exponent) pairs. n must be nonzero.
std::vector<std::pair<Integer, unsigned>> factor_integer(const Integer& n);

/// All positive divisors of |n| (n nonzero), unsorted.
std::vector<Integer> divisors(const Integer& n);

}  // namespace loopinvar
