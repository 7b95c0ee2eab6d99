#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace loclab {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// "num/den" with den > 0; integers print as "num/1" so every field has the same shape.
std::string to_string(const Rational& q);

// Accepts "num/den" or a bare integer.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

// 1 / 2^k
Rational dyadic(unsigned k);

// Exact test of q <= 2^(-exponent) for q >= 0 and rational exponent >= 0.
bool leq_pow2_neg(const Rational& q, const Rational& exponent);

BigInt binomial(unsigned n, unsigned k);
// sum_{i=0}^{k} binom(n, i)
BigInt binomial_sum(unsigned n, unsigned k);

}  // namespace loclab
