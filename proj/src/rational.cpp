#include "loclab/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "loclab/error.hpp"

namespace loclab {

namespace mp = boost::multiprecision;

std::string to_string(const Rational& q) {
  return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    if (s.empty()) throw InputError("empty integer in rational '" + std::string(text) + "'");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) throw InputError("malformed rational '" + std::string(text) + "'");
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw InputError("malformed rational '" + std::string(text) + "'");
    }
    return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational dyadic(unsigned k) {
  BigInt den = 1;
  den <<= k;
  return Rational(BigInt(1), den);
}

bool leq_pow2_neg(const Rational& q, const Rational& exponent) {
  if (q <= 0) return true;
  // Decide in floating point when the margin is comfortable, otherwise exactly:
  // q <= 2^(-a/b)  <=>  num^b * 2^a <= den^b.
  using Float = mp::number<mp::cpp_bin_float<80>>;
  Float lhs = mp::log2(Float(mp::numerator(q))) - mp::log2(Float(mp::denominator(q)));
  Float rhs = -Float(mp::numerator(exponent)) / Float(mp::denominator(exponent));
  Float gap = rhs - lhs;
  if (gap > Float(1e-12)) return true;
  if (gap < Float(-1e-12)) return false;
  const BigInt& a = mp::numerator(exponent);
  const BigInt& b = mp::denominator(exponent);
  if (b > 4096 || a > 1'000'000) {
    throw CapExceeded("exact power comparison too large: exponent " + to_string(exponent));
  }
  auto bb = b.convert_to<unsigned>();
  BigInt left = mp::pow(mp::numerator(q), bb);
  left <<= a.convert_to<unsigned>();
  BigInt right = mp::pow(mp::denominator(q), bb);
  return left <= right;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;
  }
  return result;
}

BigInt binomial_sum(unsigned n, unsigned k) {
  BigInt total = 0;
  for (unsigned i = 0; i <= k && i <= n; ++i) total += binomial(n, i);
  return total;
}

}  // namespace loclab
