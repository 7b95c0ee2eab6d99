#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loclab/bits.hpp"
#include "loclab/caps.hpp"
#include "loclab/rational.hpp"

namespace loclab {

// A multilinear polynomial over F2 in variables x_0..x_{n-1} (written x1..xn in
// text). Each monomial is the bit mask of its variables; the empty mask is the
// constant 1. Monomials are kept sorted by (size, mask) with no repeats, so two
// polynomials are equal iff their monomial lists are equal.
class MultilinearPoly {
 public:
  MultilinearPoly() = default;
  explicit MultilinearPoly(int n_vars);

  // Duplicate monomials cancel in pairs.
  static MultilinearPoly from_monomials(int n_vars, std::vector<Point> monomials);
  static MultilinearPoly constant(int n_vars, bool value);
  static MultilinearPoly variable(int n_vars, int index);

  int n_vars() const { return n_vars_; }
  std::span<const Point> monomials() const { return monomials_; }
  std::size_t size() const { return monomials_.size(); }
  bool is_zero() const { return monomials_.empty(); }
  bool is_constant() const;
  bool constant_term() const { return !monomials_.empty() && monomials_.front() == 0; }
  // -1 for the zero polynomial.
  int degree() const;

  bool evaluate(Point x) const;
  std::string to_string() const;

  friend bool operator==(const MultilinearPoly&, const MultilinearPoly&) = default;

 private:
  int n_vars_ = 0;
  std::vector<Point> monomials_;
};

// Sort key of the canonical monomial order.
inline bool monomial_less(Point a, Point b) {
  int wa = weight(a);
  int wb = weight(b);
  return wa != wb ? wa < wb : a < b;
}

// Truth table of a function on {0,1}^n: entry x is f(x), x read little-endian
// (bit i of the index is x_{i+1}).
class TruthTable {
 public:
  TruthTable() = default;
  explicit TruthTable(int n_vars);

  int n_vars() const { return n_vars_; }
  std::uint64_t length() const { return std::uint64_t{1} << n_vars_; }
  bool get(Point x) const { return bits_.get(x); }
  void set(Point x, bool v) { bits_.set(x, v); }
  std::uint64_t count_ones() const { return bits_.count(); }
  const BitVector& bits() const { return bits_; }
  BitVector& bits() { return bits_; }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  int n_vars_ = 0;
  BitVector bits_;
};

MultilinearPoly parse_poly(std::string_view text, int n_vars);

MultilinearPoly add(const MultilinearPoly& f, const MultilinearPoly& g);
MultilinearPoly multiply(const MultilinearPoly& f, const MultilinearPoly& g);
inline MultilinearPoly operator+(const MultilinearPoly& f, const MultilinearPoly& g) { return add(f, g); }
inline MultilinearPoly operator*(const MultilinearPoly& f, const MultilinearPoly& g) { return multiply(f, g); }

// f(a_1, ..., a_n) with every a_i over the same k variables.
MultilinearPoly substitute(const MultilinearPoly& f, std::span<const MultilinearPoly> args,
                           const Caps& caps = default_caps());

TruthTable truth_table(const MultilinearPoly& f, const Caps& caps = default_caps());
MultilinearPoly from_truth_table(const TruthTable& table);

// In-place Moebius transform over the subset lattice; it is its own inverse over F2.
void moebius_transform(BitVector& bits, int n_vars);

// |#zeros - #ones| / 2^n
Rational bias(const MultilinearPoly& f, const Caps& caps = default_caps());
Rational bias(const TruthTable& table);
Rational correlation(const MultilinearPoly& f, const MultilinearPoly& g, const Caps& caps = default_caps());
Rational correlation(const TruthTable& f, const TruthTable& g);

// f_S(x) = sum over T subset of S of f(x + sum T), computed symbolically.
MultilinearPoly directional_derivative(const MultilinearPoly& f, std::span<const Point> dirs);

bool hits_degree(const MultilinearPoly& f, int r);
bool hits_degree_at_most(const MultilinearPoly& f, int r);

// (monomials of size <= r, the rest)
std::pair<MultilinearPoly, MultilinearPoly> split_at_degree(const MultilinearPoly& f, int r);

// Every monomial of size <= r, the constant included, kept independently with probability 1/2.
MultilinearPoly random_poly(int n_vars, int r, std::uint64_t seed);

}  // namespace loclab
