#pragma once

// Brute-force reference computations shared by the test suites. They only use
// the raw monomial lists and point enumeration, never the table machinery.

#include <cstdint>
#include <vector>

#include "loclab/f2poly.hpp"

namespace loclab::oracle {

inline bool eval(const MultilinearPoly& f, Point x) {
  int parity = 0;
  for (Point m : f.monomials()) {
    bool all = true;
    for (int i = 0; i < f.n_vars(); ++i) {
      if (bit(m, i) && !bit(x, i)) all = false;
    }
    parity ^= all ? 1 : 0;
  }
  return parity != 0;
}

inline std::vector<int> values(const MultilinearPoly& f) {
  std::vector<int> out;
  for (Point x = 0; x < (Point{1} << f.n_vars()); ++x) out.push_back(eval(f, x) ? 1 : 0);
  return out;
}

inline bool same_function(const MultilinearPoly& f, const MultilinearPoly& g) {
  return f.n_vars() == g.n_vars() && values(f) == values(g);
}

// |#{f = 0} - #{f = 1}| as a fraction of 2^n, returned as (numerator, 2^n).
inline std::pair<std::int64_t, std::int64_t> bias_counts(const MultilinearPoly& f) {
  std::int64_t zeros = 0;
  std::int64_t ones = 0;
  for (int v : values(f)) (v ? ones : zeros)++;
  return {zeros > ones ? zeros - ones : ones - zeros, zeros + ones};
}

// Unique multilinear representation recovered by solving for coefficients
// one subset at a time (c_S = f(1_S) + sum over proper subsets T of c_T).
inline MultilinearPoly interpolate(int n, const std::vector<int>& table) {
  std::vector<int> coeff(table.size(), 0);
  std::vector<Point> monomials;
  for (Point s = 0; s < table.size(); ++s) {
    int c = table[s];
    if (s != 0) {
      for (Point t = (s - 1) & s;; t = (t - 1) & s) {
        c ^= coeff[t];
        if (t == 0) break;
      }
    }
    coeff[s] = c;
  }
  for (Point s = 0; s < table.size(); ++s) {
    if (coeff[s]) monomials.push_back(s);
  }
  return MultilinearPoly::from_monomials(n, monomials);
}

}  // namespace loclab::oracle
