#pragma once

#include <optional>
#include <vector>

#include "loclab/caps.hpp"
#include "loclab/f2poly.hpp"

namespace loclab {

// A set of polynomials over shared variables, read as the equations f_i = 0.
// Constant-0 members are dropped; a constant-1 member throws UnsatisfiableSystem.
class PolySystem {
 public:
  explicit PolySystem(int n_vars = 0) : n_vars_(n_vars) {}
  PolySystem(int n_vars, const std::vector<MultilinearPoly>& polys);

  void add(const MultilinearPoly& f);

  int n_vars() const { return n_vars_; }
  const std::vector<MultilinearPoly>& polys() const { return polys_; }
  bool empty() const { return polys_.empty(); }

  // D: summed degree of the degree-1 members
  int linear_degree() const;
  // Delta: summed degree of the members of degree >= 2
  int nonlinear_degree() const;
  int total_degree() const { return linear_degree() + nonlinear_degree(); }

  bool is_solution(Point x) const;

 private:
  int n_vars_;
  std::vector<MultilinearPoly> polys_;
};

// One polynomial per line; blank lines and lines starting with '#' are skipped.
PolySystem parse_system(std::string_view text, int n_vars);
// Largest variable index mentioned in the text (0 if none).
int max_variable_index(std::string_view text);

// Ascending list of all common zeros.
std::vector<Point> common_solutions(const PolySystem& sys, const Caps& caps = default_caps());

struct CwCountResult {
  std::uint64_t count = 0;
  int exponent = 0;  // n - total degree
  bool applicable = true;  // total degree < n
  bool holds = true;
};

// Counts solutions against 2^(n - total degree). Throws PreconditionError if 0 is not a solution.
CwCountResult cw_count_check(const PolySystem& sys, const Caps& caps = default_caps());

enum class SearchStatus { Found, None, WeightLimit, Truncated };
const char* to_string(SearchStatus s);

struct MinWeightResult {
  SearchStatus status = SearchStatus::None;
  Point vector = 0;
  int weight = 0;
  int searched_weight = 0;  // every candidate of weight <= this was tested
  std::uint64_t candidates = 0;
};

// First nonzero common solution in order of (weight, lexicographic support),
// restricted to coordinates in `allowed` when given.
MinWeightResult min_weight_nontrivial_solution(const PolySystem& sys, std::optional<Point> allowed = std::nullopt,
                                               const Caps& caps = default_caps());

// 8*Delta + 8*D/log2(s/D) + 8, the middle term read as 0 when D = 0.
double low_weight_bound(int linear, int nonlinear, int support_size);

struct LowWeightResult {
  int min_weight = 0;
  Point witness = 0;
  double bound = 0;
  bool holds = true;
  // binom(n, <= floor(w/2)) <= 2^(D+Delta+1) * binom(n, <= floor(Delta/2)) with w = min_weight - 1
  bool technical_holds = true;
};

LowWeightResult low_weight_cw_check(const PolySystem& sys, const Caps& caps = default_caps());

struct SumsetResult {
  BigInt threshold;  // 2 * binom(n, <= floor(Delta/2))
  bool above_threshold = false;
  bool found = false;
  Point solution = 0;
  Point left = 0;
  Point right = 0;
};

// Looks for a nonzero a + a' (a, a' in A) solving the system.
SumsetResult sumset_solution_search(const PolySystem& sys, std::span<const Point> a);

struct ClpRankResult {
  std::size_t rank = 0;
  BigInt bound;  // 2 * binom(n, <= floor(r/2))
  bool holds = true;
};

// Rank of the 2^n x 2^n matrix M[x][y] = f(x + y).
ClpRankResult clp_rank_check(const MultilinearPoly& f, int r, const Caps& caps = default_caps());

}  // namespace loclab
