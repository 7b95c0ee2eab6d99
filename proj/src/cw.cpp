#include "loclab/cw.hpp"

#include <cmath>
#include <algorithm>

#include "loclab/error.hpp"

namespace loclab {

PolySystem::PolySystem(int n_vars, const std::vector<MultilinearPoly>& polys) : n_vars_(n_vars) {
  for (const auto& f : polys) add(f);
}

void PolySystem::add(const MultilinearPoly& f) {
  if (f.n_vars() != n_vars_) throw InputError("polynomial has " + std::to_string(f.n_vars()) + " variables, system has " + std::to_string(n_vars_));
  if (f.is_zero()) return;
  if (f.is_constant()) throw UnsatisfiableSystem("system contains the constant 1");
  polys_.push_back(f);
}

int PolySystem::linear_degree() const {
  int total = 0;
  for (const auto& f : polys_) {
    if (f.degree() == 1) total += 1;
  }
  return total;
}

int PolySystem::nonlinear_degree() const {
  int total = 0;
  for (const auto& f : polys_) {
    if (f.degree() >= 2) total += f.degree();
  }
  return total;
}

bool PolySystem::is_solution(Point x) const {
  for (const auto& f : polys_) {
    if (f.evaluate(x)) return false;
  }
  return true;
}

PolySystem parse_system(std::string_view text, int n_vars) {
  PolySystem sys(n_vars);
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && line[first] != '#') sys.add(parse_poly(line, n_vars));
    start = end + 1;
  }
  return sys;
}

int max_variable_index(std::string_view text) {
  int best = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != 'x') continue;
    int v = 0;
    std::size_t j = i + 1;
    while (j < text.size() && text[j] >= '0' && text[j] <= '9') v = v * 10 + (text[j++] - '0');
    best = std::max(best, v);
  }
  return best;
}

std::vector<Point> common_solutions(const PolySystem& sys, const Caps& caps) {
  if (sys.n_vars() > caps.table_vars) throw CapExceeded("2^" + std::to_string(sys.n_vars()) + " points exceed the table cap");
  std::vector<Point> out;
  const Point end = Point{1} << sys.n_vars();
  for (Point x = 0; x < end; ++x) {
    if (sys.is_solution(x)) out.push_back(x);
  }
  return out;
}

CwCountResult cw_count_check(const PolySystem& sys, const Caps& caps) {
  if (!sys.is_solution(0)) throw PreconditionError("0 is not a common solution");
  CwCountResult r;
  r.count = common_solutions(sys, caps).size();
  r.exponent = sys.n_vars() - sys.total_degree();
  r.applicable = r.exponent > 0;
  r.holds = !r.applicable || r.count >= (std::uint64_t{1} << r.exponent);
  return r;
}

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::None: return "none";
    case SearchStatus::WeightLimit: return "weight-limit";
    case SearchStatus::Truncated: return "truncated";
  }
  return "?";
}

MinWeightResult min_weight_nontrivial_solution(const PolySystem& sys, std::optional<Point> allowed, const Caps& caps) {
  const Point universe = allowed.value_or(~Point{0}) & low_mask(sys.n_vars());
  const int top = weight(universe);
  MinWeightResult r;
  for (int w = 1; w <= top; ++w) {
    if (w > caps.max_weight) {
      r.status = SearchStatus::WeightLimit;
      return r;
    }
    bool truncated = false;
    for_each_subset_of_size(universe, w, [&](Point x) {
      if (++r.candidates > caps.max_combinations) {
        truncated = true;
        return false;
      }
      if (sys.is_solution(x)) {
        r.status = SearchStatus::Found;
        r.vector = x;
        r.weight = w;
        return false;
      }
      return true;
    });
    if (truncated) {
      r.status = SearchStatus::Truncated;
      return r;
    }
    if (r.status == SearchStatus::Found) {
      r.searched_weight = w;
      return r;
    }
    r.searched_weight = w;
  }
  r.status = SearchStatus::None;
  return r;
}

double low_weight_bound(int linear, int nonlinear, int support_size) {
  if (support_size < 1 || linear < 0 || nonlinear < 0) throw InputError("low_weight_bound needs s >= 1 and nonnegative degrees");
  double bound = 8.0 * nonlinear + 8.0;
  if (linear > 0) {
    if (support_size <= linear) throw InputError("low_weight_bound needs s > D when D > 0");
    bound += 8.0 * linear / std::log2(static_cast<double>(support_size) / linear);
  }
  return bound;
}

LowWeightResult low_weight_cw_check(const PolySystem& sys, const Caps& caps) {
  const int n = sys.n_vars();
  const int big_d = sys.linear_degree();
  const int delta = sys.nonlinear_degree();
  if (!sys.is_solution(0)) throw PreconditionError("0 is not a common solution");
  if (big_d + delta >= n) throw PreconditionError("D + Delta must be below n");
  if (n > caps.table_vars) throw CapExceeded("2^" + std::to_string(n) + " points exceed the table cap");
  Caps full = caps;
  full.max_weight = std::max(full.max_weight, n);
  auto found = min_weight_nontrivial_solution(sys, std::nullopt, full);
  if (found.status == SearchStatus::Truncated) throw CapExceeded("weight-ordered search hit the combination cap");
  LowWeightResult r;
  r.bound = low_weight_bound(big_d, delta, n);
  if (found.status != SearchStatus::Found) {
    // Cannot happen when D + Delta < n: there are at least two solutions.
    r.holds = false;
    r.technical_holds = false;
    return r;
  }
  r.min_weight = found.weight;
  r.witness = found.vector;
  r.holds = r.min_weight <= r.bound;
  const int w = r.min_weight - 1;
  BigInt lhs = binomial_sum(static_cast<unsigned>(n), static_cast<unsigned>(w / 2));
  BigInt rhs = (BigInt(1) << (big_d + delta + 1)) * binomial_sum(static_cast<unsigned>(n), static_cast<unsigned>(delta / 2));
  r.technical_holds = lhs <= rhs;
  return r;
}

SumsetResult sumset_solution_search(const PolySystem& sys, std::span<const Point> a) {
  if (!sys.is_solution(0)) throw PreconditionError("0 is not a common solution");
  for (Point x : a) {
    if (!sys.is_solution(x)) throw InputError("set member " + point_to_string(x, sys.n_vars()) + " is not a common solution");
  }
  std::vector<Point> pts(a.begin(), a.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  SumsetResult r;
  r.threshold = 2 * binomial_sum(static_cast<unsigned>(sys.n_vars()), static_cast<unsigned>(sys.nonlinear_degree() / 2));
  r.above_threshold = BigInt(pts.size()) > r.threshold;
  for (std::size_t i = 0; i < pts.size() && !r.found; ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      Point x = pts[i] ^ pts[j];
      if (sys.is_solution(x)) {
        r.found = true;
        r.solution = x;
        r.left = pts[i];
        r.right = pts[j];
        break;
      }
    }
  }
  return r;
}

ClpRankResult clp_rank_check(const MultilinearPoly& f, int r, const Caps& caps) {
  const int n = f.n_vars();
  if (f.degree() > r) throw InputError("polynomial degree " + std::to_string(f.degree()) + " exceeds r = " + std::to_string(r));
  if (2 * n > caps.table_vars) throw CapExceeded("2^" + std::to_string(n) + " x 2^" + std::to_string(n) + " matrix exceeds the table cap");
  auto table = truth_table(f, caps);
  const std::size_t size = std::size_t{1} << n;
  std::vector<BitVector> rows;
  rows.reserve(size);
  for (Point x = 0; x < size; ++x) {
    BitVector row(size);
    for (Point y = 0; y < size; ++y) {
      if (table.get(x ^ y)) row.set(y);
    }
    rows.push_back(std::move(row));
  }
  ClpRankResult out;
  out.rank = f2_matrix_rank(std::move(rows));
  out.bound = 2 * binomial_sum(static_cast<unsigned>(n), static_cast<unsigned>(std::max(r, 0) / 2));
  out.holds = BigInt(out.rank) <= out.bound;
  return out;
}

}  // namespace loclab
