#include "loclab/subspace.hpp"

#include <algorithm>
#include <stdexcept>

#include "loclab/error.hpp"

namespace loclab {

namespace {

// sum_{i=0}^{k} binom(n, i), zero for k < 0
std::uint64_t binomial_sum_or_zero(int n, int k) { return k < 0 ? 0 : binomial_sum_u64(n, k); }

Point combine(std::span<const Point> basis, Point index_mask) {
  Point v = 0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (bit(index_mask, static_cast<int>(i))) v ^= basis[i];
  }
  return v;
}

}  // namespace

DerivativeClosure derivative_closure(const MultilinearPoly& f, std::span<const Point> basis, int r, const Caps& caps) {
  const int t = static_cast<int>(basis.size());
  if (t > 63) throw CapExceeded("basis too large for a derivative closure");
  if (binomial_sum_or_zero(t, std::min(r, t)) > caps.max_combinations) throw CapExceeded("too many derivative subsets");
  DerivativeClosure out;
  out.subsets = subsets_up_to(low_mask(t), std::max(r, 0));
  for (Point s : out.subsets) {
    std::vector<Point> dirs;
    for (int i = 0; i < t; ++i) {
      if (bit(s, i)) dirs.push_back(basis[static_cast<std::size_t>(i)]);
    }
    out.derivatives.push_back(directional_derivative(f, dirs));
  }
  return out;
}

CriterionResult derivative_criterion_check(const MultilinearPoly& f, Point x, std::span<const Point> basis, int r) {
  if (f.degree() > r) throw InputError("polynomial degree exceeds r");
  if (basis.size() > 20) throw CapExceeded("2^|B| combinations exceed the cap");
  CriterionResult res;
  res.lhs = true;
  for (Point m = 0; m < (Point{1} << basis.size()); ++m) {
    if (f.evaluate(x ^ combine(basis, m))) {
      res.lhs = false;
      break;
    }
  }
  res.rhs = true;
  for (const auto& g : derivative_closure(f, basis, r).derivatives) {
    if (g.evaluate(x)) {
      res.rhs = false;
      break;
    }
  }
  return res;
}

std::vector<int> column_weights(std::span<const Point> basis, int n) {
  std::vector<int> w(static_cast<std::size_t>(n), 0);
  for (Point v : basis) {
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] += bit(v, i) ? 1 : 0;
  }
  return w;
}

bool verify_d_local(std::span<const Point> basis, int d) {
  for (int c : column_weights(basis, 64)) {
    if (c > d) return false;
  }
  return true;
}

bool verify_monochromatic(const MultilinearPoly& f, Point shift, std::span<const Point> basis, const Caps& caps) {
  if (static_cast<int>(basis.size()) > caps.dist_bits) throw CapExceeded("2^dim points exceed the distribution cap");
  const bool value = f.evaluate(shift);
  for (Point m = 1; m < (Point{1} << basis.size()); ++m) {
    if (f.evaluate(shift ^ combine(basis, m)) != value) return false;
  }
  return true;
}

GrowResult grow_local_subspace(const MultilinearPoly& f, int d, int r, const Caps& caps) {
  if (d < 1) throw InputError("locality d must be at least 1");
  if (f.degree() > r) throw InputError("degree bound r is below deg(f)");
  const int n = f.n_vars();
  GrowResult res;
  res.n = n;
  res.constant_value = f.evaluate(0);
  const MultilinearPoly g = res.constant_value ? f + MultilinearPoly::constant(n, true) : f;
  std::vector<int> columns(static_cast<std::size_t>(n), 0);

  while (true) {
    PolySystem system(n);
    for (const auto& p : derivative_closure(g, res.basis, r, caps).derivatives) system.add(p);
    const int t = res.dimension();
    if (static_cast<std::uint64_t>(system.linear_degree()) > static_cast<std::uint64_t>(r) * binomial_sum_or_zero(t, r - 1) ||
        static_cast<std::uint64_t>(system.nonlinear_degree()) > static_cast<std::uint64_t>(r) * binomial_sum_or_zero(t, r - 2)) {
      throw std::logic_error("derivative system exceeds its degree bounds");
    }
    const Point allowed = low_mask(n) & ~(res.unique | res.saturated);
    auto found = min_weight_nontrivial_solution(system, allowed, caps);
    if (found.status == SearchStatus::None) break;
    if (found.status != SearchStatus::Found) {
      res.truncated = true;
      break;
    }
    GrowthStep step;
    step.chosen = found.vector;
    step.weight = found.weight;
    step.alpha = std::countr_zero(found.vector);
    step.linear_degree = system.linear_degree();
    step.nonlinear_degree = system.nonlinear_degree();
    res.basis.push_back(found.vector);
    res.unique |= Point{1} << step.alpha;
    for (int i = 0; i < n; ++i) {
      if (bit(found.vector, i) && ++columns[static_cast<std::size_t>(i)] >= d) res.saturated |= Point{1} << i;
    }
    step.unique = weight(res.unique);
    step.saturated = weight(res.saturated);
    step.column_weights = columns;
    res.trace.push_back(std::move(step));
  }
  if (f2_matrix_rank(std::span<const Point>(res.basis)) != res.basis.size()) {
    throw std::logic_error("grown basis is not linearly independent");
  }
  return res;
}

int exhaustive_best_dimension(const MultilinearPoly& f, int d, const BestDimensionLimits& limits) {
  const int n = f.n_vars();
  if (n > 8) throw CapExceeded("exhaustive subspace search supports n <= 8");
  const bool value = f.evaluate(0);
  std::vector<Point> candidates;
  for (Point v = 1; v < (Point{1} << n); ++v) {
    if (f.evaluate(v) == value) candidates.push_back(v);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](Point a, Point b) { return weight(a) < weight(b); });

  int best = 0;
  std::uint64_t nodes = 0;
  std::vector<Point> span{0};
  std::vector<int> columns(static_cast<std::size_t>(n), 0);

  auto dfs = [&](auto&& self, std::size_t start, int dim) -> void {
    best = std::max(best, dim);
    if (best >= limits.max_dim) return;
    for (std::size_t i = start; i < candidates.size() && best < limits.max_dim; ++i) {
      if (dim + 1 + static_cast<int>(candidates.size() - i - 1) <= best) return;
      if (++nodes > limits.max_nodes) throw CapExceeded("exhaustive subspace search exceeded its node limit");
      const Point b = candidates[i];
      bool ok = true;
      for (int c = 0; c < n && ok; ++c) {
        if (bit(b, c) && columns[static_cast<std::size_t>(c)] >= d) ok = false;
      }
      if (!ok || std::find(span.begin(), span.end(), b) != span.end()) continue;
      for (Point v : span) {
        if (f.evaluate(v ^ b) != value) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const std::size_t old = span.size();
      for (std::size_t j = 0; j < old; ++j) span.push_back(span[j] ^ b);
      for (int c = 0; c < n; ++c) columns[static_cast<std::size_t>(c)] += bit(b, c) ? 1 : 0;
      self(self, i + 1, dim + 1);
      for (int c = 0; c < n; ++c) columns[static_cast<std::size_t>(c)] -= bit(b, c) ? 1 : 0;
      span.resize(old);
    }
  };
  dfs(dfs, 0, 0);
  return best;
}

}  // namespace loclab
