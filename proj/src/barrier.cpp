#include "loclab/barrier.hpp"

#include <algorithm>
#include <map>

#include "loclab/error.hpp"

namespace loclab {

int clique_length(int k) { return k + k * (k - 1) / 2; }

int edge_index(int k, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= k || i == j) throw InputError("edge needs two distinct vertices below k");
  // edges (a, b) with a < i come first: sum_{a<i} (k - 1 - a)
  return k + i * (2 * k - i - 1) / 2 + (j - i - 1);
}

CliqueSet clique_set(int k) {
  if (k < 1 || clique_length(k) > 64) throw InputError("clique set needs k >= 1 and k + C(k,2) <= 64");
  CliqueSet q{k, clique_length(k), {}};
  for (Point v = 0; v < (Point{1} << k); ++v) {
    Point x = v;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        if (bit(v, i) && bit(v, j)) x |= Point{1} << edge_index(k, i, j);
      }
    }
    q.points.push_back(x);
  }
  std::sort(q.points.begin(), q.points.end());
  return q;
}

bool clique_membership(Point x, int n, int k) {
  if (k < 0 || n != clique_length(k)) {
    throw InputError("point length " + std::to_string(n) + " is not k + C(k,2) for k = " + std::to_string(k));
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (bit(x, edge_index(k, i, j)) != (bit(x, i) && bit(x, j))) return false;
    }
  }
  return true;
}

SidonResult sidon_check(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::map<Point, int> unordered;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) ++unordered[pts[i] ^ pts[j]];
  }
  SidonResult r;
  for (const auto& [z, c] : unordered) {
    r.max_ordered = std::max(r.max_ordered, 2 * c);
    if (c > 1 && !r.violating) {
      r.is_sidon = false;
      r.violating = z;
    }
  }
  return r;
}

SubspaceIndex::SubspaceIndex(const AffineSubspace& sub) : shift(sub.shift) {
  for (Point v : sub.basis) {
    for (Point row : rows) v = std::min(v, v ^ row);
    if (v != 0) rows.push_back(v);
    // keep rows sorted by descending leading bit so one pass reduces
    std::sort(rows.begin(), rows.end(), std::greater<>());
  }
}

bool SubspaceIndex::contains(Point x) const {
  Point v = x ^ shift;
  for (Point row : rows) v = std::min(v, v ^ row);
  return v == 0;
}

bool evasive_fraction_ok(std::uint64_t count, int t) {
  // count^2 <= 2^(t+3)
  const BigInt c(count);
  return c * c <= (BigInt(1) << (t + 3));
}

std::vector<Point> random_full_rank_basis(std::mt19937_64& rng, int n, int t) {
  if (t < 0 || t > n) throw InputError("subspace dimension must lie in [0, n]");
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Point> basis(static_cast<std::size_t>(t));
    for (auto& v : basis) v = rng() & low_mask(n);
    if (f2_matrix_rank(std::span<const Point>(basis)) == static_cast<std::size_t>(t)) return basis;
  }
  throw CapExceeded("no full-rank basis after 64 draws");
}

namespace {

void scan_one(const CliqueSet& q, const AffineSubspace& sub, EvasivenessResult& res) {
  ++res.scanned;
  SubspaceIndex index(sub);
  std::vector<Point> inside;
  for (Point x : q.points) {
    if (index.contains(x)) inside.push_back(x);
  }
  const auto c = static_cast<std::uint64_t>(inside.size());
  const Rational frac(static_cast<std::int64_t>(c), BigInt(1) << res.t);
  if (frac > res.max_fraction) {
    res.max_fraction = frac;
    res.worst = sub;
  }
  if (!evasive_fraction_ok(c, res.t)) res.holds = false;
  if (!sidon_check(inside).is_sidon) res.all_sidon = false;
  if (BigInt(c) * (c - (c > 0 ? 1 : 0)) / 2 > (BigInt(1) << res.t) - 1) res.pair_bound_holds = false;
}

// Every t-dimensional subspace once, as reduced echelon bases: row i has a 1 at
// pivot p_i, zeros at other pivots, and free bits above p_i.
template <class Visit>
void for_each_subspace(int n, int t, std::uint64_t cap, Visit&& visit) {
  std::uint64_t visited = 0;
  for_each_subset_of_size(low_mask(n), t, [&](Point pivots) {
    std::vector<int> piv;
    for (int i = 0; i < n; ++i) {
      if (bit(pivots, i)) piv.push_back(i);
    }
    std::vector<Point> free(piv.size());
    int total = 0;
    for (std::size_t r = 0; r < piv.size(); ++r) {
      free[r] = low_mask(n) & ~pivots & ~low_mask(piv[r] + 1);
      total += weight(free[r]);
    }
    if (total >= 40) throw CapExceeded("too many subspaces to enumerate");
    for (Point assign = 0; assign < (Point{1} << total); ++assign) {
      if (++visited > cap) throw CapExceeded("subspace enumeration exceeded the search-node cap");
      std::vector<Point> basis;
      int used = 0;
      for (std::size_t r = 0; r < piv.size(); ++r) {
        Point v = Point{1} << piv[r];
        for (int i = 0; i < n; ++i) {
          if (bit(free[r], i) && bit(assign, used++)) v |= Point{1} << i;
        }
        basis.push_back(v);
      }
      visit(basis, pivots);
    }
    return true;
  });
}

}  // namespace

EvasivenessResult evasiveness_scan(int k, int t, const EvasivenessOptions& options, const Caps& caps) {
  const auto q = clique_set(k);
  if (t < 0 || t > q.n) throw InputError("subspace dimension must lie in [0, n]");
  EvasivenessResult res;
  res.k = k;
  res.t = t;
  res.max_fraction = -1;
  if (options.exhaustive) {
    std::uint64_t nodes = 0;
    for_each_subspace(q.n, t, caps.search_nodes, [&](const std::vector<Point>& basis, Point pivots) {
      if (!options.affine) {
        scan_one(q, AffineSubspace{q.n, 0, basis}, res);
        return;
      }
      const Point free = low_mask(q.n) & ~pivots;
      Point s = 0;
      do {
        if (++nodes > caps.search_nodes) throw CapExceeded("affine scan exceeded the search-node cap");
        scan_one(q, AffineSubspace{q.n, s, basis}, res);
        s = (s - free) & free;
      } while (s != 0);
    });
    return res;
  }
  std::mt19937_64 rng(options.seed);
  for (std::uint64_t i = 0; i < options.trials; ++i) {
    auto basis = random_full_rank_basis(rng, q.n, t);
    const Point shift = options.affine ? (rng() & low_mask(q.n)) : 0;
    scan_one(q, AffineSubspace{q.n, shift, std::move(basis)}, res);
  }
  return res;
}

MixtureBound affine_mixture_distance_bound(int k, std::span<const AffineSubspace> components,
                                           std::span<const Rational> weights, const Caps& caps) {
  const auto q = clique_set(k);
  if (components.empty()) throw InputError("mixture needs at least one component");
  if (!weights.empty() && weights.size() != components.size()) throw InputError("one weight per component required");
  MixtureBound out;
  Rational worst = 0;
  for (const auto& sub : components) {
    if (sub.n != q.n) throw InputError("component length differs from the clique source");
    sub.validate();
    if (sub.dim() > caps.dist_bits) throw CapExceeded("component too large to enumerate");
    SubspaceIndex index(sub);
    if (index.dim() != sub.dim()) throw InputError("component basis is not independent");
    std::int64_t c = 0;
    for (Point x : q.points) c += index.contains(x) ? 1 : 0;
    Rational frac(c, BigInt(1) << sub.dim());
    worst = std::max(worst, frac);
    out.fractions.push_back(frac);
  }
  out.bound = Rational(1) - worst;
  if (!weights.empty()) {
    ConvexCombination combo;
    for (std::size_t i = 0; i < components.size(); ++i) combo.components.push_back({weights[i], components[i]});
    out.exact_distance = statistical_distance(exact_distribution(clique_source(k), caps), mixture(combo, caps));
  }
  return out;
}

}  // namespace loclab
