#include "loclab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "loclab/error.hpp"
#include "loclab/parallel.hpp"

namespace loclab {

namespace {

std::uint64_t checked_u64(const BigInt& v, const std::string& what, std::uint64_t cap) {
  if (v > cap) throw CapExceeded(what + " has " + v.str() + " members, cap is " + std::to_string(cap));
  return v.convert_to<std::uint64_t>();
}

int function_degree(const FamilySpec& spec) {
  const int dp = spec.support_size();
  return spec.r ? std::min(*spec.r, dp) : dp;
}

Point lift_mask(Point local, Point support) {
  Point out = 0;
  int l = 0;
  for (int i = 0; i < 64 && local >> l; ++i) {
    if (!bit(support, i)) continue;
    if (bit(local, l)) out |= Point{1} << i;
    ++l;
  }
  return out;
}

}  // namespace

BigInt family_size(const FamilySpec& spec) {
  const int dp = spec.support_size();
  const unsigned monos = spec.r ? static_cast<unsigned>(binomial_sum_u64(dp, std::min(*spec.r, dp))) : (1U << dp);
  const BigInt per_bad = binomial(static_cast<unsigned>(spec.k), static_cast<unsigned>(dp)) * (BigInt(1) << monos);
  return binomial(static_cast<unsigned>(spec.n), static_cast<unsigned>(spec.k)) *
         boost::multiprecision::pow(per_bad, static_cast<unsigned>(spec.n - spec.k));
}

NobfFamily::NobfFamily(const FamilySpec& spec, const Caps& caps) : spec_(spec) {
  if (spec.n < 1 || spec.n > 64 || spec.k < 0 || spec.k > spec.n || spec.d < 1 || (spec.r && *spec.r < 0)) {
    throw InputError("family needs 0 <= k <= n <= 64, d >= 1, r >= 0");
  }
  const BigInt total = family_size(spec);
  size_ = checked_u64(total, "NOBF family", caps.family);
  for_each_subset_of_size(low_mask(spec.n), spec.k, [&](Point g) {
    good_sets.push_back(g);
    return true;
  });
  const int dp = spec.support_size();
  for_each_subset_of_size(low_mask(spec.k), dp, [&](Point s) {
    supports.push_back(s);
    return true;
  });
  const int rr = function_degree(spec);
  const std::uint64_t monos = binomial_sum_u64(dp, rr);
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << monos); ++c) functions.push_back(poly_from_coefficients(dp, rr, c));
  per_good = size_ / good_sets.size();
}

NobfFamily::Decoded NobfFamily::decode(std::uint64_t index) const {
  if (index >= size_) throw InputError("family index out of range");
  Decoded out;
  out.good = good_sets[index / per_good];
  std::uint64_t rest = index % per_good;
  const std::uint64_t base = supports.size() * functions.size();
  out.digits.resize(static_cast<std::size_t>(spec_.n - spec_.k));
  for (auto it = out.digits.rbegin(); it != out.digits.rend(); ++it) {
    const std::uint64_t digit = rest % base;
    rest /= base;
    *it = {digit / functions.size(), digit % functions.size()};
  }
  return out;
}

NobfSource NobfFamily::member(std::uint64_t index) const {
  const auto dec = decode(index);
  NobfSource s;
  s.n = spec_.n;
  std::size_t next = 0;
  for (int pos = 0; pos < spec_.n; ++pos) {
    if (bit(dec.good, pos)) {
      s.good_positions.push_back(pos);
      continue;
    }
    const auto [si, fi] = dec.digits[next++];
    Junta j;
    for (int o = 0; o < spec_.k; ++o) {
      if (bit(supports[si], o)) j.support.push_back(o);
    }
    for (Point a = 0; a < (Point{1} << j.support.size()); ++a) j.table.push_back(functions[fi].evaluate(a) ? 1 : 0);
    s.bad.push_back({pos, std::move(j)});
  }
  s.biases.resize(s.good_positions.size());
  return s;
}

std::vector<MultilinearPoly> NobfFamily::generators(std::uint64_t index) const {
  const auto dec = decode(index);
  std::vector<MultilinearPoly> out;
  std::size_t next = 0;
  int ordinal = 0;
  for (int pos = 0; pos < spec_.n; ++pos) {
    if (bit(dec.good, pos)) {
      out.push_back(MultilinearPoly::variable(spec_.k, ordinal++));
      continue;
    }
    const auto [si, fi] = dec.digits[next++];
    std::vector<Point> monos;
    for (Point m : functions[fi].monomials()) monos.push_back(lift_mask(m, supports[si]));
    out.push_back(MultilinearPoly::from_monomials(spec_.k, std::move(monos)));
  }
  return out;
}

void enumerate_nobf_family(const FamilySpec& spec, const std::function<void(std::uint64_t, const NobfSource&)>& visit,
                           const Caps& caps) {
  NobfFamily family(spec, caps);
  for (std::uint64_t i = 0; i < family.size(); ++i) visit(i, family.member(i));
}

Rational nobf_bias(const TruthTable& f, const NobfSource& source) {
  if (f.n_vars() != source.n) throw InputError("function and source lengths differ");
  std::int64_t diff = 0;
  const Point count = Point{1} << source.k();
  for (Point a = 0; a < count; ++a) diff += f.get(source.evaluate(a)) ? -1 : 1;
  return Rational(diff < 0 ? -diff : diff, static_cast<std::int64_t>(count));
}

CensusResult extractor_census(const MultilinearPoly& f, const FamilySpec& spec, int workers, const Caps& caps) {
  if (f.n_vars() != spec.n) throw InputError("polynomial and family lengths differ");
  NobfFamily family(spec, caps);
  const auto table = truth_table(f, caps);
  struct Best {
    Rational bias{-1};
    std::uint64_t index = 0;
  };
  std::vector<Best> best(static_cast<std::size_t>(std::max(1, workers)));
  parallel_chunks(family.size(), workers, [&](std::uint64_t begin, std::uint64_t end, std::size_t c) {
    for (std::uint64_t i = begin; i < end; ++i) {
      auto b = nobf_bias(table, family.member(i));
      if (b > best[c].bias) best[c] = {b, i};
    }
  });
  CensusResult out;
  out.max_bias = -1;
  for (const auto& b : best) {
    if (b.bias > out.max_bias) {
      out.max_bias = b.bias;
      out.worst_index = b.index;
    }
  }
  out.worst = family.member(out.worst_index);
  out.sources = family.size();
  return out;
}

std::vector<std::uint64_t> trial_seeds(std::uint64_t seed, std::uint64_t trials) {
  std::mt19937_64 gen(seed);
  std::vector<std::uint64_t> out(trials);
  for (auto& s : out) s = gen();
  return out;
}

namespace {

SearchResult search_over(const FamilySpec& spec, const std::vector<MultilinearPoly>& polys, const Rational& eps,
                         int workers, const Caps& caps) {
  SearchResult out;
  out.trials = polys.size();
  out.max_biases.resize(polys.size());
  NobfFamily check(spec, caps);  // fail fast on caps
  (void)check;
  parallel_chunks(polys.size(), workers, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
    for (std::uint64_t i = begin; i < end; ++i) out.max_biases[i] = extractor_census(polys[i], spec, 1, caps).max_bias;
  });
  out.best_bias = 2;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (out.max_biases[i] <= 2 * eps) ++out.successes;
    if (out.max_biases[i] < out.best_bias) {
      out.best_bias = out.max_biases[i];
      out.best = polys[i];
      out.best_trial = i;
    }
  }
  return out;
}

}  // namespace

SearchResult extractor_search(const FamilySpec& spec, int r, std::uint64_t trials, std::uint64_t seed,
                              const Rational& eps, int workers, const Caps& caps) {
  std::vector<MultilinearPoly> polys;
  for (auto s : trial_seeds(seed, trials)) polys.push_back(random_poly(spec.n, r, s));
  return search_over(spec, polys, eps, workers, caps);
}

SearchResult extractor_search_exhaustive(const FamilySpec& spec, int r, const Rational& eps, int workers,
                                         const Caps& caps) {
  const std::uint64_t monos = binomial_sum_u64(spec.n, std::min(r, spec.n));
  if (monos >= 63 || (std::uint64_t{1} << monos) > caps.family) {
    throw CapExceeded("2^" + std::to_string(monos) + " polynomials exceed the family cap");
  }
  std::vector<MultilinearPoly> polys;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << monos); ++c) polys.push_back(poly_from_coefficients(spec.n, r, c));
  return search_over(spec, polys, eps, workers, caps);
}

MultilinearPoly poly_from_coefficients(int n, int r, std::uint64_t coefficients) {
  std::vector<Point> monos;
  std::uint64_t j = 0;
  for (int size = 0; size <= std::min(r, n); ++size) {
    for_each_subset_of_size(low_mask(n), size, [&](Point m) {
      if ((coefficients >> j) & 1U) monos.push_back(m);
      ++j;
      return j < 64;
    });
  }
  if (j < 64 && (coefficients >> j) != 0) throw InputError("coefficient vector has bits beyond the monomial count");
  return MultilinearPoly::from_monomials(n, std::move(monos));
}

HittingCensus disperser_census_via_hitting(const MultilinearPoly& f, const FamilySpec& spec, const Caps& caps) {
  if (!spec.r || *spec.r < 1) throw InputError("hitting census needs a degree bound r >= 1");
  if (f.n_vars() != spec.n) throw InputError("polynomial and family lengths differ");
  NobfFamily family(spec, caps);
  HittingCensus out;
  for (std::uint64_t i = 0; i < family.size(); ++i) {
    ++out.tuples;
    auto gens = family.generators(i);
    auto composed = substitute(f, gens, caps);
    bool hit = false;
    for (int rp = 1; rp <= *spec.r && !hit; ++rp) hit = hits_degree(composed, rp);
    if (!hit) {
      out.all_hit = false;
      out.failing_index = i;
      out.failing_tuple = std::move(gens);
      break;
    }
  }
  return out;
}

const char* to_string(HittingVerdict v) {
  switch (v) {
    case HittingVerdict::Holds: return "holds";
    case HittingVerdict::Fails: return "fails";
    case HittingVerdict::AMissesDegree: return "precondition: f(a) misses degree r";
    case HittingVerdict::BTooLow: return "precondition: some b_i has a monomial of size <= r";
  }
  return "?";
}

HittingVerdict hitting_lemma_check(const MultilinearPoly& f, std::span<const MultilinearPoly> a,
                                   std::span<const MultilinearPoly> b, int r, const Caps& caps) {
  if (a.size() != static_cast<std::size_t>(f.n_vars()) || b.size() != a.size()) {
    throw InputError("need one a_i and one b_i per variable of f");
  }
  for (const auto& bi : b) {
    if (hits_degree_at_most(bi, r)) return HittingVerdict::BTooLow;
  }
  if (!hits_degree(substitute(f, a, caps), r)) return HittingVerdict::AMissesDegree;
  std::vector<MultilinearPoly> sum;
  for (std::size_t i = 0; i < a.size(); ++i) sum.push_back(a[i] + b[i]);
  return hits_degree(substitute(f, sum, caps), r) ? HittingVerdict::Holds : HittingVerdict::Fails;
}

Rational quantile(std::vector<Rational> values, double p) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  if (p <= 0 || p > 1) throw InputError("quantile level must lie in (0, 1]");
  std::sort(values.begin(), values.end());
  // ceil(p N) with p read to six decimals
  const std::uint64_t ppm = static_cast<std::uint64_t>(std::llround(p * 1e6));
  const std::uint64_t rank = (ppm * values.size() + 999'999) / 1'000'000;
  return values[static_cast<std::size_t>(std::max<std::uint64_t>(rank, 1) - 1)];
}

std::vector<Quantile> standard_quantiles(const std::vector<Rational>& values) {
  std::vector<Quantile> out;
  for (double p : {0.5, 0.9, 0.95, 0.99, 1.0}) out.push_back({p, quantile(values, p)});
  return out;
}

namespace {

SurveyReport survey(const std::string& kind, int n, int r, std::uint64_t trials, std::uint64_t seed, int workers,
                    const Caps& caps, const std::function<Rational(const MultilinearPoly&)>& measure) {
  if (n > caps.table_vars) throw CapExceeded("2^" + std::to_string(n) + " table exceeds the table cap");
  if (trials == 0) throw InputError("survey needs at least one trial");
  SurveyReport rep;
  rep.kind = kind;
  rep.n = n;
  rep.r = r;
  rep.seed = seed;
  rep.poly_seeds = trial_seeds(seed, trials);
  rep.values.resize(trials);
  parallel_chunks(trials, workers, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
    for (std::uint64_t i = begin; i < end; ++i) rep.values[i] = measure(random_poly(n, r, rep.poly_seeds[i]));
  });
  rep.quantiles = standard_quantiles(rep.values);
  return rep;
}

}  // namespace

SurveyReport random_bias_survey(int n, int r, std::uint64_t trials, std::uint64_t seed, int workers, const Caps& caps) {
  return survey("bias", n, r, trials, seed, workers, caps,
                [&](const MultilinearPoly& f) { return bias(truth_table(f, caps)); });
}

SurveyReport correlation_survey(const TruthTable& g, int r, std::uint64_t trials, std::uint64_t seed, int workers,
                                const Caps& caps) {
  return survey("correlation", g.n_vars(), r, trials, seed, workers, caps,
                [&](const MultilinearPoly& f) { return correlation(truth_table(f, caps), g); });
}

TruthTable majority_table(int n) {
  TruthTable t(n);
  for (Point x = 0; x < t.length(); ++x) t.set(x, 2 * weight(x) > n);
  return t;
}

RmCode rm_code(int m, int r, const Caps& caps) {
  if (m < 0 || r < 0 || m > caps.table_vars) throw InputError("RM code needs 0 <= m <= table cap and r >= 0");
  const std::uint64_t dim = binomial_sum_u64(m, std::min(r, m));
  if (dim >= 63 || (std::uint64_t{1} << dim) > caps.family) {
    throw CapExceeded("RM(" + std::to_string(m) + "," + std::to_string(r) + ") has 2^" + std::to_string(dim) + " codewords");
  }
  std::vector<BitVector> rows;
  for (int size = 0; size <= std::min(r, m); ++size) {
    for_each_subset_of_size(low_mask(m), size, [&](Point mono) {
      BitVector row(std::size_t{1} << m);
      for (Point x = 0; x < (Point{1} << m); ++x) {
        if ((x & mono) == mono) row.set(x);
      }
      rows.push_back(std::move(row));
      return true;
    });
  }
  RmCode code{m, r, {}};
  code.codewords.reserve(std::size_t{1} << dim);
  code.codewords.emplace_back(std::size_t{1} << m);
  for (std::uint64_t c = 1; c < (std::uint64_t{1} << dim); ++c) {
    BitVector w = code.codewords[c & (c - 1)];
    w ^= rows[static_cast<std::size_t>(std::countr_zero(c))];
    code.codewords.push_back(std::move(w));
  }
  return code;
}

std::size_t rm_min_distance(const RmCode& code) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < code.codewords.size(); ++i) {
    const auto w = code.codewords[i].count();
    if (best == 0 || w < best) best = w;
  }
  return best;
}

std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw InputError("Hamming distance of words with different lengths");
  std::size_t d = 0;
  auto wa = a.words();
  auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return d;
}

std::uint64_t rm_list_size(const RmCode& code, const BitVector& center, std::size_t radius) {
  if (radius > code.block_length()) throw InputError("radius exceeds the block length");
  std::uint64_t count = 0;
  for (const auto& w : code.codewords) count += hamming_distance(w, center) <= radius ? 1 : 0;
  return count;
}

bool hamming_bound_holds(const BigInt& code_size, unsigned block_length, unsigned radius, std::uint64_t list_size) {
  return code_size * binomial_sum(block_length, radius) <= (BigInt(1) << block_length) * list_size;
}

Rational subspace_bias(const TruthTable& f, const AffineSubspace& sub) {
  std::int64_t diff = 0;
  const Point count = Point{1} << sub.dim();
  for (Point c = 0; c < count; ++c) diff += f.get(sub.point(c)) ? -1 : 1;
  return Rational(diff < 0 ? -diff : diff, static_cast<std::int64_t>(count));
}

AffineCensusResult affine_extractor_census(const MultilinearPoly& f, int d, int k, const AffineCensusOptions& options,
                                           const Caps& caps) {
  const int n = f.n_vars();
  if (d < 1 || k < 0 || k > n) throw InputError("affine census needs d >= 1 and 0 <= k <= n");
  const auto table = truth_table(f, caps);
  AffineCensusResult out;
  out.max_bias = -1;
  auto consider = [&](const AffineSubspace& sub) {
    ++out.scanned;
    auto b = subspace_bias(table, sub);
    if (b > out.max_bias) {
      out.max_bias = b;
      out.worst = sub;
    }
  };

  if (!options.exhaustive) {
    std::mt19937_64 rng(options.seed);
    for (std::uint64_t t = 0; t < options.trials; ++t) {
      AffineSubspace sub{n, rng() & low_mask(n), {}};
      std::vector<int> columns(static_cast<std::size_t>(n), 0);
      int attempts = 0;
      int restarts = 0;
      while (sub.dim() < k) {
        if (++attempts > 1000) {
          // an early dense vector can leave no room; start the basis over
          if (++restarts > 64) throw CapExceeded("could not sample a d-local basis");
          attempts = 0;
          sub.basis.clear();
          std::fill(columns.begin(), columns.end(), 0);
        }
        const Point v = rng() & low_mask(n);
        if (v == 0) continue;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) ok = !bit(v, i) || columns[static_cast<std::size_t>(i)] < d;
        if (!ok) continue;
        auto trial = sub.basis;
        trial.push_back(v);
        if (f2_matrix_rank(std::span<const Point>(trial)) != trial.size()) continue;
        sub.basis = std::move(trial);
        for (int i = 0; i < n; ++i) columns[static_cast<std::size_t>(i)] += bit(v, i) ? 1 : 0;
      }
      consider(sub);
    }
    return out;
  }

  if (n > 16) throw CapExceeded("exhaustive affine census supports n <= 16");
  std::uint64_t nodes = 0;
  std::vector<Point> basis;
  std::vector<Point> span{0};
  std::vector<int> columns(static_cast<std::size_t>(n), 0);
  auto dfs = [&](auto&& self, Point start) -> void {
    if (static_cast<int>(basis.size()) == k) {
      const auto form = affine_canonical_form(AffineSubspace{n, 0, basis});
      Point pivots = 0;
      for (int p : form.pivots) pivots |= Point{1} << p;
      const Point free = low_mask(n) & ~pivots;
      // all submasks of the free coordinates
      Point s = 0;
      do {
        if (++nodes > caps.search_nodes) throw CapExceeded("affine census exceeded the search-node cap");
        consider(AffineSubspace{n, s, basis});
        s = (s - free) & free;
      } while (s != 0);
      return;
    }
    for (Point v = start; v < (Point{1} << n); ++v) {
      if (++nodes > caps.search_nodes) throw CapExceeded("affine census exceeded the search-node cap");
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) ok = !bit(v, i) || columns[static_cast<std::size_t>(i)] < d;
      if (!ok || std::find(span.begin(), span.end(), v) != span.end()) continue;
      basis.push_back(v);
      const std::size_t old = span.size();
      for (std::size_t j = 0; j < old; ++j) span.push_back(span[j] ^ v);
      for (int i = 0; i < n; ++i) columns[static_cast<std::size_t>(i)] += bit(v, i) ? 1 : 0;
      self(self, v + 1);
      for (int i = 0; i < n; ++i) columns[static_cast<std::size_t>(i)] -= bit(v, i) ? 1 : 0;
      span.resize(old);
      basis.pop_back();
    }
  };
  dfs(dfs, 1);
  return out;
}

}  // namespace loclab
