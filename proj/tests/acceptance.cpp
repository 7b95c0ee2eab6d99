// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "loclab/barrier.hpp"
#include "loclab/cw.hpp"
#include "loclab/lab.hpp"
#include "loclab/parallel.hpp"
#include "loclab/reduction.hpp"
#include "loclab/subspace.hpp"
#include "nobf_checker.hpp"
#include "random_sources.hpp"
#include "random_systems.hpp"

using namespace loclab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Shared by criteria 6 and 14.
struct Decomposition {
  LocalSource source;
  std::vector<WeightedNobf> components;
};
std::vector<Decomposition> g_decompositions;

std::vector<PolySystem> cw_corpus() {
  std::mt19937_64 rng(101);
  std::vector<PolySystem> out;
  for (int i = 0; i < 120; ++i) {
    const int n = 2 + i % 11;
    out.push_back(testing::random_system(rng, n, 3));
  }
  return out;
}

Outcome c1_classical_cw() {
  const auto start = Clock::now();
  int applicable = 0;
  for (const auto& sys : cw_corpus()) {
    auto r = cw_count_check(sys);
    if (!r.applicable) continue;
    ++applicable;
    if (!r.holds) return {false, fmt("count %llu below 2^%d", static_cast<unsigned long long>(r.count), r.exponent)};
  }
  const double t = seconds_since(start);
  return {applicable >= 100 && t < 60, fmt("%d systems, %.2fs", applicable, t)};
}

Outcome c2_low_weight_cw() {
  int checked = 0;
  for (const auto& sys : cw_corpus()) {
    if (sys.linear_degree() + sys.nonlinear_degree() >= sys.n_vars()) continue;
    auto r = low_weight_cw_check(sys);
    ++checked;
    if (!r.holds) return {false, fmt("weight %d above bound %.3f", r.min_weight, r.bound)};
  }
  return {checked > 0, fmt("%d systems", checked)};
}

Outcome c3_clp_rank() {
  std::mt19937_64 rng(103);
  double slowest = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const int r = static_cast<int>(rng() % 5);
    auto f = random_poly(n, r, rng());
    const auto start = Clock::now();
    auto res = clp_rank_check(f, r);
    slowest = std::max(slowest, seconds_since(start));
    if (!res.holds) return {false, fmt("rank %zu over bound at n=%d r=%d", res.rank, n, r)};
  }
  return {slowest < 5, fmt("200 polynomials, slowest %.3fs", slowest)};
}

Outcome c4_derivative_criterion() {
  std::mt19937_64 rng(104);
  int vanishing = 0;
  for (int i = 0; i < 500; ++i) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int r = static_cast<int>(rng() % 4);
    auto f = random_poly(n, r, rng());
    // Sparse polynomials make the vanishing side occur often enough to matter.
    if (rng() % 2 == 0) {
      std::vector<Point> keep;
      for (Point m : f.monomials()) {
        if (rng() % 4 == 0) keep.push_back(m);
      }
      f = MultilinearPoly::from_monomials(n, keep);
    }
    const Point x = rng() & low_mask(n);
    std::vector<Point> basis(static_cast<std::size_t>(rng() % 4));
    for (auto& b : basis) b = rng() & low_mask(n);
    auto res = derivative_criterion_check(f, x, basis, r);
    if (!res.agree()) return {false, fmt("disagreement at instance %d", i)};
    if (res.lhs) ++vanishing;
  }
  return {true, fmt("500 instances, %d constant on the coset", vanishing)};
}

Outcome c5_subspace() {
  const auto check = [](const MultilinearPoly& f, int d, const GrowResult& g) {
    return verify_monochromatic(f, 0, g.basis) && verify_d_local(g.basis, d) &&
           f2_matrix_rank(std::span<const Point>(g.basis)) == g.basis.size();
  };
  for (int n : {6, 8, 10}) {
    MultilinearPoly parity(n);
    for (int i = 0; i < n; ++i) parity = parity + MultilinearPoly::variable(n, i);
    auto g = grow_local_subspace(parity, 2, 1);
    if (g.dimension() != n - 1 || !check(parity, 2, g)) {
      return {false, fmt("parity n=%d gave dimension %d", n, g.dimension())};
    }
  }
  std::mt19937_64 rng(105);
  int smallest = 16;
  for (int i = 0; i < 100; ++i) {
    auto f = random_poly(16, 2, rng());
    auto g = grow_local_subspace(f, 2, 2);
    if (g.truncated || !check(f, 2, g)) return {false, fmt("verification failed on polynomial %d", i)};
    smallest = std::min(smallest, g.dimension());
  }
  return {smallest >= 2, fmt("parity n-1 for n=6,8,10; random n=16 min dimension %d", smallest)};
}

Outcome c6_reduction() {
  std::mt19937_64 rng(106);
  int positive = 0;
  std::size_t leaves = 0;
  for (int i = 0; i < 50; ++i) {
    const int m = 2 + static_cast<int>(rng() % 7);
    const int n = 2 + static_cast<int>(rng() % 7);
    auto s = testing::random_local_source(rng, m, n, 2);
    const int target = 1 + static_cast<int>(rng() % 3);

    auto full = local_to_nobf(s, target);
    if (verify_decomposition(s, to_combination(full.components)) != 0) {
      return {false, fmt("source %d: untruncated mixture differs", i)};
    }
    for (const auto& leaf : full.tree.leaves()) {
      ++leaves;
      auto why = testing::check_nobf_form(exact_distribution(leaf.source), leaf.source.good_positions, s.locality(),
                                          false);
      if (!why.empty()) return {false, fmt("source %d: leaf %s: %s", i, leaf.path.c_str(), why.c_str())};
    }
    g_decompositions.push_back({s, full.components});

    auto cut = local_to_nobf(s, target, LocalToNobfOptions{true});
    auto distance = verify_decomposition(s, to_combination(cut.components));
    if (!leq_pow2_neg(distance, cut.guarantee.k_prime)) {
      return {false, fmt("source %d: truncated distance %s above 2^-%s", i, to_string(distance).c_str(),
                         to_string(cut.guarantee.k_prime).c_str())};
    }
    if (distance > 0) ++positive;
    g_decompositions.push_back({s, cut.components});
  }
  return {true, fmt("50 sources, %zu leaves, %d truncations with positive distance", leaves, positive)};
}

Outcome c7_debias() {
  std::mt19937_64 rng(107);
  for (int i = 0; i < 50; ++i) {
    const int k = 1 + static_cast<int>(rng() % 8);
    auto s = testing::random_nobf(rng, k + static_cast<int>(rng() % 3), k, 2, true);
    auto r = debias_nobf(s);
    auto dist = statistical_distance(mixture(to_combination(r.components)), exact_distribution(s));
    if (dist != 0) return {false, fmt("source %d: distance %s", i, to_string(dist).c_str())};
    Rational low{0};
    for (const auto& c : r.components) {
      if (Rational(c.source.k()) < r.guarantee.k_prime) low += c.weight;
    }
    if (!leq_pow2_neg(low, r.guarantee.k_prime)) {
      return {false, fmt("source %d: low mass %s", i, to_string(low).c_str())};
    }
  }
  return {true, "50 sources reconstructed exactly"};
}

Outcome c8_hitting() {
  std::mt19937_64 rng(108);
  int accepted = 0;
  int drawn = 0;
  while (accepted < 500 && drawn < 200000) {
    ++drawn;
    const int n = 1 + static_cast<int>(rng() % 6);
    const int k = 1 + static_cast<int>(rng() % 6);
    const int r = 1 + static_cast<int>(rng() % 3);
    auto f = random_poly(n, r, rng());
    std::vector<MultilinearPoly> a;
    std::vector<MultilinearPoly> b;
    for (int i = 0; i < n; ++i) {
      a.push_back(random_poly(k, 1 + static_cast<int>(rng() % 2), rng()));
      b.push_back(split_at_degree(random_poly(k, k, rng()), r).second);
    }
    auto verdict = hitting_lemma_check(f, a, b, r);
    if (verdict == HittingVerdict::AMissesDegree) continue;
    if (verdict != HittingVerdict::Holds) return {false, fmt("instance %d: %s", drawn, to_string(verdict))};
    ++accepted;
  }
  return {accepted == 500, fmt("%d instances from %d draws", accepted, drawn)};
}

Outcome c9_reed_muller() {
  const auto start = Clock::now();
  auto c1 = rm_code(4, 1);
  auto c2 = rm_code(4, 2);
  const auto d1 = rm_min_distance(c1);
  const auto d2 = rm_min_distance(c2);
  if (c1.codewords.size() != 32 || d1 != 8 || c2.codewords.size() != 2048 || d2 != 4) {
    return {false, fmt("sizes %zu/%zu distances %zu/%zu", c1.codewords.size(), c2.codewords.size(),
                       static_cast<std::size_t>(d1), static_cast<std::size_t>(d2))};
  }
  std::mt19937_64 rng(109);
  std::uint64_t largest = 0;
  for (int i = 0; i < 50; ++i) {
    BitVector center(16);
    const auto bits = rng();
    for (std::size_t j = 0; j < 16; ++j) center.set(j, ((bits >> j) & 1) != 0);
    largest = std::max(largest, rm_list_size(c1, center, 3));
  }
  const double t = seconds_since(start);
  return {largest <= 1 && t < 10,
          fmt("RM(4,1) 32/8, RM(4,2) 2048/4, largest list %llu, %.2fs", static_cast<unsigned long long>(largest), t)};
}

Outcome c10_sidon() {
  double at_six = 0;
  for (int k = 1; k <= 6; ++k) {
    const auto start = Clock::now();
    auto q = clique_set(k);
    auto r = sidon_check(q.points);
    if (k == 6) at_six = seconds_since(start);
    if (!r.is_sidon || r.max_ordered > 2) return {false, fmt("k=%d has %d ordered representations", k, r.max_ordered)};
  }
  return {at_six < 30, fmt("k=1..6, %.3fs at k=6", at_six)};
}

Outcome c11_evasiveness() {
  auto r = evasiveness_scan(5, 8, {false, 1000, 111, true});
  return {r.holds && r.pair_bound_holds && r.scanned == 1000,
          fmt("%llu affine subspaces, max fraction %s", static_cast<unsigned long long>(r.scanned),
              to_string(r.max_fraction).c_str())};
}

Outcome c12_extractor_golden() {
  auto s = extractor_search({6, 4, 1, {}}, 2, 200, 12, Rational(1, 4), default_workers());
  const bool frozen = s.best_bias == Rational(1, 2) && s.best_trial == 0 && s.successes == 172;
  return {frozen && s.best_bias <= Rational(1, 2),
          fmt("seed 12: best max bias %s at trial %llu (frozen 1/2 at 0), %llu of 200 within 1/2", to_string(s.best_bias).c_str(),
              static_cast<unsigned long long>(s.best_trial), static_cast<unsigned long long>(s.successes))};
}

Outcome c13_survey_golden() {
  auto rep = random_bias_survey(12, 2, 1000, 13, default_workers());
  const auto q = quantile(rep.values, 0.95);
  return {q == Rational(1, 32), fmt("seed 13: 95th percentile %s (frozen 1/32)", to_string(q).c_str())};
}

Outcome c14_lifting() {
  if (g_decompositions.empty()) return {false, "no decompositions from criterion 6"};
  std::mt19937_64 rng(114);
  int pairs = 0;
  for (const auto& d : g_decompositions) {
    const int n = d.source.n();
    const auto combined = mixture(to_combination(d.components));
    for (int i = 0; i < 5; ++i) {
      auto f = random_poly(n, 1 + static_cast<int>(rng() % 3), rng());
      Rational worst{0};
      for (const auto& c : d.components) worst = std::max(worst, bias_under(f, exact_distribution(c.source)));
      if (bias_under(f, combined) > worst) return {false, "mixture bias above component maximum"};
      ++pairs;
    }
  }
  return {true, fmt("%d (decomposition, polynomial) pairs", pairs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"classical Chevalley-Warning count", c1_classical_cw},
      {"low-weight common solutions", c2_low_weight_cw},
      {"rank of f(x + y)", c3_clp_rank},
      {"derivative criterion", c4_derivative_criterion},
      {"local subspace growth", c5_subspace},
      {"local source to NOBF exactness", c6_reduction},
      {"debias reconstruction", c7_debias},
      {"hitting degree under perturbation", c8_hitting},
      {"Reed-Muller parameters", c9_reed_muller},
      {"clique set is Sidon", c10_sidon},
      {"clique set evades subspaces", c11_evasiveness},
      {"extractor search golden", c12_extractor_golden},
      {"bias survey golden", c13_survey_golden},
      {"mixture bias lifting", c14_lifting},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
