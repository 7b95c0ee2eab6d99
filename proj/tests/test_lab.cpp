#include <random>
#include <set>

#include "doctest.h"
#include "loclab/error.hpp"
#include "loclab/lab.hpp"
#include "oracles.hpp"

using namespace loclab;

TEST_CASE("family size and enumeration") {
  CHECK(family_size({2, 2, 1, {}}) == 1);
  CHECK(family_size({3, 2, 1, {}}) == 24);
  CHECK(family_size({6, 4, 1, {}}) == 3840);
  CHECK(family_size({4, 2, 2, 1}) == 6 * 8 * 8);

  std::uint64_t count = 0;
  enumerate_nobf_family({2, 2, 1, {}}, [&](std::uint64_t, const NobfSource& s) {
    CHECK(s.good_positions == std::vector<int>{0, 1});
    ++count;
  });
  CHECK(count == 1);

  // every descriptor is distinct and valid, and the set of distributions covers
  // every d-local source with supports of exactly d' good bits
  NobfFamily fam({3, 2, 1, {}});
  REQUIRE(fam.size() == 24);
  std::set<std::string> seen;
  for (std::uint64_t i = 0; i < fam.size(); ++i) {
    auto s = fam.member(i);
    s.validate();
    CHECK(s.locality() <= 1);
    std::string key;
    for (int g : s.good_positions) key += std::to_string(g);
    key += "|" + std::to_string(s.bad[0].function.support[0]);
    for (auto t : s.bad[0].function.table) key += std::to_string(t);
    seen.insert(key);
  }
  CHECK(seen.size() == 24);

  Caps tiny;
  tiny.family = 100;
  CHECK_THROWS_WITH_AS(NobfFamily({6, 4, 1, {}}, tiny), doctest::Contains("3840"), CapExceeded);
  CHECK_THROWS_AS(NobfFamily({3, 4, 1, {}}), InputError);
}

TEST_CASE("family generators agree with member sources") {
  NobfFamily fam({5, 3, 2, 2});
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto i = rng() % fam.size();
    auto s = fam.member(i);
    auto gens = fam.generators(i);
    for (Point a = 0; a < 8; ++a) {
      Point x = 0;
      for (int p = 0; p < 5; ++p) {
        if (gens[static_cast<std::size_t>(p)].evaluate(a)) x |= Point{1} << p;
      }
      REQUIRE(x == s.evaluate(a));
    }
  }
}

TEST_CASE("extractor_census") {
  auto lit = extractor_census(parse_poly("x1", 2), {2, 2, 1, {}});
  CHECK(lit.max_bias == 0);
  auto xorf = extractor_census(parse_poly("x1 + x2", 2), {2, 1, 1, {}});
  CHECK(xorf.max_bias == 1);
  CHECK(xorf.sources == 8);

  FamilySpec spec{6, 4, 1, {}};
  NobfFamily fam(spec);
  std::mt19937_64 rng(10);
  for (int t = 0; t < 3; ++t) {
    auto f = random_poly(6, 2, rng());
    auto c = extractor_census(f, spec, 3);
    Rational worst = -1;
    std::uint64_t where = 0;
    for (std::uint64_t i = 0; i < fam.size(); ++i) {
      auto b = bias_under(f, exact_distribution(fam.member(i)));
      if (b > worst) {
        worst = b;
        where = i;
      }
    }
    CHECK(c.max_bias == worst);
    CHECK(c.worst_index == where);
    CHECK(c.worst == fam.member(where));
    CHECK(extractor_census(f, spec, 1).max_bias == c.max_bias);
  }
}

TEST_CASE("extractor_search") {
  FamilySpec two{2, 2, 1, {}};
  auto vacuous = extractor_search(two, 1, 20, 1, Rational(1));
  CHECK(vacuous.success_fraction() == 1);
  auto all = extractor_search_exhaustive(two, 1, Rational(0));
  CHECK(all.trials == 8);
  CHECK(all.success_fraction() == Rational(6, 8));

  auto a = extractor_search({4, 3, 1, {}}, 2, 30, 77, Rational(1, 4), 1);
  auto b = extractor_search({4, 3, 1, {}}, 2, 30, 77, Rational(1, 4), 4);
  CHECK(a.max_biases == b.max_biases);
  CHECK(a.best == b.best);
}

TEST_CASE("extractor search golden (n=6, k=4, d=1, r=2, 200 trials, seed 12)") {
  auto s = extractor_search({6, 4, 1, {}}, 2, 200, 12, Rational(1, 4), 4);
  CHECK(s.best_bias == Rational(1, 2));
  CHECK(s.best_trial == 0);
  CHECK(s.successes == 172);
}

TEST_CASE("disperser census via hitting") {
  FamilySpec spec{4, 2, 2, 2};
  auto lit = disperser_census_via_hitting(parse_poly("x1", 4), {4, 4, 1, 1});
  CHECK(lit.all_hit);
  auto one = disperser_census_via_hitting(MultilinearPoly::constant(4, true), spec);
  CHECK_FALSE(one.all_hit);
  CHECK(one.failing_index == 0);
  CHECK_THROWS_AS(disperser_census_via_hitting(parse_poly("x1", 4), {4, 2, 2, {}}), InputError);

  std::mt19937_64 rng(21);
  int hits = 0;
  for (int t = 0; t < 40; ++t) {
    FamilySpec small{4, 3, 1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 2)};
    auto f = random_poly(4, 2, rng());
    auto h = disperser_census_via_hitting(f, small);
    if (!h.all_hit) continue;
    ++hits;
    NobfFamily fam(small);
    for (std::uint64_t i = 0; i < fam.size(); ++i) {
      auto dist = exact_distribution(fam.member(i));
      REQUIRE(bias_under(f, dist) < 1);
    }
  }
  CHECK(hits > 0);
}

TEST_CASE("census below one half implies disperser") {
  std::mt19937_64 rng(4);
  FamilySpec spec{5, 3, 1, {}};
  NobfFamily fam(spec);
  for (int t = 0; t < 10; ++t) {
    auto f = random_poly(5, 2, rng());
    if (extractor_census(f, spec).max_bias >= Rational(1, 2)) continue;
    for (std::uint64_t i = 0; i < fam.size(); ++i) {
      auto s = fam.member(i);
      std::set<bool> values;
      for (Point a = 0; a < 8; ++a) values.insert(f.evaluate(s.evaluate(a)));
      REQUIRE(values.size() == 2);
    }
  }
}

TEST_CASE("hitting_lemma_check") {
  auto v = [](const char* s, int k) { return parse_poly(s, k); };
  {
    std::vector<MultilinearPoly> a{v("x1", 3)};
    std::vector<MultilinearPoly> zero{MultilinearPoly(3)};
    CHECK(hitting_lemma_check(v("x1", 1), a, zero, 1) == HittingVerdict::Holds);
    std::vector<MultilinearPoly> b{v("x1*x2*x3", 3)};
    CHECK(hitting_lemma_check(v("x1", 1), a, b, 2) == HittingVerdict::AMissesDegree);
    std::vector<MultilinearPoly> low{v("x2", 3)};
    CHECK(hitting_lemma_check(v("x1", 1), a, low, 1) == HittingVerdict::BTooLow);
  }
  std::mt19937_64 rng(500);
  int accepted = 0;
  for (int trial = 0; trial < 20000 && accepted < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int k = 1 + static_cast<int>(rng() % 6);
    const int r = 1 + static_cast<int>(rng() % 3);
    auto f = random_poly(n, r, rng());
    std::vector<MultilinearPoly> a;
    std::vector<MultilinearPoly> b;
    for (int i = 0; i < n; ++i) {
      a.push_back(random_poly(k, 1 + static_cast<int>(rng() % 2), rng()));
      auto [low, high] = split_at_degree(random_poly(k, k, rng()), r);
      b.push_back(high);
    }
    auto verdict = hitting_lemma_check(f, a, b, r);
    if (verdict == HittingVerdict::AMissesDegree) continue;
    REQUIRE(verdict == HittingVerdict::Holds);
    ++accepted;
  }
  CHECK(accepted >= 100);
}

TEST_CASE("quantiles") {
  std::vector<Rational> v;
  for (int i = 1; i <= 20; ++i) v.emplace_back(i);
  CHECK(quantile(v, 0.95) == 19);
  CHECK(quantile(v, 0.5) == 10);
  CHECK(quantile(v, 1.0) == 20);
  CHECK(quantile(v, 0.01) == 1);
  CHECK_THROWS_AS(quantile({}, 0.5), InputError);
}

TEST_CASE("random_bias_survey") {
  auto zero = random_bias_survey(6, 0, 20, 1);
  for (const auto& b : zero.values) CHECK(b == 1);
  auto lin = random_bias_survey(12, 1, 50, 2);
  for (std::size_t i = 0; i < lin.values.size(); ++i) {
    auto f = random_poly(12, 1, lin.poly_seeds[i]);
    CHECK(lin.values[i] == (f.degree() >= 1 ? Rational(0) : Rational(1)));
  }
  auto a = random_bias_survey(8, 2, 40, 5, 1);
  auto b = random_bias_survey(8, 2, 40, 5, 3);
  CHECK(a.values == b.values);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    auto [num, den] = oracle::bias_counts(random_poly(8, 2, a.poly_seeds[i]));
    CHECK(a.values[i] == Rational(num, den));
  }
}

TEST_CASE("bias survey golden (n=12, r=2, 1000 trials, seed 13)") {
  auto rep = random_bias_survey(12, 2, 1000, 13, 4);
  CHECK(rep.values.size() == 1000);
  CHECK(quantile(rep.values, 0.95) == Rational(1, 32));
  CHECK(quantile(rep.values, 0.5) == Rational(1, 64));
  CHECK(quantile(rep.values, 0.95) <= Rational(1, 10));
}

TEST_CASE("correlation_survey") {
  auto zero = correlation_survey(TruthTable(7), 2, 30, 4);
  auto plain = random_bias_survey(7, 2, 30, 4);
  CHECK(zero.values == plain.values);

  auto maj = correlation_survey(majority_table(9), 2, 500, 9, 4);
  CHECK(quantile(maj.values, 0.5) == Rational(1, 32));
  CHECK(quantile(maj.values, 0.95) == Rational(11, 128));
  CHECK(quantile(maj.values, 1.0) == Rational(5, 32));
}

TEST_CASE("Reed-Muller codes") {
  auto rm41 = rm_code(4, 1);
  CHECK(rm41.codewords.size() == 32);
  CHECK(rm41.block_length() == 16);
  CHECK(rm_min_distance(rm41) == 8);
  auto rm22 = rm_code(2, 2);
  CHECK(rm22.codewords.size() == 16);
  std::set<std::vector<std::uint64_t>> distinct;
  for (const auto& w : rm22.codewords) distinct.insert({w.words().begin(), w.words().end()});
  CHECK(distinct.size() == 16);
  auto rm42 = rm_code(4, 2);
  CHECK(rm42.codewords.size() == 2048);
  CHECK(rm_min_distance(rm42) == 4);

  // pairwise oracle on a smaller code
  auto rm31 = rm_code(3, 1);
  std::size_t pair_min = 100;
  for (std::size_t i = 0; i < rm31.codewords.size(); ++i) {
    for (std::size_t j = i + 1; j < rm31.codewords.size(); ++j) {
      pair_min = std::min(pair_min, hamming_distance(rm31.codewords[i], rm31.codewords[j]));
    }
  }
  CHECK(pair_min == rm_min_distance(rm31));

  for (int m = 1; m <= 5; ++m) {
    for (int r = 0; r <= m && binomial_sum_u64(m, r) <= 16; ++r) {
      auto c = rm_code(m, r);
      REQUIRE(c.codewords.size() == (std::size_t{1} << binomial_sum_u64(m, r)));
      REQUIRE(rm_min_distance(c) == (std::size_t{1} << (m - r)));
    }
  }
  // codewords are truth tables of their polynomials
  for (std::uint64_t c = 0; c < 32; ++c) CHECK(truth_table(poly_from_coefficients(4, 1, c)).bits() == rm41.codewords[c]);
  CHECK_THROWS_AS(rm_code(6, 3, Caps{.family = 1000}), CapExceeded);
}

TEST_CASE("list sizes and the Hamming bound") {
  auto rm41 = rm_code(4, 1);
  CHECK(rm_list_size(rm41, rm41.codewords[5], 0) == 1);
  CHECK(rm_list_size(rm41, rm41.codewords[5], 16) == 32);
  CHECK_THROWS_AS(rm_list_size(rm41, rm41.codewords[5], 17), InputError);
  std::mt19937_64 rng(41);
  std::uint64_t worst = 0;
  for (int t = 0; t < 50; ++t) {
    BitVector center(16);
    for (std::size_t i = 0; i < 16; ++i) center.set(i, rng() & 1);
    auto count = rm_list_size(rm41, center, 3);
    REQUIRE(count <= 1);
    worst = std::max(worst, count);
  }
  // exact list size L(radius) over all 2^16 centers
  std::vector<std::uint64_t> list(17, 0);
  for (Point x = 0; x < (Point{1} << 16); ++x) {
    BitVector center(16);
    center.words()[0] = x;
    std::vector<std::uint64_t> at(17, 0);
    for (const auto& w : rm41.codewords) ++at[hamming_distance(w, center)];
    std::uint64_t running = 0;
    for (unsigned radius = 0; radius <= 16; ++radius) {
      running += at[radius];
      list[radius] = std::max(list[radius], running);
    }
  }
  CHECK(list[3] == 1);
  CHECK(list[16] == 32);
  for (unsigned radius = 0; radius <= 16; ++radius) CHECK(hamming_bound_holds(32, 16, radius, list[radius]));
  CHECK(hamming_bound_holds(32, 16, 3, 1));
}

TEST_CASE("affine_extractor_census") {
  auto c = affine_extractor_census(MultilinearPoly::constant(5, true), 1, 2);
  CHECK(c.max_bias == 1);
  auto lit = affine_extractor_census(parse_poly("x1", 5), 1, 2, {false, 50, 3});
  CHECK(lit.scanned == 50);
  TruthTable x1 = truth_table(parse_poly("x1", 5));
  AffineSubspace sub{5, 0, {0b00011, 0b01100}};
  CHECK(subspace_bias(x1, sub) == 0);

  std::mt19937_64 rng(14);
  for (int t = 0; t < 30; ++t) {
    auto f = random_poly(6, 2, rng());
    auto r = affine_extractor_census(f, 2, 2, {false, 20, rng()});
    REQUIRE(r.worst.locality() <= 2);
    REQUIRE(r.worst.dim() == 2);
    REQUIRE(bias(restrict_to_subspace(f, r.worst)) == r.max_bias);
  }
  // exhaustive scan visits each (basis, coset representative) pair
  auto small = affine_extractor_census(MultilinearPoly(3), 1, 1);
  CHECK(small.scanned == 7 * 4);
}

TEST_CASE("affine census golden (n=8, d=1, k=3, poly seed 8)") {
  auto f = random_poly(8, 2, 8);
  auto r = affine_extractor_census(f, 1, 3);
  CHECK(r.max_bias == 1);
  CHECK(r.scanned == 248640);
}
