#include <random>

#include "doctest.h"
#include "loclab/barrier.hpp"
#include "loclab/error.hpp"

using namespace loclab;

TEST_CASE("clique set layout") {
  CHECK(clique_length(3) == 6);
  CHECK(edge_index(3, 0, 1) == 3);
  CHECK(edge_index(3, 0, 2) == 4);
  CHECK(edge_index(3, 1, 2) == 5);
  CHECK(edge_index(4, 2, 3) == 9);
  for (int k = 1; k <= 5; ++k) {
    auto q = clique_set(k);
    CHECK(q.points.size() == (std::size_t{1} << k));
    auto dist = exact_distribution(clique_source(k));
    CHECK(dist.support() == q.points);
    for (Point x : q.points) CHECK(clique_membership(x, q.n, k));
  }
}

TEST_CASE("clique_membership") {
  CHECK(clique_membership(0, 6, 3));
  CHECK(clique_membership(low_mask(6), 6, 3));
  CHECK_FALSE(clique_membership(parse_point("110000", 6), 6, 3));
  CHECK(clique_membership(parse_point("110100", 6), 6, 3));
  CHECK_FALSE(clique_membership(parse_point("000100", 6), 6, 3));
  CHECK_THROWS_AS(clique_membership(0, 7, 3), InputError);
  // brute force: exactly 2^k members among all points
  int members = 0;
  for (Point x = 0; x < 1024; ++x) members += clique_membership(x, 10, 4) ? 1 : 0;
  CHECK(members == 16);
}

TEST_CASE("sidon_check") {
  std::vector<Point> none;
  CHECK(sidon_check(none).is_sidon);
  std::vector<Point> one{5};
  CHECK(sidon_check(one).is_sidon);
  auto q3 = clique_set(3);
  auto r = sidon_check(q3.points);
  CHECK(r.is_sidon);
  CHECK(r.max_ordered == 2);
  std::vector<Point> plane{0, 0b01, 0b10, 0b11};
  auto p = sidon_check(plane);
  CHECK_FALSE(p.is_sidon);
  CHECK(p.max_ordered == 4);
  CHECK(p.violating == Point{0b01});
  for (int k = 1; k <= 6; ++k) CHECK(sidon_check(clique_set(k).points).is_sidon);
}

TEST_CASE("SubspaceIndex agrees with enumeration") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const int t = static_cast<int>(rng() % (n + 1));
    AffineSubspace sub{n, rng() & low_mask(n), random_full_rank_basis(rng, n, t)};
    SubspaceIndex index(sub);
    std::vector<bool> in(std::size_t{1} << n, false);
    for (Point c = 0; c < (Point{1} << t); ++c) in[sub.point(c)] = true;
    for (Point x = 0; x < (Point{1} << n); ++x) REQUIRE(index.contains(x) == in[x]);
  }
}

TEST_CASE("evasive fraction comparison is exact") {
  CHECK(evasive_fraction_ok(8, 3));
  CHECK_FALSE(evasive_fraction_ok(9, 3));
  // t = 8: bound 2^-2.5 * 256 = 45.25...
  CHECK(evasive_fraction_ok(45, 8));
  CHECK_FALSE(evasive_fraction_ok(46, 8));
}

TEST_CASE("evasiveness_scan") {
  for (int t = 0; t <= 3; ++t) {
    auto r = evasiveness_scan(3, t, {true, 0, 0, true});
    CHECK(r.holds);
    CHECK(r.all_sidon);
    CHECK(r.pair_bound_holds);
  }
  // Gaussian binomial [6 choose 2]_2 = 651 subspaces
  CHECK(evasiveness_scan(3, 2, {true, 0, 0, false}).scanned == 651);

  // span of the four vertex coordinates for k = 4: only the empty set and singletons are cliques
  auto q4 = clique_set(4);
  AffineSubspace vertices{10, 0, {1, 2, 4, 8}};
  SubspaceIndex idx(vertices);
  int inside = 0;
  for (Point x : q4.points) inside += idx.contains(x) ? 1 : 0;
  CHECK(inside == 5);

  for (int t : {4, 5, 6}) {
    auto lin = evasiveness_scan(4, t, {false, 300, static_cast<std::uint64_t>(t), false});
    auto aff = evasiveness_scan(4, t, {false, 300, static_cast<std::uint64_t>(t), true});
    for (const auto& r : {lin, aff}) {
      CHECK(r.scanned == 300);
      CHECK(r.holds);
      CHECK(r.all_sidon);
      CHECK(r.pair_bound_holds);
    }
  }
  auto a = evasiveness_scan(4, 5, {false, 50, 9, true});
  auto b = evasiveness_scan(4, 5, {false, 50, 9, true});
  CHECK(a.max_fraction == b.max_fraction);
  CHECK(a.worst == b.worst);
}

TEST_CASE("affine_mixture_distance_bound") {
  const int n = clique_length(3);
  std::vector<AffineSubspace> whole{AffineSubspace{n, 0, {1, 2, 4, 8, 16, 32}}};
  auto w = affine_mixture_distance_bound(3, whole);
  CHECK(w.bound == Rational(1) - Rational(8, 64));

  std::vector<AffineSubspace> point{AffineSubspace{n, clique_set(3).points[3], {}}};
  CHECK(affine_mixture_distance_bound(3, point).bound == 0);

  std::mt19937_64 rng(20);
  std::vector<AffineSubspace> comps;
  std::vector<Rational> weights;
  const int n4 = clique_length(4);
  for (int i = 0; i < 20; ++i) {
    comps.push_back(AffineSubspace{n4, rng() & low_mask(n4), random_full_rank_basis(rng, n4, 5)});
    weights.emplace_back(1, 20);
  }
  auto m = affine_mixture_distance_bound(4, comps, weights);
  CHECK(m.bound >= Rational(1, 2));
  REQUIRE(m.exact_distance);
  CHECK(m.bound <= *m.exact_distance);

  for (int trial = 0; trial < 30; ++trial) {
    std::vector<AffineSubspace> cs;
    std::vector<Rational> ws;
    const int count = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < count; ++i) {
      cs.push_back(AffineSubspace{6, rng() & low_mask(6), random_full_rank_basis(rng, 6, static_cast<int>(rng() % 4))});
      ws.emplace_back(1, count);
    }
    auto r = affine_mixture_distance_bound(3, cs, ws);
    REQUIRE(r.bound <= *r.exact_distance);
  }
  std::vector<AffineSubspace> wrong{AffineSubspace{5, 0, {}}};
  CHECK_THROWS_AS(affine_mixture_distance_bound(3, wrong), InputError);
}
