#include <random>

#include "doctest.h"
#include "loclab/error.hpp"
#include "loclab/subspace.hpp"
#include "oracles.hpp"

using namespace loclab;

namespace {

MultilinearPoly parity(int n) {
  MultilinearPoly f(n);
  for (int i = 0; i < n; ++i) f = f + MultilinearPoly::variable(n, i);
  return f;
}

void check_grow(const MultilinearPoly& f, int d, int r, const GrowResult& g) {
  REQUIRE_FALSE(g.truncated);
  // f itself, not the normalized 1 + f, is constant on the span
  REQUIRE(verify_monochromatic(f, 0, g.basis));
  REQUIRE(f.evaluate(0) == g.constant_value);
  REQUIRE(verify_d_local(g.basis, d));
  REQUIRE(f2_matrix_rank(std::span<const Point>(g.basis)) == g.basis.size());
  REQUIRE(g.trace.size() == g.basis.size());
  Point earlier_alphas = 0;
  for (std::size_t t = 0; t < g.trace.size(); ++t) {
    const auto& step = g.trace[t];
    REQUIRE(step.unique == static_cast<int>(t + 1));
    REQUIRE((step.chosen & earlier_alphas) == 0);
    REQUIRE(bit(step.chosen, step.alpha));
    REQUIRE((step.chosen & low_mask(step.alpha)) == 0);
    earlier_alphas |= Point{1} << step.alpha;
  }
  // nothing further qualifies: no allowed nonzero vector keeps f constant on the enlarged span
  const Point allowed = low_mask(f.n_vars()) & ~(g.unique | g.saturated);
  if (f.n_vars() <= 12) {
    for (Point b = 1; b < (Point{1} << f.n_vars()); ++b) {
      if ((b & ~allowed) != 0) continue;
      std::vector<Point> bigger = g.basis;
      bigger.push_back(b);
      if (f2_matrix_rank(std::span<const Point>(bigger)) < bigger.size()) continue;
      auto crit = derivative_criterion_check(f.evaluate(0) ? f + MultilinearPoly::constant(f.n_vars(), true) : f, 0,
                                             bigger, r);
      REQUIRE_FALSE(crit.lhs);
    }
  }
}

}  // namespace

TEST_CASE("derivative_closure") {
  auto f = parse_poly("x1*x2", 2);
  auto empty = derivative_closure(f, {}, 2);
  REQUIRE(empty.derivatives.size() == 1);
  CHECK(empty.derivatives[0] == f);

  std::vector<Point> two{0b01, 0b10};
  CHECK(derivative_closure(f, two, 2).derivatives.size() == 4);
  CHECK(derivative_closure(f, two, 1).derivatives.size() == 3);

  std::vector<Point> e1{0b01};
  auto c = derivative_closure(f, e1, 2);
  REQUIRE(c.derivatives.size() == 2);
  CHECK(c.derivatives[0] == f);
  CHECK(c.derivatives[1] == parse_poly("x2", 2));
}

TEST_CASE("derivative_criterion_check") {
  std::vector<Point> e1{0b1};
  auto zero = derivative_criterion_check(MultilinearPoly(3), 0, e1, 1);
  CHECK(zero.lhs);
  CHECK(zero.rhs);
  auto lit = derivative_criterion_check(parse_poly("x1", 3), 0, e1, 1);
  CHECK_FALSE(lit.lhs);
  CHECK_FALSE(lit.rhs);
  CHECK_THROWS_AS(derivative_criterion_check(parse_poly("x1*x2", 3), 0, e1, 1), InputError);

  std::mt19937_64 rng(12);
  int vanishing = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int r = static_cast<int>(rng() % 4);
    auto f = random_poly(n, r, rng());
    if (rng() % 3 == 0) f = MultilinearPoly::from_monomials(n, {f.monomials().begin(), f.monomials().begin() + static_cast<long>(f.size() / 3)});
    const Point x = rng() & low_mask(n);
    std::vector<Point> basis(static_cast<std::size_t>(rng() % 4));
    for (auto& b : basis) b = rng() & low_mask(n);
    auto res = derivative_criterion_check(f, x, basis, std::max(r, f.degree()));
    REQUIRE(res.agree());
    if (res.lhs) ++vanishing;
  }
  CHECK(vanishing > 0);
}

TEST_CASE("verify helpers") {
  std::vector<Point> e1{0b1};
  CHECK(verify_monochromatic(MultilinearPoly::constant(3, true), 0b101, e1));
  CHECK_FALSE(verify_monochromatic(parse_poly("x1", 3), 0, e1));
  std::vector<Point> units{0b001, 0b010, 0b100};
  CHECK(verify_d_local(units, 1));
  std::vector<Point> chain{parse_point("110", 3), parse_point("011", 3)};
  CHECK(verify_d_local(chain, 2));
  CHECK_FALSE(verify_d_local(chain, 1));
  CHECK(column_weights(chain, 3) == std::vector<int>{1, 2, 1});
}

TEST_CASE("grow_local_subspace examples") {
  auto zero = grow_local_subspace(MultilinearPoly(4), 1, 1);
  CHECK(zero.basis == std::vector<Point>{0b0001, 0b0010, 0b0100, 0b1000});
  check_grow(MultilinearPoly(4), 1, 1, zero);

  for (int n : {4, 6, 8, 10}) {
    auto g = grow_local_subspace(parity(n), 2, 1);
    CHECK(g.dimension() == n - 1);
    for (int i = 0; i + 1 < n; ++i) CHECK(g.basis[static_cast<std::size_t>(i)] == ((Point{3}) << i));
    check_grow(parity(n), 2, 1, g);
  }

  auto x1x2 = parse_poly("x1*x2", 4);
  auto g = grow_local_subspace(x1x2, 1, 2);
  CHECK(g.dimension() >= 3);
  CHECK_FALSE(g.constant_value);
  check_grow(x1x2, 1, 2, g);

  auto flipped = parse_poly("1 + x1*x2", 4);
  auto h = grow_local_subspace(flipped, 1, 2);
  CHECK(h.constant_value);
  CHECK(h.basis == g.basis);
  check_grow(flipped, 1, 2, h);

  CHECK_THROWS_AS(grow_local_subspace(x1x2, 0, 2), InputError);
  CHECK_THROWS_AS(grow_local_subspace(x1x2, 1, 1), InputError);
}

TEST_CASE("grow_local_subspace on random degree-2 corpora") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 11);
    const int d = 1 + static_cast<int>(rng() % 2);
    auto f = random_poly(n, 2, rng());
    auto g = grow_local_subspace(f, d, 2);
    check_grow(f, d, 2, g);
  }
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_poly(16, 2, rng());
    auto g = grow_local_subspace(f, 2, 2);
    REQUIRE(verify_monochromatic(f, 0, g.basis));
    REQUIRE(verify_d_local(g.basis, 2));
    REQUIRE(g.dimension() >= 2);
  }
}

TEST_CASE("grow reports truncation") {
  Caps small;
  small.max_combinations = 3;
  auto g = grow_local_subspace(parity(6), 2, 1, small);
  CHECK(g.truncated);
  CHECK(verify_monochromatic(parity(6), 0, g.basis));
}

TEST_CASE("exhaustive_best_dimension") {
  CHECK(exhaustive_best_dimension(MultilinearPoly(3), 1) == 3);
  CHECK(exhaustive_best_dimension(parity(4), 2) == 3);
  CHECK(exhaustive_best_dimension(parse_poly("x1", 4), 1) == 3);
  CHECK(exhaustive_best_dimension(parse_poly("x1", 8), 1, {7, 1'000'000}) == 7);
  CHECK(exhaustive_best_dimension(parse_poly("x1", 8), 1) == 4);
  CHECK_THROWS_AS(exhaustive_best_dimension(MultilinearPoly(9), 1), CapExceeded);
  CHECK_THROWS_AS(exhaustive_best_dimension(parity(6), 1, {5, 3}), CapExceeded);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_poly(6, 2, rng());
    auto best = exhaustive_best_dimension(f, 2, {6, 50'000'000});
    auto g = grow_local_subspace(f, 2, 2);
    REQUIRE(best >= g.dimension());
  }
}
