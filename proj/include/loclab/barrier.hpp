#pragma once

#include <optional>
#include <random>
#include <vector>

#include "loclab/caps.hpp"
#include "loclab/rational.hpp"
#include "loclab/sources.hpp"

namespace loclab {

// Vertex bits 0..k-1, then one bit per edge (i < j) in lexicographic order.
int clique_length(int k);
int edge_index(int k, int i, int j);

// The 2^k cliques: each vertex set together with all edges inside it. Ascending.
struct CliqueSet {
  int k = 0;
  int n = 0;
  std::vector<Point> points;
};

CliqueSet clique_set(int k);
bool clique_membership(Point x, int n, int k);

struct SidonResult {
  bool is_sidon = true;  // every nonzero sum has <= 2 ordered representations
  int max_ordered = 0;
  std::optional<Point> violating;  // smallest sum with more
};

SidonResult sidon_check(std::span<const Point> points);

// Membership in shift + span(basis).
class SubspaceIndex {
 public:
  explicit SubspaceIndex(const AffineSubspace& sub);
  bool contains(Point x) const;
  int dim() const { return static_cast<int>(rows.size()); }

 private:
  Point shift;
  std::vector<Point> rows;  // reduced, distinct leading bits
};

struct EvasivenessOptions {
  bool exhaustive = false;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  bool affine = false;  // random shift in random mode, every coset in exhaustive mode
};

struct EvasivenessResult {
  int k = 0;
  int t = 0;
  Rational max_fraction;
  AffineSubspace worst;
  bool holds = true;             // every |Q n S| / 2^t <= 2^(-(t-3)/2)
  bool all_sidon = true;         // Q n S is a Sidon set every time
  bool pair_bound_holds = true;  // c(c-1)/2 <= 2^t - 1 every time
  std::uint64_t scanned = 0;
};

// c / 2^t <= 2^(-(t-3)/2), decided exactly as c^2 <= 2^(t+3).
bool evasive_fraction_ok(std::uint64_t count, int t);

EvasivenessResult evasiveness_scan(int k, int t, const EvasivenessOptions& options = {},
                                   const Caps& caps = default_caps());

// A uniformly random t x n matrix, redrawn until it has rank t.
std::vector<Point> random_full_rank_basis(std::mt19937_64& rng, int n, int t);

struct MixtureBound {
  Rational bound;  // 1 - max_i |Q n S_i| / |S_i|
  std::vector<Rational> fractions;
  std::optional<Rational> exact_distance;  // when weights are supplied
};

// Lower bound on the distance between the clique source and any mixture of the
// given affine sources; with weights, also the exact distance from that mixture.
MixtureBound affine_mixture_distance_bound(int k, std::span<const AffineSubspace> components,
                                           std::span<const Rational> weights = {},
                                           const Caps& caps = default_caps());

}  // namespace loclab
