#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "loclab/bits.hpp"
#include "loclab/caps.hpp"
#include "loclab/f2poly.hpp"
#include "loclab/rational.hpp"

namespace loclab {

// A boolean function of a few input bits given by its table. Entry j of the
// table is the value on the assignment whose bit l is input support[l].
struct Junta {
  std::vector<int> support;
  std::vector<std::uint8_t> table;

  bool evaluate(Point inputs) const;
  bool is_constant() const;
  // Drops support entries the table does not depend on.
  Junta essential() const;
  // Fixes input `index` (a member of the support) to `value`.
  Junta restrict(int index, bool value) const;

  friend bool operator==(const Junta&, const Junta&) = default;
  friend auto operator<=>(const Junta&, const Junta&) = default;
};

Junta constant_junta(bool value);

// X = g(U_m): output i is outputs[i] applied to the seed.
struct LocalSource {
  int m = 0;
  std::vector<Junta> outputs;

  int n() const { return static_cast<int>(outputs.size()); }
  int locality() const;
  Point evaluate(Point seed) const;
  void validate() const;

  friend bool operator==(const LocalSource&, const LocalSource&) = default;
};

// Good bit with Pr[bit = favored] = p, p in [1/2, 1].
struct FavoredBias {
  Rational p{1, 2};
  int favored = 1;

  friend bool operator==(const FavoredBias&, const FavoredBias&) = default;
};

// Non-oblivious bit-fixing source. Good bits are independent; each bad
// position is a function of a few good bits, addressed by good ordinal
// (index into good_positions).
struct NobfSource {
  struct BadBit {
    int position = 0;
    Junta function;

    friend bool operator==(const BadBit&, const BadBit&) = default;
    friend auto operator<=>(const BadBit& a, const BadBit& b) {
      if (auto c = a.position <=> b.position; c != 0) return c;
      return a.function <=> b.function;
    }
  };

  int n = 0;
  std::vector<int> good_positions;
  std::vector<FavoredBias> biases;
  std::vector<BadBit> bad;  // ascending position, exactly the complement of good_positions

  int k() const { return static_cast<int>(good_positions.size()); }
  int locality() const;
  bool is_unbiased() const;
  // All biases reset to 1/2.
  NobfSource unbiased() const;
  // Output for a good-bit assignment (bit i = good ordinal i).
  Point evaluate(Point good_assignment) const;
  void validate() const;

  friend bool operator==(const NobfSource&, const NobfSource&) = default;
};

struct AffineSubspace {
  int n = 0;
  Point shift = 0;
  std::vector<Point> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  // Max number of basis vectors with a 1 in one coordinate.
  int locality() const;
  void validate() const;
  // Point shift + sum of basis[i] for set bits i of coefficients.
  Point point(Point coefficients) const;

  friend bool operator==(const AffineSubspace&, const AffineSubspace&) = default;
};

using Source = std::variant<LocalSource, NobfSource, AffineSubspace>;

int output_length(const Source& source);

struct ExactDistribution {
  int n = 0;
  std::map<Point, Rational> mass;  // strictly positive masses summing to 1

  std::vector<Point> support() const;
  Rational probability(Point x) const;
  bool contains(Point x) const { return mass.count(x) != 0; }
};

struct ConvexCombination {
  struct Component {
    Rational weight;
    Source source;
  };
  std::vector<Component> components;

  Rational total_weight() const;
};

ExactDistribution exact_distribution(const LocalSource& source, const Caps& caps = default_caps());
ExactDistribution exact_distribution(const NobfSource& source, const Caps& caps = default_caps());
ExactDistribution exact_distribution(const AffineSubspace& source, const Caps& caps = default_caps());
ExactDistribution exact_distribution(const Source& source, const Caps& caps = default_caps());

ExactDistribution point_mass(int n, Point x);

// -log2 of the largest mass, in bits.
double min_entropy(const ExactDistribution& dist);
Rational statistical_distance(const ExactDistribution& a, const ExactDistribution& b);
ExactDistribution mixture(const ConvexCombination& combo, const Caps& caps = default_caps());

// |Pr[f = 0] - Pr[f = 1]| for x drawn from dist.
Rational bias_under(const MultilinearPoly& f, const ExactDistribution& dist);

// Seeds y_1..y_k, then y_i * y_j for i < j in lexicographic order.
LocalSource clique_source(int k);

Point sample(const Source& source, std::uint64_t seed);

// Pivot coordinates after reduction to echelon form, and every other
// coordinate as constant + sum of pivot coordinates.
struct AffineCanonicalForm {
  struct Expression {
    int coordinate = 0;
    bool constant = false;
    Point pivot_terms = 0;  // set of pivot coordinates

    friend bool operator==(const Expression&, const Expression&) = default;
  };
  int n = 0;
  std::vector<int> pivots;  // ascending
  std::vector<Expression> dependent;

  friend bool operator==(const AffineCanonicalForm&, const AffineCanonicalForm&) = default;
};

AffineCanonicalForm affine_canonical_form(const AffineSubspace& sub);

// f composed with the parametrization of `sub` by its pivot coordinates:
// variable i of the result is pivot i.
MultilinearPoly restrict_to_subspace(const MultilinearPoly& f, const AffineSubspace& sub,
                                     const Caps& caps = default_caps());

LocalSource nobf_as_local(const NobfSource& source);

// Renumbers seeds so that only seed bits read by some output remain.
LocalSource normalize_seeds(const LocalSource& source);

}  // namespace loclab
