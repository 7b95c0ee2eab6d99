#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loclab/caps.hpp"
#include "loclab/rational.hpp"
#include "loclab/sources.hpp"

namespace loclab {

enum class FixingCase { Base, CaseI, CaseII, Leaf };

const char* to_string(FixingCase c);

// One node of the recursion that rewrites a local source as a convex
// combination of biased NOBF sources.
//
//   Base    locality <= 1; the node's own source is already NOBF (`leaf`).
//   CaseI   the maximal disjoint set T is smaller than the target; every seed
//           read by T is fixed and each assignment is a child.
//   CaseII  |T| reaches the target; each child is a Leaf obtained by fixing
//           the auxiliary fiber indices and the seeds outside the supports of T.
struct FixingNode {
  FixingCase kind = FixingCase::Leaf;
  std::string fixing;         // assignment leading here from the parent
  Rational weight{1};         // probability of this branch given the parent
  int locality = 0;
  std::vector<int> good_outputs;  // T
  std::vector<int> fixed_seeds;   // seeds fixed when leaving this node (CaseI, CaseII)
  int entropy_drop = 0;           // sum of |S_i| over T for CaseI
  std::optional<NobfSource> leaf;
  int merged = 1;                 // identical leaves folded into this one
  std::vector<FixingNode> children;
};

struct WeightedNobf {
  Rational weight;
  std::string path;
  NobfSource source;
};

struct FixingTree {
  LocalSource source;
  int target = 1;
  FixingNode root;

  // Leaves with absolute weights, sorted by path.
  std::vector<WeightedNobf> leaves() const;
};

// Greedy in ascending output order over non-constant outputs.
std::vector<int> find_maximal_disjoint_set(const LocalSource& source);

FixingTree local_to_biased_nobf(const LocalSource& source, int target, const Caps& caps = default_caps());

// Guarantee of the coin-simulation step: all but `epsilon` of the mass sits on
// components with at least `k_prime` good bits, where mu = sum (2 - 2 p_i),
// k_prime = mu / 4 and epsilon = 2^(-k_prime).
struct DebiasGuarantee {
  Rational mu;
  Rational k_prime;
  double epsilon = 1.0;
};

struct DebiasResult {
  DebiasGuarantee guarantee;
  std::vector<WeightedNobf> components;  // unbiased; label is the bit string b
};

DebiasResult debias_nobf(const NobfSource& source, const Caps& caps = default_caps());

struct LocalToNobfOptions {
  bool truncate = false;  // drop components with fewer than k_prime good bits and renormalize
};

struct LocalToNobfResult {
  DebiasGuarantee guarantee;  // k_prime and epsilon taken over the worst leaf
  std::vector<WeightedNobf> components;
  Rational dropped_weight{0};
  bool truncated = false;
  FixingTree tree;
};

LocalToNobfResult local_to_nobf(const LocalSource& source, int target, const LocalToNobfOptions& options = {},
                                const Caps& caps = default_caps());

// A leaf with at least `target` good bits, biases reset to 1/2. Its support is
// contained in the support of `source`.
NobfSource nobf_witness_for_disperser(const LocalSource& source, int target, const Caps& caps = default_caps());

ConvexCombination to_combination(const std::vector<WeightedNobf>& parts);

Rational verify_decomposition(const LocalSource& original, const ConvexCombination& combo,
                              const Caps& caps = default_caps());

// Canonical text key of a NOBF descriptor, used to fold identical components.
std::string describe(const NobfSource& source);

}  // namespace loclab
