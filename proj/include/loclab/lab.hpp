#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "loclab/caps.hpp"
#include "loclab/f2poly.hpp"
#include "loclab/sources.hpp"

namespace loclab {

// d-local NOBF sources on n bits with k good bits. Each bad bit reads exactly
// min(d, k) good bits through a polynomial of degree <= r (r unset: any function).
struct FamilySpec {
  int n = 0;
  int k = 0;
  int d = 1;
  std::optional<int> r;

  int support_size() const { return std::min(d, k); }
};

// binom(n, k) * (binom(k, d') * 2^c)^(n - k) with c = 2^d', or binom(d', <= r) when r is set.
BigInt family_size(const FamilySpec& spec);

// Descriptor enumeration in a fixed order: good-position sets lexicographically,
// then one (support, function) digit per bad position, the lowest bad position
// most significant. Functions are indexed by their coefficient vector over the
// monomials of size <= r in canonical order.
class NobfFamily {
 public:
  explicit NobfFamily(const FamilySpec& spec, const Caps& caps = default_caps());

  const FamilySpec& spec() const { return spec_; }
  std::uint64_t size() const { return size_; }
  NobfSource member(std::uint64_t index) const;
  // Generating polynomials over the k good bits, one per output position.
  std::vector<MultilinearPoly> generators(std::uint64_t index) const;

 private:
  struct Decoded {
    Point good = 0;
    std::vector<std::pair<std::size_t, std::size_t>> digits;  // (support index, function index)
  };
  Decoded decode(std::uint64_t index) const;

  FamilySpec spec_;
  std::uint64_t size_ = 0;
  std::vector<Point> good_sets;
  std::vector<Point> supports;              // subsets of good ordinals
  std::vector<MultilinearPoly> functions;  // over support_size() local variables
  std::uint64_t per_good = 0;
};

// All NOBF sources of the family, in enumeration order.
void enumerate_nobf_family(const FamilySpec& spec, const std::function<void(std::uint64_t, const NobfSource&)>& visit,
                           const Caps& caps = default_caps());

// bias(f) under source, by direct enumeration of the 2^k good assignments.
Rational nobf_bias(const TruthTable& f, const NobfSource& source);

struct CensusResult {
  Rational max_bias;
  std::uint64_t worst_index = 0;
  NobfSource worst;
  std::uint64_t sources = 0;
};

CensusResult extractor_census(const MultilinearPoly& f, const FamilySpec& spec, int workers = 1,
                              const Caps& caps = default_caps());

struct SearchResult {
  MultilinearPoly best;
  Rational best_bias;
  std::uint64_t best_trial = 0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  std::vector<Rational> max_biases;  // per trial
  Rational success_fraction() const { return trials == 0 ? Rational(0) : Rational(successes) / trials; }
};

// Per-trial polynomial seeds drawn from one generator seeded with `seed`.
std::vector<std::uint64_t> trial_seeds(std::uint64_t seed, std::uint64_t trials);

// Random degree <= r polynomials; success when the census max bias is <= 2 * eps.
SearchResult extractor_search(const FamilySpec& spec, int r, std::uint64_t trials, std::uint64_t seed,
                              const Rational& eps, int workers = 1, const Caps& caps = default_caps());
// Same, over every degree <= r polynomial in order of coefficient vector.
SearchResult extractor_search_exhaustive(const FamilySpec& spec, int r, const Rational& eps, int workers = 1,
                                         const Caps& caps = default_caps());

// Every polynomial of degree <= r on n variables, bit j of the index selecting
// the j-th monomial of size <= r in canonical order.
MultilinearPoly poly_from_coefficients(int n, int r, std::uint64_t coefficients);

struct HittingCensus {
  bool all_hit = true;
  std::optional<std::uint64_t> failing_index;
  std::vector<MultilinearPoly> failing_tuple;
  std::uint64_t tuples = 0;
};

// For every generating tuple of the degree-restricted family, f(a_1..a_n)
// must hit some degree in [1, r].
HittingCensus disperser_census_via_hitting(const MultilinearPoly& f, const FamilySpec& spec,
                                           const Caps& caps = default_caps());

enum class HittingVerdict { Holds, Fails, AMissesDegree, BTooLow };
const char* to_string(HittingVerdict v);

// f(a + b) hits degree r whenever f(a) does and every b_i has only monomials of size > r.
HittingVerdict hitting_lemma_check(const MultilinearPoly& f, std::span<const MultilinearPoly> a,
                                   std::span<const MultilinearPoly> b, int r, const Caps& caps = default_caps());

struct Quantile {
  double p = 0;
  Rational value;
};

struct SurveyReport {
  std::string kind;
  int n = 0;
  int r = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> poly_seeds;
  std::vector<Rational> values;
  std::vector<Quantile> quantiles;
};

// Nearest rank: the ceil(p N)-th smallest value.
Rational quantile(std::vector<Rational> values, double p);
std::vector<Quantile> standard_quantiles(const std::vector<Rational>& values);

SurveyReport random_bias_survey(int n, int r, std::uint64_t trials, std::uint64_t seed, int workers = 1,
                                const Caps& caps = default_caps());
SurveyReport correlation_survey(const TruthTable& g, int r, std::uint64_t trials, std::uint64_t seed, int workers = 1,
                                const Caps& caps = default_caps());

TruthTable majority_table(int n);

struct RmCode {
  int m = 0;
  int r = 0;
  std::vector<BitVector> codewords;  // indexed by coefficient vector
  std::size_t block_length() const { return std::size_t{1} << m; }
};

RmCode rm_code(int m, int r, const Caps& caps = default_caps());
// Minimum weight of a nonzero codeword (the code is linear).
std::size_t rm_min_distance(const RmCode& code);
std::size_t hamming_distance(const BitVector& a, const BitVector& b);
std::uint64_t rm_list_size(const RmCode& code, const BitVector& center, std::size_t radius);
// |Q| * binom(N, <= radius) <= 2^N * L
bool hamming_bound_holds(const BigInt& code_size, unsigned block_length, unsigned radius, std::uint64_t list_size);

struct AffineCensusOptions {
  bool exhaustive = true;
  std::uint64_t trials = 0;  // random mode
  std::uint64_t seed = 0;
};

struct AffineCensusResult {
  Rational max_bias;
  AffineSubspace worst;
  std::uint64_t scanned = 0;
};

// Max bias of f over d-local affine subspaces of dimension k in F2^n. Exhaustive
// mode visits every d-local independent basis (as an increasing vector list)
// with every coset representative that is zero on the pivot coordinates.
AffineCensusResult affine_extractor_census(const MultilinearPoly& f, int d, int k,
                                           const AffineCensusOptions& options = {},
                                           const Caps& caps = default_caps());
// Bias of f restricted to the subspace.
Rational subspace_bias(const TruthTable& f, const AffineSubspace& sub);

}  // namespace loclab
