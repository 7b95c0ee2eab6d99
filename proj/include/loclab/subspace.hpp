#pragma once

#include <vector>

#include "loclab/caps.hpp"
#include "loclab/cw.hpp"
#include "loclab/f2poly.hpp"

namespace loclab {

// f_S for every S subset of B with |S| <= r, ordered by (|S|, lexicographic);
// subsets[i] is the index mask into B of derivatives[i].
struct DerivativeClosure {
  std::vector<Point> subsets;
  std::vector<MultilinearPoly> derivatives;
};

DerivativeClosure derivative_closure(const MultilinearPoly& f, std::span<const Point> basis, int r,
                                     const Caps& caps = default_caps());

struct CriterionResult {
  bool lhs = false;  // f vanishes on x + sum T for every T subset of B
  bool rhs = false;  // f_S(x) = 0 for every S subset of B with |S| <= r
  bool agree() const { return lhs == rhs; }
};

CriterionResult derivative_criterion_check(const MultilinearPoly& f, Point x, std::span<const Point> basis, int r);

struct GrowthStep {
  Point chosen = 0;
  int weight = 0;
  int alpha = 0;
  int linear_degree = 0;     // D of the system searched in this step
  int nonlinear_degree = 0;  // Delta of the same system
  int unique = 0;            // |UNIQUE| after the step
  int saturated = 0;         // |SATURATED| after the step
  std::vector<int> column_weights;
};

struct GrowResult {
  int n = 0;
  bool constant_value = false;
  std::vector<Point> basis;
  Point unique = 0;
  Point saturated = 0;
  std::vector<GrowthStep> trace;
  bool truncated = false;
  int dimension() const { return static_cast<int>(basis.size()); }
};

// Greedily builds a d-local basis B with f constant on span(B): each new vector
// is the lowest-weight nonzero common zero of the derivatives of f across B
// that avoids UNIQUE and SATURATED coordinates.
GrowResult grow_local_subspace(const MultilinearPoly& f, int d, int r, const Caps& caps = default_caps());

bool verify_monochromatic(const MultilinearPoly& f, Point shift, std::span<const Point> basis,
                          const Caps& caps = default_caps());
std::vector<int> column_weights(std::span<const Point> basis, int n);
bool verify_d_local(std::span<const Point> basis, int d);

struct BestDimensionLimits {
  int max_dim = 4;
  std::uint64_t max_nodes = 20'000'000;
};

// Largest dimension (up to max_dim) of a linear subspace with a d-local basis on
// which f is constant, by exhaustive branch and bound. n <= 8.
int exhaustive_best_dimension(const MultilinearPoly& f, int d, const BestDimensionLimits& limits = {});

}  // namespace loclab
