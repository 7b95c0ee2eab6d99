#pragma once

#include <cstdint>

namespace loclab {

// Every enumeration limit in one record. Operations that would exceed a cap
// throw CapExceeded instead of approximating.
struct Caps {
  int table_vars = 24;                          // truth tables hold 2^table_vars bits
  int dist_bits = 22;                           // exact distributions enumerate <= 2^dist_bits seeds
  std::uint64_t family = 1'000'000;             // descriptors in an enumerated source family
  int max_weight = 64;                          // weight-ordered solution search
  std::uint64_t max_combinations = 50'000'000;  // candidates tested by weight-ordered search
  std::uint64_t search_nodes = 20'000'000;      // branch-and-bound oracles
};

inline const Caps& default_caps() {
  static const Caps caps{};
  return caps;
}

}  // namespace loclab
