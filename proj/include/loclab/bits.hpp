#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace loclab {

// A point of {0,1}^n with coordinate i stored in bit i (n <= 64).
using Point = std::uint64_t;

inline int weight(Point x) { return std::popcount(x); }
inline bool bit(Point x, int i) { return ((x >> i) & 1U) != 0; }
inline Point low_mask(int n) { return n >= 64 ? ~Point{0} : ((Point{1} << n) - 1); }

// Character i is coordinate i (x1 first), e.g. "110" = x1 = x2 = 1.
std::string point_to_string(Point x, int n);
Point parse_point(std::string_view text, int n);

// Fixed-length packed bit vector for rows wider than 64 bits.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const { return ((words_[i >> 6] >> (i & 63)) & 1U) != 0; }
  void set(std::size_t i, bool value = true) {
    auto m = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= m;
    } else {
      words_[i >> 6] &= ~m;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t count() const;
  bool none() const;
  BitVector& operator^=(const BitVector& other);

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Rank over F2 by Gaussian elimination. Rows must share one length.
std::size_t f2_matrix_rank(std::vector<BitVector> rows);
std::size_t f2_matrix_rank(std::span<const Point> rows);

// Calls visit(mask) for every k-subset of the positions set in `universe`,
// in lexicographic order of the sorted index lists. Stops early when visit
// returns false; returns false in that case.
template <class Visit>
bool for_each_subset_of_size(Point universe, int k, Visit&& visit) {
  std::vector<int> idx;
  for (int i = 0; i < 64; ++i) {
    if (bit(universe, i)) idx.push_back(i);
  }
  const int m = static_cast<int>(idx.size());
  if (k < 0 || k > m) return true;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    Point mask = 0;
    for (int i : c) mask |= Point{1} << idx[static_cast<std::size_t>(i)];
    if (!visit(mask)) return false;
    int j = k - 1;
    while (j >= 0 && c[static_cast<std::size_t>(j)] == m - k + j) --j;
    if (j < 0) return true;
    ++c[static_cast<std::size_t>(j)];
    for (int l = j + 1; l < k; ++l) c[static_cast<std::size_t>(l)] = c[static_cast<std::size_t>(l - 1)] + 1;
  }
}

// All subsets of `universe` with at most k elements, ordered by (size, lexicographic).
std::vector<Point> subsets_up_to(Point universe, int k);

std::uint64_t binomial_u64(int n, int k);
std::uint64_t binomial_sum_u64(int n, int k);

}  // namespace loclab
