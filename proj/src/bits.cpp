#include "loclab/bits.hpp"

#include <algorithm>

#include "loclab/error.hpp"

namespace loclab {

std::string point_to_string(Point x, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if (bit(x, i)) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

Point parse_point(std::string_view text, int n) {
  if (static_cast<int>(text.size()) != n) {
    throw InputError("bitstring '" + std::string(text) + "' has length " + std::to_string(text.size()) +
                     ", expected " + std::to_string(n));
  }
  if (n > 64) throw InputError("points are limited to 64 coordinates");
  Point x = 0;
  for (int i = 0; i < n; ++i) {
    char c = text[static_cast<std::size_t>(i)];
    if (c == '1') {
      x |= Point{1} << i;
    } else if (c != '0') {
      throw ParseError("bitstring may only contain 0 and 1", static_cast<std::size_t>(i));
    }
  }
  return x;
}

std::size_t BitVector::count() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitVector::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

BitVector& BitVector::operator^=(const BitVector& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::size_t f2_matrix_rank(std::vector<BitVector> rows) {
  if (rows.empty()) return 0;
  const std::size_t width = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != width) throw InputError("ragged rows in F2 matrix");
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !rows[pivot].get(col)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const std::size_t word = col >> 6;
    const std::uint64_t m = std::uint64_t{1} << (col & 63);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if ((rows[r].words()[word] & m) == 0) continue;
      // columns below `word` are already zero in both rows
      auto dst = rows[r].words();
      auto src = rows[rank].words();
      for (std::size_t w = word; w < dst.size(); ++w) dst[w] ^= src[w];
    }
    ++rank;
  }
  return rank;
}

std::size_t f2_matrix_rank(std::span<const Point> rows) {
  std::vector<Point> basis;  // kept with distinct leading bits
  for (Point r : rows) {
    for (Point b : basis) r = std::min(r, r ^ b);
    if (r != 0) basis.push_back(r);
    std::sort(basis.begin(), basis.end(), std::greater<>());
  }
  return basis.size();
}

std::vector<Point> subsets_up_to(Point universe, int k) {
  std::vector<Point> out;
  for (int size = 0; size <= k; ++size) {
    for_each_subset_of_size(universe, size, [&](Point m) {
      out.push_back(m);
      return true;
    });
  }
  return out;
}

std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t binomial_sum_u64(int n, int k) {
  std::uint64_t total = 0;
  for (int i = 0; i <= k && i <= n; ++i) total += binomial_u64(n, i);
  return total;
}

}  // namespace loclab
