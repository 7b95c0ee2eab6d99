#include "loclab/f2poly.hpp"

#include <algorithm>
#include <cctype>
#include <random>

#include "loclab/error.hpp"

namespace loclab {

namespace {

void canonicalize(std::vector<Point>& monomials) {
  std::sort(monomials.begin(), monomials.end(), monomial_less);
  std::size_t out = 0;
  for (std::size_t i = 0; i < monomials.size();) {
    std::size_t j = i;
    while (j < monomials.size() && monomials[j] == monomials[i]) ++j;
    if ((j - i) % 2 == 1) monomials[out++] = monomials[i];
    i = j;
  }
  monomials.resize(out);
}

void require_same_vars(const MultilinearPoly& f, const MultilinearPoly& g) {
  if (f.n_vars() != g.n_vars()) {
    throw InputError("polynomials over " + std::to_string(f.n_vars()) + " and " + std::to_string(g.n_vars()) +
                     " variables");
  }
}

void require_table_cap(int n_vars, const Caps& caps) {
  if (n_vars > caps.table_vars) {
    throw CapExceeded("truth table over " + std::to_string(n_vars) + " variables exceeds cap " +
                      std::to_string(caps.table_vars));
  }
}

constexpr std::uint64_t kLowHalf[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

}  // namespace

MultilinearPoly::MultilinearPoly(int n_vars) : n_vars_(n_vars) {
  if (n_vars < 0 || n_vars > 64) throw InputError("variable count must be in [0, 64]");
}

MultilinearPoly MultilinearPoly::from_monomials(int n_vars, std::vector<Point> monomials) {
  MultilinearPoly p(n_vars);
  const Point allowed = low_mask(n_vars);
  for (Point m : monomials) {
    if ((m & ~allowed) != 0) throw InputError("monomial references a variable >= " + std::to_string(n_vars));
  }
  canonicalize(monomials);
  p.monomials_ = std::move(monomials);
  return p;
}

MultilinearPoly MultilinearPoly::constant(int n_vars, bool value) {
  MultilinearPoly p(n_vars);
  if (value) p.monomials_.push_back(0);
  return p;
}

MultilinearPoly MultilinearPoly::variable(int n_vars, int index) {
  if (index < 0 || index >= n_vars) throw InputError("variable index out of range");
  MultilinearPoly p(n_vars);
  p.monomials_.push_back(Point{1} << index);
  return p;
}

bool MultilinearPoly::is_constant() const {
  return monomials_.empty() || (monomials_.size() == 1 && monomials_.front() == 0);
}

int MultilinearPoly::degree() const { return monomials_.empty() ? -1 : weight(monomials_.back()); }

bool MultilinearPoly::evaluate(Point x) const {
  bool value = false;
  for (Point m : monomials_) value ^= (m & ~x) == 0;
  return value;
}

std::string MultilinearPoly::to_string() const {
  if (monomials_.empty()) return "0";
  std::string out;
  for (Point m : monomials_) {
    if (!out.empty()) out += " + ";
    if (m == 0) {
      out += "1";
      continue;
    }
    bool first = true;
    for (int i = 0; i < n_vars_; ++i) {
      if (!bit(m, i)) continue;
      if (!first) out += "*";
      out += "x" + std::to_string(i + 1);
      first = false;
    }
  }
  return out;
}

TruthTable::TruthTable(int n_vars) : n_vars_(n_vars), bits_(std::size_t{1} << n_vars) {}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, int n_vars) : text_(text), n_vars_(n_vars) {}

  MultilinearPoly parse() {
    std::vector<Point> monomials;
    parse_term(monomials);
    skip_ws();
    while (pos_ < text_.size() && text_[pos_] == '+') {
      ++pos_;
      parse_term(monomials);
      skip_ws();
    }
    if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return MultilinearPoly::from_monomials(n_vars_, std::move(monomials));
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void parse_term(std::vector<Point>& monomials) {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("expected a term", pos_);
    char c = text_[pos_];
    if (c == '0' || c == '1') {
      ++pos_;
      if (c == '1') monomials.push_back(0);
      return;
    }
    Point m = parse_factor();
    skip_ws();
    while (pos_ < text_.size() && text_[pos_] == '*') {
      ++pos_;
      m |= parse_factor();
      skip_ws();
    }
    monomials.push_back(m);
  }

  Point parse_factor() {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != 'x') throw ParseError("expected a variable 'x<index>'", pos_);
    const std::size_t start = pos_++;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      throw ParseError("expected a variable index", pos_);
    }
    long index = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      index = index * 10 + (text_[pos_] - '0');
      if (index > 1'000'000) throw ParseError("variable index too large", start);
      ++pos_;
    }
    if (index < 1 || index > n_vars_) {
      throw ParseError("variable x" + std::to_string(index) + " out of range 1.." + std::to_string(n_vars_), start);
    }
    return Point{1} << (index - 1);
  }

  std::string_view text_;
  int n_vars_;
  std::size_t pos_ = 0;
};

}  // namespace

MultilinearPoly parse_poly(std::string_view text, int n_vars) {
  if (n_vars < 0 || n_vars > 64) throw InputError("variable count must be in [0, 64]");
  return PolyParser(text, n_vars).parse();
}

MultilinearPoly add(const MultilinearPoly& f, const MultilinearPoly& g) {
  require_same_vars(f, g);
  std::vector<Point> out;
  out.reserve(f.size() + g.size());
  std::set_symmetric_difference(f.monomials().begin(), f.monomials().end(), g.monomials().begin(),
                                g.monomials().end(), std::back_inserter(out), monomial_less);
  return MultilinearPoly::from_monomials(f.n_vars(), std::move(out));
}

MultilinearPoly multiply(const MultilinearPoly& f, const MultilinearPoly& g) {
  require_same_vars(f, g);
  std::vector<Point> out;
  out.reserve(f.size() * g.size());
  for (Point a : f.monomials()) {
    for (Point b : g.monomials()) out.push_back(a | b);
  }
  return MultilinearPoly::from_monomials(f.n_vars(), std::move(out));
}

void moebius_transform(BitVector& bits, int n_vars) {
  auto words = bits.words();
  for (int i = 0; i < n_vars && i < 6; ++i) {
    const int shift = 1 << i;
    for (auto& w : words) w ^= (w & kLowHalf[i]) << shift;
  }
  for (int i = 6; i < n_vars; ++i) {
    const std::size_t stride = std::size_t{1} << (i - 6);
    for (std::size_t j = 0; j < words.size(); ++j) {
      if ((j & stride) != 0) words[j] ^= words[j ^ stride];
    }
  }
}

TruthTable truth_table(const MultilinearPoly& f, const Caps& caps) {
  require_table_cap(f.n_vars(), caps);
  TruthTable t(f.n_vars());
  for (Point m : f.monomials()) t.bits().set(m);
  moebius_transform(t.bits(), f.n_vars());
  return t;
}

MultilinearPoly from_truth_table(const TruthTable& table) {
  BitVector coeffs = table.bits();
  moebius_transform(coeffs, table.n_vars());
  std::vector<Point> monomials;
  auto words = coeffs.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t word = words[w];
    while (word != 0) {
      int b = std::countr_zero(word);
      monomials.push_back((static_cast<Point>(w) << 6) | static_cast<Point>(b));
      word &= word - 1;
    }
  }
  return MultilinearPoly::from_monomials(table.n_vars(), std::move(monomials));
}

MultilinearPoly substitute(const MultilinearPoly& f, std::span<const MultilinearPoly> args, const Caps& caps) {
  if (static_cast<int>(args.size()) != f.n_vars()) {
    throw InputError("substitution needs " + std::to_string(f.n_vars()) + " polynomials, got " +
                     std::to_string(args.size()));
  }
  if (args.empty()) return MultilinearPoly::constant(0, f.constant_term());
  const int k = args.front().n_vars();
  for (const auto& a : args) {
    if (a.n_vars() != k) throw InputError("substituted polynomials have different variable counts");
  }
  require_table_cap(k, caps);
  std::vector<TruthTable> tables;
  tables.reserve(args.size());
  for (const auto& a : args) tables.push_back(truth_table(a, caps));

  TruthTable result(k);
  BitVector term(std::size_t{1} << k);
  auto out = result.bits().words();
  for (Point m : f.monomials()) {
    auto tw = term.words();
    std::fill(tw.begin(), tw.end(), ~std::uint64_t{0});
    for (int i = 0; i < f.n_vars(); ++i) {
      if (!bit(m, i)) continue;
      auto aw = tables[static_cast<std::size_t>(i)].bits().words();
      for (std::size_t w = 0; w < tw.size(); ++w) tw[w] &= aw[w];
    }
    for (std::size_t w = 0; w < out.size(); ++w) out[w] ^= tw[w];
  }
  if (k < 6) out[0] &= low_mask(1 << k);
  return from_truth_table(result);
}

Rational bias(const TruthTable& table) {
  const BigInt total = BigInt(1) << table.n_vars();
  const BigInt ones = table.count_ones();
  BigInt diff = total - 2 * ones;
  if (diff < 0) diff = -diff;
  return Rational(diff, total);
}

Rational bias(const MultilinearPoly& f, const Caps& caps) { return bias(truth_table(f, caps)); }

Rational correlation(const TruthTable& f, const TruthTable& g) {
  if (f.n_vars() != g.n_vars()) throw InputError("correlation of functions over different variable counts");
  TruthTable diff = f;
  diff.bits() ^= g.bits();
  return bias(diff);
}

Rational correlation(const MultilinearPoly& f, const MultilinearPoly& g, const Caps& caps) {
  require_same_vars(f, g);
  return correlation(truth_table(f, caps), truth_table(g, caps));
}

MultilinearPoly directional_derivative(const MultilinearPoly& f, std::span<const Point> dirs) {
  std::vector<Point> current(f.monomials().begin(), f.monomials().end());
  const Point allowed = low_mask(f.n_vars());
  for (Point v : dirs) {
    if ((v & ~allowed) != 0) throw InputError("direction has a coordinate >= " + std::to_string(f.n_vars()));
    // f(x+v) + f(x): each monomial S expands to the sum of x^{S \ U} over nonempty U within S & v.
    std::vector<Point> next;
    for (Point s : current) {
      const Point shared = s & v;
      for (Point u = shared; u != 0; u = (u - 1) & shared) next.push_back(s & ~u);
    }
    canonicalize(next);
    current = std::move(next);
  }
  return MultilinearPoly::from_monomials(f.n_vars(), std::move(current));
}

bool hits_degree(const MultilinearPoly& f, int r) {
  return std::any_of(f.monomials().begin(), f.monomials().end(), [r](Point m) { return weight(m) == r; });
}

bool hits_degree_at_most(const MultilinearPoly& f, int r) {
  return !f.is_zero() && r >= 0 && weight(f.monomials().front()) <= r;
}

std::pair<MultilinearPoly, MultilinearPoly> split_at_degree(const MultilinearPoly& f, int r) {
  std::vector<Point> low;
  std::vector<Point> high;
  for (Point m : f.monomials()) (weight(m) <= r ? low : high).push_back(m);
  return {MultilinearPoly::from_monomials(f.n_vars(), std::move(low)),
          MultilinearPoly::from_monomials(f.n_vars(), std::move(high))};
}

MultilinearPoly random_poly(int n_vars, int r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> chosen;
  for (int size = 0; size <= r && size <= n_vars; ++size) {
    for_each_subset_of_size(low_mask(n_vars), size, [&](Point m) {
      if ((rng() >> 63) != 0) chosen.push_back(m);
      return true;
    });
  }
  return MultilinearPoly::from_monomials(n_vars, std::move(chosen));
}

}  // namespace loclab
