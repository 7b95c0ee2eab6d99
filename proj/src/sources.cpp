#include "loclab/sources.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "loclab/error.hpp"

namespace loclab {

namespace {

void require_dist_cap(int bits, const Caps& caps, const char* what) {
  if (bits > caps.dist_bits) {
    throw CapExceeded(std::string(what) + " needs 2^" + std::to_string(bits) + " enumeration steps, cap is 2^" +
                      std::to_string(caps.dist_bits));
  }
}

void validate_junta(const Junta& j, int input_count, const std::string& where) {
  if (j.support.size() > 20) throw InputError(where + ": support larger than 20");
  for (std::size_t l = 0; l < j.support.size(); ++l) {
    if (j.support[l] < 0 || j.support[l] >= input_count) throw InputError(where + ": support index out of range");
    if (l > 0 && j.support[l] <= j.support[l - 1]) throw InputError(where + ": support must be strictly increasing");
  }
  if (j.table.size() != (std::size_t{1} << j.support.size())) {
    throw InputError(where + ": table length must be 2^|support|");
  }
  for (auto v : j.table) {
    if (v > 1) throw InputError(where + ": table entries must be 0 or 1");
  }
}

}  // namespace

bool Junta::evaluate(Point inputs) const {
  std::size_t idx = 0;
  for (std::size_t l = 0; l < support.size(); ++l) {
    if (bit(inputs, support[l])) idx |= std::size_t{1} << l;
  }
  return table[idx] != 0;
}

bool Junta::is_constant() const {
  return std::all_of(table.begin(), table.end(), [&](std::uint8_t v) { return v == table.front(); });
}

Junta Junta::restrict(int index, bool value) const {
  auto it = std::find(support.begin(), support.end(), index);
  if (it == support.end()) return *this;
  const auto l = static_cast<std::size_t>(it - support.begin());
  Junta out;
  out.support = support;
  out.support.erase(out.support.begin() + static_cast<std::ptrdiff_t>(l));
  out.table.resize(table.size() / 2);
  const std::size_t low = (std::size_t{1} << l) - 1;
  for (std::size_t j = 0; j < out.table.size(); ++j) {
    std::size_t full = (j & low) | ((j & ~low) << 1) | (value ? (std::size_t{1} << l) : 0);
    out.table[j] = table[full];
  }
  return out;
}

Junta Junta::essential() const {
  Junta out = *this;
  for (std::size_t l = out.support.size(); l-- > 0;) {
    bool depends = false;
    for (std::size_t j = 0; j < out.table.size() && !depends; ++j) {
      depends = out.table[j] != out.table[j ^ (std::size_t{1} << l)];
    }
    if (!depends) out = out.restrict(out.support[l], false);
  }
  return out;
}

Junta constant_junta(bool value) { return Junta{{}, {static_cast<std::uint8_t>(value ? 1 : 0)}}; }

int LocalSource::locality() const {
  std::size_t d = 0;
  for (const auto& o : outputs) d = std::max(d, o.support.size());
  return static_cast<int>(d);
}

Point LocalSource::evaluate(Point seed) const {
  Point x = 0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i].evaluate(seed)) x |= Point{1} << i;
  }
  return x;
}

void LocalSource::validate() const {
  if (m < 0 || m > 64) throw InputError("local source: seed length must be in [0, 64]");
  if (outputs.size() > 64) throw InputError("local source: at most 64 outputs");
  for (std::size_t i = 0; i < outputs.size(); ++i) validate_junta(outputs[i], m, "local source output " + std::to_string(i));
}

int NobfSource::locality() const {
  std::size_t d = 0;
  for (const auto& b : bad) d = std::max(d, b.function.support.size());
  return static_cast<int>(d);
}

bool NobfSource::is_unbiased() const {
  return std::all_of(biases.begin(), biases.end(), [](const FavoredBias& b) { return b.p == Rational(1, 2); });
}

NobfSource NobfSource::unbiased() const {
  NobfSource out = *this;
  for (auto& b : out.biases) b = FavoredBias{};
  return out;
}

Point NobfSource::evaluate(Point good_assignment) const {
  Point x = 0;
  for (std::size_t i = 0; i < good_positions.size(); ++i) {
    if (bit(good_assignment, static_cast<int>(i))) x |= Point{1} << good_positions[i];
  }
  for (const auto& b : bad) {
    if (b.function.evaluate(good_assignment)) x |= Point{1} << b.position;
  }
  return x;
}

void NobfSource::validate() const {
  if (n < 0 || n > 64) throw InputError("NOBF source: n must be in [0, 64]");
  if (biases.size() != good_positions.size()) throw InputError("NOBF source: one bias per good bit required");
  std::vector<bool> is_good(static_cast<std::size_t>(n), false);
  for (int p : good_positions) {
    if (p < 0 || p >= n) throw InputError("NOBF source: good position out of range");
    if (is_good[static_cast<std::size_t>(p)]) throw InputError("NOBF source: repeated good position");
    is_good[static_cast<std::size_t>(p)] = true;
  }
  for (const auto& b : biases) {
    if (b.p < Rational(1, 2) || b.p > 1) throw InputError("NOBF source: bias must lie in [1/2, 1]");
    if (b.favored != 0 && b.favored != 1) throw InputError("NOBF source: favored value must be 0 or 1");
  }
  std::size_t next = 0;
  for (int pos = 0; pos < n; ++pos) {
    if (is_good[static_cast<std::size_t>(pos)]) continue;
    if (next >= bad.size() || bad[next].position != pos) {
      throw InputError("NOBF source: bad bits must cover the non-good positions in ascending order");
    }
    validate_junta(bad[next].function, k(), "NOBF bad bit " + std::to_string(pos));
    ++next;
  }
  if (next != bad.size()) throw InputError("NOBF source: bad bit at a good position");
}

int AffineSubspace::locality() const {
  int best = 0;
  for (int i = 0; i < n; ++i) {
    int c = 0;
    for (Point v : basis) c += bit(v, i) ? 1 : 0;
    best = std::max(best, c);
  }
  return best;
}

void AffineSubspace::validate() const {
  if (n < 0 || n > 64) throw InputError("affine subspace: n must be in [0, 64]");
  const Point allowed = low_mask(n);
  if ((shift & ~allowed) != 0) throw InputError("affine subspace: shift outside the ambient space");
  for (Point v : basis) {
    if ((v & ~allowed) != 0) throw InputError("affine subspace: basis vector outside the ambient space");
  }
  if (f2_matrix_rank(std::span<const Point>(basis)) != basis.size()) {
    throw InputError("affine subspace: basis is linearly dependent");
  }
}

Point AffineSubspace::point(Point coefficients) const {
  Point x = shift;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (bit(coefficients, static_cast<int>(i))) x ^= basis[i];
  }
  return x;
}

int output_length(const Source& source) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LocalSource>) {
          return s.n();
        } else {
          return s.n;
        }
      },
      source);
}

std::vector<Point> ExactDistribution::support() const {
  std::vector<Point> out;
  out.reserve(mass.size());
  for (const auto& [x, p] : mass) out.push_back(x);
  return out;
}

Rational ExactDistribution::probability(Point x) const {
  auto it = mass.find(x);
  return it == mass.end() ? Rational(0) : it->second;
}

Rational ConvexCombination::total_weight() const {
  Rational total = 0;
  for (const auto& c : components) total += c.weight;
  return total;
}

namespace {

ExactDistribution from_counts(int n, const std::map<Point, std::uint64_t>& counts, unsigned log_total) {
  ExactDistribution d;
  d.n = n;
  const BigInt total = BigInt(1) << log_total;
  for (const auto& [x, c] : counts) d.mass.emplace(x, Rational(BigInt(c), total));
  return d;
}

}  // namespace

ExactDistribution exact_distribution(const LocalSource& source, const Caps& caps) {
  source.validate();
  require_dist_cap(source.m, caps, "local source distribution");
  std::map<Point, std::uint64_t> counts;
  const Point seeds = Point{1} << source.m;
  for (Point y = 0; y < seeds; ++y) ++counts[source.evaluate(y)];
  return from_counts(source.n(), counts, static_cast<unsigned>(source.m));
}

ExactDistribution exact_distribution(const NobfSource& source, const Caps& caps) {
  source.validate();
  require_dist_cap(source.k(), caps, "NOBF source distribution");
  ExactDistribution d;
  d.n = source.n;
  if (source.is_unbiased()) {
    std::map<Point, std::uint64_t> counts;
    for (Point a = 0; a < (Point{1} << source.k()); ++a) ++counts[source.evaluate(a)];
    return from_counts(source.n, counts, static_cast<unsigned>(source.k()));
  }
  for (Point a = 0; a < (Point{1} << source.k()); ++a) {
    Rational w = 1;
    for (int i = 0; i < source.k() && w != 0; ++i) {
      const auto& b = source.biases[static_cast<std::size_t>(i)];
      w *= (bit(a, i) == (b.favored == 1)) ? b.p : Rational(1) - b.p;
    }
    if (w == 0) continue;
    d.mass[source.evaluate(a)] += w;
  }
  return d;
}

ExactDistribution exact_distribution(const AffineSubspace& source, const Caps& caps) {
  source.validate();
  require_dist_cap(source.dim(), caps, "affine source distribution");
  ExactDistribution d;
  d.n = source.n;
  const Rational each = dyadic(static_cast<unsigned>(source.dim()));
  for (Point c = 0; c < (Point{1} << source.dim()); ++c) d.mass.emplace(source.point(c), each);
  return d;
}

ExactDistribution exact_distribution(const Source& source, const Caps& caps) {
  return std::visit([&](const auto& s) { return exact_distribution(s, caps); }, source);
}

ExactDistribution point_mass(int n, Point x) {
  ExactDistribution d;
  d.n = n;
  d.mass.emplace(x, Rational(1));
  return d;
}

double min_entropy(const ExactDistribution& dist) {
  if (dist.mass.empty()) throw InputError("min-entropy of an empty distribution");
  Rational best = 0;
  for (const auto& [x, p] : dist.mass) best = std::max(best, p);
  namespace mp = boost::multiprecision;
  return std::log2(mp::denominator(best).convert_to<double>()) - std::log2(mp::numerator(best).convert_to<double>());
}

Rational statistical_distance(const ExactDistribution& a, const ExactDistribution& b) {
  if (a.n != b.n) throw InputError("statistical distance between distributions of different lengths");
  Rational total = 0;
  auto ia = a.mass.begin();
  auto ib = b.mass.begin();
  while (ia != a.mass.end() || ib != b.mass.end()) {
    if (ib == b.mass.end() || (ia != a.mass.end() && ia->first < ib->first)) {
      total += ia->second;
      ++ia;
    } else if (ia == a.mass.end() || ib->first < ia->first) {
      total += ib->second;
      ++ib;
    } else {
      total += boost::multiprecision::abs(Rational(ia->second - ib->second));
      ++ia;
      ++ib;
    }
  }
  return total / 2;
}

ExactDistribution mixture(const ConvexCombination& combo, const Caps& caps) {
  if (combo.components.empty()) throw InputError("mixture of no components");
  for (const auto& c : combo.components) {
    if (c.weight <= 0) throw InputError("mixture weights must be positive");
  }
  if (combo.total_weight() != 1) {
    throw InputError("mixture weights sum to " + to_string(combo.total_weight()) + ", not 1");
  }
  ExactDistribution out;
  out.n = output_length(combo.components.front().source);
  for (const auto& c : combo.components) {
    if (output_length(c.source) != out.n) throw InputError("mixture components have different lengths");
    auto d = exact_distribution(c.source, caps);
    for (const auto& [x, p] : d.mass) out.mass[x] += c.weight * p;
  }
  return out;
}

Rational bias_under(const MultilinearPoly& f, const ExactDistribution& dist) {
  if (f.n_vars() != dist.n) throw InputError("polynomial and distribution have different lengths");
  Rational signed_sum = 0;
  for (const auto& [x, p] : dist.mass) {
    if (f.evaluate(x)) {
      signed_sum -= p;
    } else {
      signed_sum += p;
    }
  }
  return boost::multiprecision::abs(signed_sum);
}

LocalSource clique_source(int k) {
  if (k < 1) throw InputError("clique source needs k >= 1");
  LocalSource s;
  s.m = k;
  for (int i = 0; i < k; ++i) s.outputs.push_back(Junta{{i}, {0, 1}});
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) s.outputs.push_back(Junta{{i, j}, {0, 0, 0, 1}});
  }
  s.validate();
  return s;
}

Point sample(const Source& source, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto random_bits = [&](int count) { return count == 0 ? Point{0} : (rng() & low_mask(count)); };
  return std::visit(
      [&](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LocalSource>) {
          return s.evaluate(random_bits(s.m));
        } else if constexpr (std::is_same_v<T, NobfSource>) {
          std::uniform_real_distribution<double> unit(0.0, 1.0);
          Point a = 0;
          for (int i = 0; i < s.k(); ++i) {
            const auto& b = s.biases[static_cast<std::size_t>(i)];
            bool favored = unit(rng) < to_double(b.p);
            if (favored == (b.favored == 1)) a |= Point{1} << i;
          }
          return s.evaluate(a);
        } else {
          return s.point(random_bits(s.dim()));
        }
      },
      source);
}

AffineCanonicalForm affine_canonical_form(const AffineSubspace& sub) {
  sub.validate();
  std::vector<Point> rows = sub.basis;
  std::vector<int> pivot_of_row;
  std::size_t next = 0;
  for (int col = 0; col < sub.n && next < rows.size(); ++col) {
    std::size_t r = next;
    while (r < rows.size() && !bit(rows[r], col)) ++r;
    if (r == rows.size()) continue;
    std::swap(rows[next], rows[r]);
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o != next && bit(rows[o], col)) rows[o] ^= rows[next];
    }
    pivot_of_row.push_back(col);
    ++next;
  }
  Point shift = sub.shift;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (bit(shift, pivot_of_row[r])) shift ^= rows[r];
  }
  AffineCanonicalForm form;
  form.n = sub.n;
  form.pivots = pivot_of_row;
  Point pivot_set = 0;
  for (int p : pivot_of_row) pivot_set |= Point{1} << p;
  for (int j = 0; j < sub.n; ++j) {
    if (bit(pivot_set, j)) continue;
    AffineCanonicalForm::Expression e;
    e.coordinate = j;
    e.constant = bit(shift, j);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (bit(rows[r], j)) e.pivot_terms |= Point{1} << pivot_of_row[r];
    }
    form.dependent.push_back(e);
  }
  return form;
}

MultilinearPoly restrict_to_subspace(const MultilinearPoly& f, const AffineSubspace& sub, const Caps& caps) {
  if (f.n_vars() != sub.n) throw InputError("polynomial and subspace have different ambient dimensions");
  const auto form = affine_canonical_form(sub);
  const int k = sub.dim();
  std::vector<int> ordinal(static_cast<std::size_t>(sub.n), -1);
  for (std::size_t o = 0; o < form.pivots.size(); ++o) ordinal[static_cast<std::size_t>(form.pivots[o])] = static_cast<int>(o);
  std::vector<MultilinearPoly> args(static_cast<std::size_t>(sub.n), MultilinearPoly(k));
  for (std::size_t o = 0; o < form.pivots.size(); ++o) {
    args[static_cast<std::size_t>(form.pivots[o])] = MultilinearPoly::variable(k, static_cast<int>(o));
  }
  for (const auto& e : form.dependent) {
    std::vector<Point> monomials;
    if (e.constant) monomials.push_back(0);
    for (int p = 0; p < sub.n; ++p) {
      if (bit(e.pivot_terms, p)) monomials.push_back(Point{1} << ordinal[static_cast<std::size_t>(p)]);
    }
    args[static_cast<std::size_t>(e.coordinate)] = MultilinearPoly::from_monomials(k, std::move(monomials));
  }
  return substitute(f, args, caps);
}

LocalSource nobf_as_local(const NobfSource& source) {
  source.validate();
  if (!source.is_unbiased()) throw InputError("only unbiased NOBF sources are local sources over uniform seeds");
  LocalSource out;
  out.m = source.k();
  out.outputs.resize(static_cast<std::size_t>(source.n));
  for (int o = 0; o < source.k(); ++o) {
    out.outputs[static_cast<std::size_t>(source.good_positions[static_cast<std::size_t>(o)])] = Junta{{o}, {0, 1}};
  }
  for (const auto& b : source.bad) out.outputs[static_cast<std::size_t>(b.position)] = b.function;
  return out;
}

LocalSource normalize_seeds(const LocalSource& source) {
  source.validate();
  std::vector<int> renumber(static_cast<std::size_t>(source.m), -1);
  for (const auto& o : source.outputs) {
    for (int s : o.support) renumber[static_cast<std::size_t>(s)] = 0;
  }
  int next = 0;
  for (auto& r : renumber) {
    if (r == 0) r = next++;
  }
  LocalSource out;
  out.m = next;
  for (auto o : source.outputs) {
    for (auto& s : o.support) s = renumber[static_cast<std::size_t>(s)];
    out.outputs.push_back(std::move(o));
  }
  return out;
}

}  // namespace loclab
