#include "loclab/reduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "loclab/error.hpp"

namespace loclab {

const char* to_string(FixingCase c) {
  switch (c) {
    case FixingCase::Base:
      return "base";
    case FixingCase::CaseI:
      return "case-i";
    case FixingCase::CaseII:
      return "case-ii";
    case FixingCase::Leaf:
      return "leaf";
  }
  return "?";
}

std::string describe(const NobfSource& source) {
  std::string out = "n=" + std::to_string(source.n) + ";good=";
  for (std::size_t i = 0; i < source.good_positions.size(); ++i) {
    const auto& b = source.biases[i];
    out += std::to_string(source.good_positions[i]) + ":" + to_string(b.p) + ":" + std::to_string(b.favored) + ",";
  }
  out += ";bad=";
  for (const auto& b : source.bad) {
    out += std::to_string(b.position) + "[";
    for (int s : b.function.support) out += std::to_string(s) + ",";
    out += "]";
    for (auto v : b.function.table) out += v ? '1' : '0';
    out += ",";
  }
  return out;
}

std::vector<int> find_maximal_disjoint_set(const LocalSource& source) {
  std::vector<int> chosen;
  std::vector<bool> used(static_cast<std::size_t>(source.m), false);
  for (int i = 0; i < source.n(); ++i) {
    const auto& o = source.outputs[static_cast<std::size_t>(i)];
    if (o.is_constant()) continue;
    bool clash = std::any_of(o.support.begin(), o.support.end(), [&](int s) { return used[static_cast<std::size_t>(s)]; });
    if (clash) continue;
    for (int s : o.support) used[static_cast<std::size_t>(s)] = true;
    chosen.push_back(i);
  }
  return chosen;
}

namespace {

LocalSource essential_form(const LocalSource& source) {
  LocalSource out;
  out.m = source.m;
  for (const auto& o : source.outputs) out.outputs.push_back(o.essential());
  return out;
}

std::string assignment_string(const std::vector<int>& seeds, Point values) {
  std::string s;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!s.empty()) s += ",";
    s += "y" + std::to_string(seeds[i] + 1) + "=" + (bit(values, static_cast<int>(i)) ? "1" : "0");
  }
  return s;
}

// Locality <= 1 after removing inessential inputs: the first output reading
// a seed becomes its good bit, later readers are copies or negations of it,
// constants are bad bits with empty support.
NobfSource base_case_nobf(const LocalSource& source) {
  NobfSource out;
  out.n = source.n();
  std::map<int, std::pair<int, bool>> seed_to_good;  // seed -> (ordinal, good output negates the seed)
  for (int i = 0; i < source.n(); ++i) {
    const auto& o = source.outputs[static_cast<std::size_t>(i)];
    if (o.support.empty()) {
      out.bad.push_back({i, constant_junta(o.table[0] != 0)});
      continue;
    }
    const int seed = o.support[0];
    const bool negated = o.table[0] == 1;
    auto it = seed_to_good.find(seed);
    if (it == seed_to_good.end()) {
      seed_to_good.emplace(seed, std::make_pair(out.k(), negated));
      out.good_positions.push_back(i);
      out.biases.emplace_back();
      continue;
    }
    // seed value = good value XOR good_negated; output = seed value XOR negated
    const bool flip = it->second.second != negated;
    Junta j{{it->second.first}, {static_cast<std::uint8_t>(flip ? 1 : 0), static_cast<std::uint8_t>(flip ? 0 : 1)}};
    out.bad.push_back({i, j});
  }
  out.validate();
  return out;
}

struct Builder {
  int target;
  const Caps& caps;

  FixingNode build(const LocalSource& raw, std::string fixing, Rational weight) {
    LocalSource source = essential_form(raw);
    FixingNode node;
    node.fixing = std::move(fixing);
    node.weight = std::move(weight);
    node.locality = source.locality();
    node.good_outputs = find_maximal_disjoint_set(source);

    if (node.locality <= 1) {
      node.kind = FixingCase::Base;
      node.leaf = base_case_nobf(source);
      return node;
    }
    if (static_cast<int>(node.good_outputs.size()) >= target) {
      case_two(node, source);
      return node;
    }
    case_one(node, source);
    return node;
  }

  void case_one(FixingNode& node, const LocalSource& source) {
    node.kind = FixingCase::CaseI;
    std::vector<int> seeds;
    for (int i : node.good_outputs) {
      const auto& s = source.outputs[static_cast<std::size_t>(i)].support;
      seeds.insert(seeds.end(), s.begin(), s.end());
    }
    std::sort(seeds.begin(), seeds.end());
    node.fixed_seeds = seeds;
    node.entropy_drop = static_cast<int>(seeds.size());
    if (static_cast<int>(seeds.size()) > caps.dist_bits) throw CapExceeded("case (i) fixing too many seed bits");
    const Rational w = dyadic(static_cast<unsigned>(seeds.size()));
    for (Point a = 0; a < (Point{1} << seeds.size()); ++a) {
      LocalSource child = source;
      for (auto& o : child.outputs) {
        for (std::size_t i = 0; i < seeds.size(); ++i) o = o.restrict(seeds[i], bit(a, static_cast<int>(i)));
      }
      FixingNode c = build(child, assignment_string(seeds, a), w);
      if (c.locality >= node.locality) {
        throw std::logic_error("case (i) fixing did not reduce locality");
      }
      node.children.push_back(std::move(c));
    }
  }

  void case_two(FixingNode& node, const LocalSource& source) {
    node.kind = FixingCase::CaseII;
    const auto& good = node.good_outputs;
    const std::size_t tau = good.size();

    std::vector<int> owner(static_cast<std::size_t>(source.m), -1);  // seed -> ordinal in T
    for (std::size_t o = 0; o < tau; ++o) {
      for (int s : source.outputs[static_cast<std::size_t>(good[o])].support) owner[static_cast<std::size_t>(s)] = static_cast<int>(o);
    }
    std::vector<int> rest;  // seeds read by some output but outside the supports of T
    for (const auto& out : source.outputs) {
      for (int s : out.support) {
        if (owner[static_cast<std::size_t>(s)] < 0) rest.push_back(s);
      }
    }
    std::sort(rest.begin(), rest.end());
    rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
    node.fixed_seeds = rest;

    // Fibers of each good output: the support assignments mapping to 0 and to 1.
    std::vector<std::array<std::vector<Point>, 2>> fibers(tau);
    std::vector<FavoredBias> biases(tau);
    double log_leaves = static_cast<double>(rest.size());
    for (std::size_t o = 0; o < tau; ++o) {
      const auto& f = source.outputs[static_cast<std::size_t>(good[o])];
      for (std::size_t z = 0; z < f.table.size(); ++z) fibers[o][f.table[z]].push_back(z);
      const auto zeros = fibers[o][0].size();
      const auto ones = fibers[o][1].size();
      biases[o].favored = ones >= zeros ? 1 : 0;
      biases[o].p = Rational(static_cast<long>(std::max(zeros, ones)), static_cast<long>(f.table.size()));
      log_leaves += std::log2(static_cast<double>(zeros * ones));
    }
    if (log_leaves > caps.dist_bits) throw CapExceeded("case (ii) fixing enumerates too many leaves");

    // Bad outputs depend on the good ordinals whose supports they touch.
    struct BadPlan {
      int position;
      std::vector<int> ordinals;
    };
    std::vector<BadPlan> plans;
    std::vector<bool> is_good(static_cast<std::size_t>(source.n()), false);
    for (int g : good) is_good[static_cast<std::size_t>(g)] = true;
    for (int j = 0; j < source.n(); ++j) {
      if (is_good[static_cast<std::size_t>(j)]) continue;
      BadPlan plan{j, {}};
      for (int s : source.outputs[static_cast<std::size_t>(j)].support) {
        if (owner[static_cast<std::size_t>(s)] >= 0) plan.ordinals.push_back(owner[static_cast<std::size_t>(s)]);
      }
      std::sort(plan.ordinals.begin(), plan.ordinals.end());
      plan.ordinals.erase(std::unique(plan.ordinals.begin(), plan.ordinals.end()), plan.ordinals.end());
      plans.push_back(std::move(plan));
    }

    // Mixed-radix counter over (b0_o, b1_o) for each good ordinal, then the rest seeds.
    std::vector<std::size_t> radix;
    for (std::size_t o = 0; o < tau; ++o) {
      radix.push_back(fibers[o][0].size());
      radix.push_back(fibers[o][1].size());
    }
    Rational weight = dyadic(static_cast<unsigned>(rest.size()));
    for (auto r : radix) weight /= static_cast<long>(r);

    std::map<std::string, std::size_t> index_of;
    std::vector<std::size_t> digits(radix.size(), 0);
    bool done = false;
    while (!done) {
      for (Point zbar = 0; zbar < (Point{1} << rest.size()); ++zbar) {
        // Seed assignment for a good-bit assignment `a`, fixed (b, zbar).
        auto seed_for = [&](Point a, const std::vector<int>& ordinals) {
          Point y = 0;
          for (std::size_t r = 0; r < rest.size(); ++r) {
            if (bit(zbar, static_cast<int>(r))) y |= Point{1} << rest[r];
          }
          for (int o : ordinals) {
            const auto uo = static_cast<std::size_t>(o);
            const int value = bit(a, o) ? 1 : 0;
            const Point z = fibers[uo][static_cast<std::size_t>(value)][digits[2 * uo + static_cast<std::size_t>(value)]];
            const auto& support = source.outputs[static_cast<std::size_t>(good[uo])].support;
            for (std::size_t l = 0; l < support.size(); ++l) {
              if (bit(z, static_cast<int>(l))) y |= Point{1} << support[l];
            }
          }
          return y;
        };

        NobfSource leaf;
        leaf.n = source.n();
        leaf.good_positions = good;
        leaf.biases = biases;
        for (const auto& plan : plans) {
          Junta j;
          j.support = plan.ordinals;
          const auto& f = source.outputs[static_cast<std::size_t>(plan.position)];
          for (Point e = 0; e < (Point{1} << plan.ordinals.size()); ++e) {
            Point a = 0;
            for (std::size_t l = 0; l < plan.ordinals.size(); ++l) {
              if (bit(e, static_cast<int>(l))) a |= Point{1} << plan.ordinals[l];
            }
            j.table.push_back(f.evaluate(seed_for(a, plan.ordinals)) ? 1 : 0);
          }
          leaf.bad.push_back({plan.position, j.essential()});
        }

        std::string label = "b=";
        for (std::size_t i = 0; i < digits.size(); ++i) label += (i ? "." : "") + std::to_string(digits[i]);
        if (!rest.empty()) label += ";" + assignment_string(rest, zbar);

        const std::string key = describe(leaf);
        auto it = index_of.find(key);
        if (it != index_of.end()) {
          auto& existing = node.children[it->second];
          existing.weight += weight;
          ++existing.merged;
          continue;
        }
        FixingNode child;
        child.kind = FixingCase::Leaf;
        child.fixing = label;
        child.weight = weight;
        child.locality = leaf.locality();
        child.leaf = std::move(leaf);
        index_of.emplace(key, node.children.size());
        node.children.push_back(std::move(child));
      }
      std::size_t i = 0;
      while (i < digits.size() && ++digits[i] == radix[i]) digits[i++] = 0;
      done = i == digits.size();
    }
  }
};

void collect_leaves(const FixingNode& node, const Rational& weight, const std::string& path,
                    std::vector<WeightedNobf>& out) {
  const Rational w = weight * node.weight;
  std::string p = path;
  if (!node.fixing.empty()) p += (p.empty() ? "" : "/") + node.fixing;
  if (node.leaf) out.push_back({w, p, *node.leaf});
  for (const auto& c : node.children) collect_leaves(c, w, p, out);
}

void sort_and_merge(std::vector<WeightedNobf>& parts) {
  std::map<std::string, WeightedNobf> merged;
  for (auto& p : parts) {
    auto key = describe(p.source);
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(std::move(key), std::move(p));
    } else {
      it->second.weight += p.weight;
    }
  }
  parts.clear();
  for (auto& [k, v] : merged) parts.push_back(std::move(v));
}

}  // namespace

std::vector<WeightedNobf> FixingTree::leaves() const {
  std::vector<WeightedNobf> out;
  collect_leaves(root, Rational(1), "", out);
  std::sort(out.begin(), out.end(), [](const WeightedNobf& a, const WeightedNobf& b) { return a.path < b.path; });
  return out;
}

FixingTree local_to_biased_nobf(const LocalSource& source, int target, const Caps& caps) {
  source.validate();
  if (target < 1) throw InputError("target good-bit count must be at least 1");
  if (source.m > caps.dist_bits) throw CapExceeded("local source seed length exceeds the distribution cap");
  FixingTree tree;
  tree.source = source;
  tree.target = target;
  tree.root = Builder{target, caps}.build(source, "", Rational(1));
  return tree;
}

DebiasResult debias_nobf(const NobfSource& source, const Caps& caps) {
  source.validate();
  if (source.k() > caps.dist_bits) throw CapExceeded("debiasing enumerates 2^k components");
  DebiasResult result;
  result.guarantee.mu = 0;
  for (const auto& b : source.biases) result.guarantee.mu += Rational(2) - 2 * b.p;
  result.guarantee.k_prime = result.guarantee.mu / 4;
  result.guarantee.epsilon = std::exp2(-to_double(result.guarantee.k_prime));

  const int k = source.k();
  for (Point b = 0; b < (Point{1} << k); ++b) {
    Rational w = 1;
    for (int i = 0; i < k && w != 0; ++i) {
      const Rational& p = source.biases[static_cast<std::size_t>(i)].p;
      w *= bit(b, i) ? Rational(2) - 2 * p : 2 * p - 1;
    }
    if (w == 0) continue;

    std::vector<int> new_ordinal(static_cast<std::size_t>(k), -1);
    NobfSource c;
    c.n = source.n;
    for (int i = 0; i < k; ++i) {
      if (!bit(b, i)) continue;
      new_ordinal[static_cast<std::size_t>(i)] = c.k();
      c.good_positions.push_back(source.good_positions[static_cast<std::size_t>(i)]);
      c.biases.emplace_back();
    }
    for (int i = 0; i < k; ++i) {
      if (bit(b, i)) continue;
      c.bad.push_back({source.good_positions[static_cast<std::size_t>(i)],
                       constant_junta(source.biases[static_cast<std::size_t>(i)].favored == 1)});
    }
    for (const auto& bad : source.bad) {
      Junta j = bad.function;
      for (int i = 0; i < k; ++i) {
        if (!bit(b, i)) j = j.restrict(i, source.biases[static_cast<std::size_t>(i)].favored == 1);
      }
      for (auto& s : j.support) s = new_ordinal[static_cast<std::size_t>(s)];
      c.bad.push_back({bad.position, j});
    }
    std::sort(c.bad.begin(), c.bad.end());
    c.validate();
    result.components.push_back({w, point_to_string(b, k), std::move(c)});
  }
  return result;
}

LocalToNobfResult local_to_nobf(const LocalSource& source, int target, const LocalToNobfOptions& options,
                                const Caps& caps) {
  LocalToNobfResult result;
  result.tree = local_to_biased_nobf(source, target, caps);
  bool first = true;
  for (const auto& leaf : result.tree.leaves()) {
    auto debiased = debias_nobf(leaf.source, caps);
    if (first || debiased.guarantee.mu < result.guarantee.mu) result.guarantee = debiased.guarantee;
    first = false;
    for (auto& c : debiased.components) {
      result.components.push_back({leaf.weight * c.weight, leaf.path + "/" + c.path, std::move(c.source)});
    }
  }
  sort_and_merge(result.components);

  if (options.truncate) {
    std::vector<WeightedNobf> kept;
    for (auto& c : result.components) {
      if (Rational(c.source.k()) < result.guarantee.k_prime) {
        result.dropped_weight += c.weight;
      } else {
        kept.push_back(std::move(c));
      }
    }
    if (kept.empty()) throw InputError("truncation would drop every component");
    const Rational keep = Rational(1) - result.dropped_weight;
    for (auto& c : kept) c.weight /= keep;
    result.components = std::move(kept);
    result.truncated = true;
  }
  return result;
}

NobfSource nobf_witness_for_disperser(const LocalSource& source, int target, const Caps& caps) {
  auto tree = local_to_biased_nobf(source, target, caps);
  for (const auto& leaf : tree.leaves()) {
    if (leaf.source.k() < target) continue;
    NobfSource witness = leaf.source.unbiased();
    auto original = exact_distribution(source, caps);
    for (Point x : exact_distribution(witness, caps).support()) {
      if (!original.contains(x)) throw std::logic_error("witness support escapes the source support");
    }
    return witness;
  }
  throw InputError("no leaf of the reduction has " + std::to_string(target) + " good bits");
}

ConvexCombination to_combination(const std::vector<WeightedNobf>& parts) {
  ConvexCombination combo;
  for (const auto& p : parts) combo.components.push_back({p.weight, p.source});
  return combo;
}

Rational verify_decomposition(const LocalSource& original, const ConvexCombination& combo, const Caps& caps) {
  return statistical_distance(exact_distribution(original, caps), mixture(combo, caps));
}

}  // namespace loclab
