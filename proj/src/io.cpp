#include "loclab/io.hpp"

#include <sstream>

#include "loclab/error.hpp"

namespace loclab {

namespace {

std::string table_string(const std::vector<std::uint8_t>& table) {
  std::string s;
  for (auto v : table) s.push_back(v ? '1' : '0');
  return s;
}

std::vector<std::uint8_t> parse_table(const std::string& s) {
  std::vector<std::uint8_t> t;
  for (char c : s) {
    if (c != '0' && c != '1') throw InputError("table bitstring may only contain 0 and 1");
    t.push_back(c == '1' ? 1 : 0);
  }
  return t;
}

Junta junta_from_json(const Json& j) {
  Junta out;
  out.support = j.at("support").get<std::vector<int>>();
  out.table = parse_table(j.at("table").get<std::string>());
  if (out.table.size() != (std::size_t{1} << out.support.size())) {
    throw InputError("table length must be 2^|support|");
  }
  return out;
}

int get_int(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("source description lacks \"") + key + "\"");
  return j.at(key).get<int>();
}

}  // namespace

Json rational_json(const Rational& q) { return Json{{"exact", to_string(q)}, {"approx", to_double(q)}}; }

Json junta_to_json(const Junta& j) { return Json{{"support", j.support}, {"table", table_string(j.table)}}; }

Json nobf_to_json(const NobfSource& s) {
  Json biases = Json::array();
  for (const auto& b : s.biases) biases.push_back(Json::array({to_string(b.p), b.favored}));
  Json outputs = Json::array();
  for (const auto& b : s.bad) outputs.push_back(junta_to_json(b.function));
  return Json{{"type", "nobf"}, {"n", s.n}, {"good", s.good_positions}, {"biases", biases}, {"outputs", outputs}};
}

Json source_to_json(const Source& source) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LocalSource>) {
          Json outputs = Json::array();
          for (const auto& o : s.outputs) outputs.push_back(junta_to_json(o));
          return Json{{"type", "local"}, {"m", s.m}, {"outputs", outputs}};
        } else if constexpr (std::is_same_v<T, NobfSource>) {
          return nobf_to_json(s);
        } else {
          Json basis = Json::array();
          for (Point v : s.basis) basis.push_back(point_to_string(v, s.n));
          return Json{{"type", "affine"}, {"n", s.n}, {"shift", point_to_string(s.shift, s.n)}, {"basis", basis}};
        }
      },
      source);
}

Source source_from_json(const Json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    if (type == "local") {
      LocalSource s;
      s.m = get_int(j, "m");
      for (const auto& o : j.at("outputs")) s.outputs.push_back(junta_from_json(o));
      s.validate();
      return s;
    }
    if (type == "nobf") {
      NobfSource s;
      s.n = get_int(j, "n");
      s.good_positions = j.at("good").get<std::vector<int>>();
      if (j.contains("biases")) {
        for (const auto& b : j.at("biases")) {
          if (!b.is_array() || b.size() != 2) throw InputError("bias entries are [\"num/den\", favored]");
          s.biases.push_back({parse_rational(b[0].get<std::string>()), b[1].get<int>()});
        }
      } else {
        s.biases.resize(s.good_positions.size());
      }
      std::vector<bool> good(static_cast<std::size_t>(std::max(s.n, 0)), false);
      for (int p : s.good_positions) {
        if (p < 0 || p >= s.n) throw InputError("good position out of range");
        good[static_cast<std::size_t>(p)] = true;
      }
      const auto& outputs = j.at("outputs");
      std::size_t next = 0;
      for (int pos = 0; pos < s.n; ++pos) {
        if (good[static_cast<std::size_t>(pos)]) continue;
        if (next >= outputs.size()) throw InputError("one output per non-good position required");
        s.bad.push_back({pos, junta_from_json(outputs[next++])});
      }
      if (next != outputs.size()) throw InputError("one output per non-good position required");
      s.validate();
      return s;
    }
    if (type == "affine") {
      AffineSubspace s;
      s.n = get_int(j, "n");
      s.shift = j.contains("shift") ? parse_point(j.at("shift").get<std::string>(), s.n) : 0;
      for (const auto& v : j.at("basis")) s.basis.push_back(parse_point(v.get<std::string>(), s.n));
      s.validate();
      return s;
    }
    if (type == "clique") return clique_source(get_int(j, "k"));
    throw InputError("unknown source type \"" + type + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed source description: ") + e.what());
  }
}

Source parse_source(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  return source_from_json(j);
}

namespace {

Json node_to_json(const FixingNode& node) {
  Json j{{"case", to_string(node.kind)},
         {"fixing", node.fixing},
         {"weight", to_string(node.weight)},
         {"locality", node.locality}};
  if (node.kind == FixingCase::CaseI || node.kind == FixingCase::CaseII) {
    j["good_outputs"] = node.good_outputs;
    j["fixed_seeds"] = node.fixed_seeds;
  }
  if (node.kind == FixingCase::CaseI) j["entropy_drop"] = node.entropy_drop;
  if (node.leaf) {
    j["leaf"] = nobf_to_json(*node.leaf);
    if (node.merged > 1) j["merged"] = node.merged;
  }
  if (!node.children.empty()) {
    Json children = Json::array();
    for (const auto& c : node.children) children.push_back(node_to_json(c));
    j["children"] = children;
  }
  return j;
}

}  // namespace

Json fixing_tree_to_json(const FixingTree& tree) {
  return Json{{"source", source_to_json(tree.source)}, {"target", tree.target}, {"root", node_to_json(tree.root)}};
}

Json weighted_to_json(const WeightedNobf& w) {
  return Json{{"weight", to_string(w.weight)}, {"path", w.path}, {"k", w.source.k()}, {"source", nobf_to_json(w.source)}};
}

Json caps_to_json(const Caps& caps) {
  return Json{{"table_vars", caps.table_vars},       {"dist_bits", caps.dist_bits},
              {"family", caps.family},               {"max_weight", caps.max_weight},
              {"max_combinations", caps.max_combinations}, {"search_nodes", caps.search_nodes}};
}

Json survey_to_json(const SurveyReport& report) {
  Json q = Json::array();
  for (const auto& x : report.quantiles) q.push_back(Json{{"p", x.p}, {"value", rational_json(x.value)}});
  Json values = Json::array();
  for (const auto& v : report.values) values.push_back(to_string(v));
  return Json{{"kind", report.kind}, {"n", report.n},          {"r", report.r},          {"seed", report.seed},
              {"trials", report.values.size()}, {"quantiles", q}, {"values", values}};
}

std::string survey_to_csv(const SurveyReport& report) {
  std::ostringstream out;
  out << "trial,poly_seed," << report.kind << "," << report.kind << "_approx\n";
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    out << i << "," << report.poly_seeds[i] << "," << to_string(report.values[i]) << "," << to_double(report.values[i])
        << "\n";
  }
  return out.str();
}

}  // namespace loclab
