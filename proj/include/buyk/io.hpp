#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "buyk/core.hpp"
#include "buyk/menugap.hpp"

namespace buyk {

/**
 * Instance document:
 *
 *   {
 *     "menus":     [[{"alloc": ["1", "0"], "price": "2"}, ...], ...],   optional
 *     "n":         2,
 *     "sequences": {"Q": [[...], ...], "X": [[...], ...]},              optional
 *     "support":   [{"prob": "1/3", "values": ["2", "0"]}, ...]
 *   }
 *
 * Rationals are strings ("p/q" or integers). Q lists q_0 = 0^n first. The
 * canonical form has sorted keys, two-space indentation and a trailing
 * newline.
 */
struct InstanceFile {
  std::size_t n = 0;
  DiscreteDistribution distribution;
  std::vector<Menu> menus;
  std::optional<SequencePair> sequences;
};

/// Schema or syntax problem, with the JSON pointer (or line/column) where
/// it was found.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string location, const std::string& message)
      : std::runtime_error(location + ": " + message), location_(std::move(location)) {}

  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

namespace detail {

using nlohmann::json;

inline void allow_keys(const json& obj, const std::string& at, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ParseError(at.empty() ? "/" : at, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ParseError(at + "/" + key, "unknown field");
  }
}

inline const json& require(const json& obj, const std::string& at, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(at + "/" + key, "missing field");
  return *it;
}

inline Rational parse_rational(const json& j, const std::string& at) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw ParseError(at, "expected a rational string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(at, e.what());
  }
}

inline std::vector<Rational> parse_vector(const json& j, const std::string& at, std::size_t n) {
  if (!j.is_array()) throw ParseError(at, "expected an array");
  if (j.size() != n)
    throw ParseError(at, "dimension mismatch: " + std::to_string(j.size()) + " values, n = " + std::to_string(n));
  std::vector<Rational> out;
  out.reserve(n);
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_rational(j[i], at + "/" + std::to_string(i)));
  return out;
}

inline void check_diagnostics(const Diagnostics& diags, const std::string& at) {
  if (!diags.empty()) throw ParseError(at, diags.front());
}

inline json vector_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(c.str());
  return out;
}

}  // namespace detail

inline InstanceFile parse_instance(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column), e.what());
  }
  detail::allow_keys(doc, "", {"n", "support", "menus", "sequences"});

  InstanceFile f;
  const json& n = detail::require(doc, "", "n");
  if (!n.is_number_unsigned() || n.get<std::size_t>() == 0) throw ParseError("/n", "expected a positive integer");
  f.n = n.get<std::size_t>();
  f.distribution.n = f.n;

  const json& support = detail::require(doc, "", "support");
  if (!support.is_array()) throw ParseError("/support", "expected an array");
  std::set<Valuation> seen;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const std::string at = "/support/" + std::to_string(i);
    detail::allow_keys(support[i], at, {"values", "prob"});
    Valuation v{detail::parse_vector(detail::require(support[i], at, "values"), at + "/values", f.n)};
    Rational p = detail::parse_rational(detail::require(support[i], at, "prob"), at + "/prob");
    if (!seen.insert(v).second) throw ParseError(at, "duplicate support type");
    f.distribution.support.push_back({std::move(v), std::move(p)});
  }
  detail::check_diagnostics(validate(f.distribution), "/support");

  if (const auto it = doc.find("menus"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("/menus", "expected an array of menus");
    for (std::size_t m = 0; m < it->size(); ++m) {
      const std::string at = "/menus/" + std::to_string(m);
      const json& entries = (*it)[m];
      if (!entries.is_array()) throw ParseError(at, "expected an array of entries");
      Menu menu{f.n, {}};
      for (std::size_t e = 0; e < entries.size(); ++e) {
        const std::string eat = at + "/" + std::to_string(e);
        detail::allow_keys(entries[e], eat, {"price", "alloc"});
        Rational price = detail::parse_rational(detail::require(entries[e], eat, "price"), eat + "/price");
        Allocation alloc{detail::parse_vector(detail::require(entries[e], eat, "alloc"), eat + "/alloc", f.n)};
        menu.entries.push_back({std::move(price), std::move(alloc)});
      }
      detail::check_diagnostics(validate(menu), at);
      f.menus.push_back(std::move(menu));
    }
  }

  if (const auto it = doc.find("sequences"); it != doc.end()) {
    detail::allow_keys(*it, "/sequences", {"X", "Q"});
    const json& xs = detail::require(*it, "/sequences", "X");
    const json& qs = detail::require(*it, "/sequences", "Q");
    if (!xs.is_array()) throw ParseError("/sequences/X", "expected an array");
    if (!qs.is_array()) throw ParseError("/sequences/Q", "expected an array");
    SequencePair s{f.n, {}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i)
      s.X.push_back({detail::parse_vector(xs[i], "/sequences/X/" + std::to_string(i), f.n)});
    for (std::size_t i = 0; i < qs.size(); ++i)
      s.Q.push_back({detail::parse_vector(qs[i], "/sequences/Q/" + std::to_string(i), f.n)});
    detail::check_diagnostics(validate(s), "/sequences");
    f.sequences = std::move(s);
  }
  return f;
}

inline std::string serialize_instance(const InstanceFile& f) {
  using detail::json;
  json doc = json::object();
  doc["n"] = f.n;
  json support = json::array();
  for (const auto& a : f.distribution.support)
    support.push_back({{"prob", a.prob.str()}, {"values", detail::vector_json(a.type.values)}});
  doc["support"] = std::move(support);
  if (!f.menus.empty()) {
    json menus = json::array();
    for (const auto& m : f.menus) {
      json entries = json::array();
      for (const auto& e : m.entries)
        entries.push_back({{"alloc", detail::vector_json(e.alloc.coords)}, {"price", e.price.str()}});
      menus.push_back(std::move(entries));
    }
    doc["menus"] = std::move(menus);
  }
  if (f.sequences.has_value()) {
    json xs = json::array();
    json qs = json::array();
    for (const auto& x : f.sequences->X) xs.push_back(detail::vector_json(x.values));
    for (const auto& q : f.sequences->Q) qs.push_back(detail::vector_json(q.coords));
    doc["sequences"] = {{"Q", std::move(qs)}, {"X", std::move(xs)}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace buyk
