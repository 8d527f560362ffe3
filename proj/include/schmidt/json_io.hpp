#pragma once

#include <json.hpp>

#include "schmidt/cantor.hpp"
#include "schmidt/contfrac.hpp"
#include "schmidt/enclosure.hpp"
#include "schmidt/interval.hpp"

namespace schmidt {

using Json = nlohmann::json;

inline Json to_json(const Rational& r) { return r.str(); }
inline Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw ConfigError("expected a \"p/q\" string, got " + j.dump());
  return parse_rational(j.get<std::string>());
}

inline Json to_json(const Interval& I) { return Json::array({I.lo.str(), I.hi.str()}); }
inline Interval interval_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("expected an interval pair, got " + j.dump());
  return {rational_from_json(j[0]), rational_from_json(j[1])};
}

inline Json to_json(const Enclosure& e) { return Json::array({e.lo.str(), e.hi.str()}); }
inline Enclosure enclosure_from_json(const Json& j) {
  Interval I = interval_from_json(j);
  return {I.lo, I.hi};
}

inline Json to_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (auto& x : v) a.push_back(x.str());
  return a;
}
inline std::vector<Rational> rationals_from_json(const Json& j) {
  std::vector<Rational> v;
  for (auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

inline Json to_json(const CFWord& w) {
  Json a = Json::array();
  for (auto& q : w.quotients) a.push_back(q.get_str());
  return Json{{"a0", w.a0.get_str()}, {"quotients", a}};
}
inline CFWord cfword_from_json(const Json& j) {
  CFWord w;
  w.a0 = Integer(j.at("a0").get<std::string>());
  for (auto& q : j.at("quotients")) w.quotients.emplace_back(q.get<std::string>());
  return w;
}

}  // namespace schmidt
