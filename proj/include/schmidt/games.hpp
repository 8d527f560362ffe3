#pragma once

// Absolute and potential games played with exact balls and obstacles, with
// per-move legality predicates, a backtracking match driver and transcript
// replay.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "schmidt/enclosure.hpp"
#include "schmidt/interval.hpp"
#include "schmidt/json_io.hpp"

namespace schmidt {

// Closed ball in R^d under the sup norm (d = 1: closed interval).
struct Ball {
  std::vector<Rational> center;
  Rational radius;

  Ball() = default;
  Ball(std::vector<Rational> c, Rational r) : center(std::move(c)), radius(std::move(r)) {
    if (radius.sign() < 0) throw DomainError("negative radius");
  }
  Ball(const Interval& I) : center{I.center()}, radius(I.radius()) {}  // NOLINT

  std::size_t dim() const { return center.size(); }
  Interval interval() const {
    if (dim() != 1) throw DomainError("interval view of a ball of dimension " + std::to_string(dim()));
    return Interval::ball(center[0], radius);
  }
  Interval side(std::size_t axis) const { return Interval::ball(center[axis], radius); }
  bool contains(const Ball& o) const {
    if (o.dim() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
      if (abs(o.center[i] - center[i]) + o.radius > radius) return false;
    return true;
  }
  bool contains_point(const std::vector<Rational>& x) const {
    for (std::size_t i = 0; i < dim(); ++i)
      if (abs(x[i] - center[i]) > radius) return false;
    return true;
  }
  friend bool operator==(const Ball&, const Ball&) = default;
  std::string str() const {
    if (dim() == 1) return interval().str();
    std::string s = "B((";
    for (std::size_t i = 0; i < dim(); ++i) s += (i ? ", " : "") + center[i].str();
    return s + "), " + radius.str() + ")";
  }
};

struct PointCarrier {
  std::vector<Rational> p;
};

// {x : a . x = b}
struct HyperplaneCarrier {
  std::vector<Rational> a;
  Rational b;
};

struct Obstacle {
  std::variant<PointCarrier, HyperplaneCarrier> carrier;
  Rational thickness;
  long turn = -1;
  std::vector<int> origin;  // sub-strategy path inside combined strategies
  std::string tag;

  static Obstacle point(std::vector<Rational> p, Rational r, std::string tag = {}) {
    Obstacle o;
    o.carrier = PointCarrier{std::move(p)};
    o.thickness = std::move(r);
    o.tag = std::move(tag);
    return o;
  }
  static Obstacle point(const Interval& hull, std::string tag = {}) {
    return point({hull.center()}, hull.radius(), std::move(tag));
  }
  static Obstacle hyperplane(std::vector<Rational> a, Rational b, Rational r, std::string tag = {}) {
    Obstacle o;
    o.carrier = HyperplaneCarrier{std::move(a), std::move(b)};
    o.thickness = std::move(r);
    o.tag = std::move(tag);
    return o;
  }

  bool is_point() const { return std::holds_alternative<PointCarrier>(carrier); }
  std::size_t dim() const {
    return is_point() ? std::get<PointCarrier>(carrier).p.size() : std::get<HyperplaneCarrier>(carrier).a.size();
  }
  // Thickened set of a point obstacle in d = 1.
  Interval hull() const {
    const auto& p = std::get<PointCarrier>(carrier).p;
    return Interval::ball(p.at(0), thickness);
  }

  // Scaled sup-distance from x to the carrier, as (numerator, scale) with
  // distance = numerator / scale.
  std::pair<Rational, Rational> carrier_distance(const std::vector<Rational>& x) const {
    if (is_point()) {
      const auto& p = std::get<PointCarrier>(carrier).p;
      Rational m = 0;
      for (std::size_t i = 0; i < p.size(); ++i) m = max(m, abs(x[i] - p[i]));
      return {m, Rational(1)};
    }
    const auto& h = std::get<HyperplaneCarrier>(carrier);
    Rational dot = -h.b, norm1 = 0;
    for (std::size_t i = 0; i < h.a.size(); ++i) {
      dot += h.a[i] * x[i];
      norm1 += abs(h.a[i]);
    }
    return {abs(dot), norm1};
  }

  // Closed-set intersection with a ball.
  bool meets(const Ball& B) const {
    auto [d, s] = carrier_distance(B.center);
    return d <= (B.radius + thickness) * s;
  }
  // Distance between B and the thickened set (0 when they meet).
  Rational gap_to(const Ball& B) const {
    auto [d, s] = carrier_distance(B.center);
    Rational g = d / s - B.radius - thickness;
    return g.sign() > 0 ? g : Rational(0);
  }
  // B entirely inside the thickened set.
  bool covers(const Ball& B) const {
    auto [d, s] = carrier_distance(B.center);
    return d / s + B.radius <= thickness;
  }
};

enum class GameKind { Absolute, Potential };
enum class ObstacleClass { Points, Hyperplanes };

struct GameParams {
  GameKind kind = GameKind::Absolute;
  Rational alpha, beta, rho;
  long k = 1;
  Rational c = 0;
  ObstacleClass obstacles = ObstacleClass::Points;
  std::size_t dimension = 1;

  static GameParams absolute(Rational a, Rational b, Rational r, long k, std::size_t d = 1) {
    GameParams p;
    p.kind = GameKind::Absolute;
    p.alpha = std::move(a), p.beta = std::move(b), p.rho = std::move(r), p.k = k, p.dimension = d;
    p.validate();
    return p;
  }
  static GameParams potential(Rational a, Rational b, Rational c, Rational r,
                              ObstacleClass cls = ObstacleClass::Points, std::size_t d = 1) {
    GameParams p;
    p.kind = GameKind::Potential;
    p.alpha = std::move(a), p.beta = std::move(b), p.c = std::move(c), p.rho = std::move(r);
    p.obstacles = cls, p.dimension = d;
    p.validate();
    return p;
  }
  void validate() const {
    if (alpha.sign() <= 0 || beta.sign() <= 0 || rho.sign() <= 0)
      throw ConfigError("game parameters need alpha, beta, rho > 0");
    if (beta >= Rational(1)) throw ConfigError("beta must be < 1");
    if (kind == GameKind::Absolute && k < 1) throw ConfigError("absolute game needs k >= 1");
    if (kind == GameKind::Potential && c.sign() < 0) throw ConfigError("potential game needs c >= 0");
    if (dimension != 1 && dimension != 2) throw ConfigError("dimension must be 1 or 2");
  }
  friend bool operator==(const GameParams&, const GameParams&) = default;
  std::string str() const {
    if (kind == GameKind::Absolute)
      return "absolute(alpha=" + alpha.str() + ", beta=" + beta.str() + ", rho=" + rho.str() +
             ", k=" + std::to_string(k) + ")";
    return "potential(alpha=" + alpha.str() + ", beta=" + beta.str() + ", c=" + c.str() + ", rho=" + rho.str() + ")";
  }
};

struct Verdict {
  bool legal = true;
  std::string rule;  // identifier of the violated rule, empty when legal
  std::string detail;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline Verdict legal() { return {}; }
inline Verdict illegal(std::string rule, std::string detail) { return {false, std::move(rule), std::move(detail)}; }

enum class MatchStatus { InProgress, BobStuck, DepthReached, Aborted };

inline const char* to_string(MatchStatus s) {
  switch (s) {
    case MatchStatus::InProgress: return "InProgress";
    case MatchStatus::BobStuck: return "BobStuck";
    case MatchStatus::DepthReached: return "DepthReached";
    default: return "Aborted";
  }
}

struct Transcript {
  GameParams params;
  std::vector<Ball> bob;
  std::vector<std::vector<Obstacle>> alice;
  std::vector<std::vector<std::string>> alice_notes;
  std::vector<Verdict> verdicts;  // interleaved B0, A0, B1, A1, ...
  MatchStatus status = MatchStatus::InProgress;

  std::vector<Obstacle> ledger() const {
    std::vector<Obstacle> all;
    for (auto& a : alice) all.insert(all.end(), a.begin(), a.end());
    return all;
  }
};

// sum_i t_i^c <= b^c, exact whenever possible, otherwise by refined
// enclosures. Returns nullopt when no enclosure precision decides it.
inline std::optional<bool> power_sum_leq(const std::vector<Rational>& t, const Rational& b, const Rational& c) {
  if (t.empty()) return true;
  if (c.is_zero()) return Rational(static_cast<long>(t.size())) <= Rational(1);
  if (c.is_integer()) {
    long e = c.num().get_si();
    Rational s = 0;
    for (auto& x : t) s += pow(x, e);
    return s <= pow(b, e);
  }
  bool all_equal = true;
  for (auto& x : t) all_equal = all_equal && x == t[0];
  if (all_equal) {
    // n t^c <= b^c  <=>  n^v t^u <= b^u  for c = u/v
    if (t[0].is_zero()) return true;
    long u = c.num().get_si();
    unsigned long v = c.den().get_ui();
    Rational n(static_cast<long>(t.size()));
    return pow(n, static_cast<long>(v)) * pow(t[0], u) <= pow(b, u);
  }
  for (long bits : {96L, 256L, 768L}) {
    Enclosure s = Rational(0);
    for (auto& x : t)
      if (!x.is_zero()) s = s + pow_enc(x, c, bits);
    Enclosure rhs = b.is_zero() ? Enclosure(Rational(0)) : pow_enc(b, c, bits);
    if (s.hi <= rhs.lo) return true;
    if (s.lo > rhs.hi) return false;
  }
  return std::nullopt;
}

inline Verdict validate_bob_move(const GameParams& P, const Transcript& T, const Ball& B) {
  if (B.dim() != P.dimension) return illegal("bob.dimension", "ball dimension differs from the game dimension");
  if (T.bob.empty()) {
    if (B.radius < P.rho) return illegal("bob.first_radius", "radius " + B.radius.str() + " < rho " + P.rho.str());
    return legal();
  }
  const Ball& prev = T.bob.back();
  if (B.radius < P.beta * prev.radius)
    return illegal("bob.radius_ratio", "radius " + B.radius.str() + " < beta * " + prev.radius.str());
  if (!prev.contains(B)) return illegal("bob.containment", B.str() + " not inside " + prev.str());
  if (P.kind == GameKind::Absolute && T.alice.size() == T.bob.size()) {
    for (auto& A : T.alice.back())
      if (A.meets(B)) return illegal("bob.avoidance", B.str() + " meets an obstacle deleted on the previous turn");
  }
  return legal();
}

inline Verdict validate_alice_move(const GameParams& P, const Transcript& T, const std::vector<Obstacle>& A) {
  if (T.bob.empty() || T.alice.size() >= T.bob.size()) return illegal("alice.turn_order", "it is not Alice's turn");
  const Rational& rm = T.bob.back().radius;
  Rational cap = P.alpha * rm;
  for (auto& o : A) {
    if (o.dim() != P.dimension) return illegal("alice.dimension", "obstacle dimension differs from the game");
    if (o.thickness.sign() < 0) return illegal("alice.thickness", "negative thickness");
    if (P.obstacles == ObstacleClass::Points && !o.is_point())
      return illegal("alice.class", "hyperplane obstacle in a point game");
  }
  if (P.kind == GameKind::Absolute) {
    if (static_cast<long>(A.size()) > P.k)
      return illegal("alice.count", std::to_string(A.size()) + " balls > k = " + std::to_string(P.k));
    for (auto& o : A) {
      if (!o.is_point()) return illegal("alice.class", "absolute game deletes balls");
      if (o.thickness > cap) return illegal("alice.radius", "radius " + o.thickness.str() + " > alpha*rho_m = " + cap.str());
    }
    return legal();
  }
  if (P.c.is_zero()) {
    if (A.size() > 1) return illegal("alice.single", "c = 0 allows a single obstacle, got " + std::to_string(A.size()));
    if (!A.empty() && A[0].thickness > cap)
      return illegal("alice.thickness", "thickness " + A[0].thickness.str() + " > alpha*rho_m = " + cap.str());
    return legal();
  }
  std::vector<Rational> t;
  for (auto& o : A) t.push_back(o.thickness);
  auto ok = power_sum_leq(t, cap, P.c);
  if (!ok) return illegal("alice.budget_undecided", "could not decide sum thi^c <= (alpha rho_m)^c");
  if (!*ok) return illegal("alice.budget", "sum thi^c exceeds (alpha rho_m)^c with c = " + P.c.str());
  return legal();
}

struct AliceMove {
  std::vector<Obstacle> obstacles;
  std::vector<std::string> notes;
};

struct AliceStrategy {
  std::function<AliceMove(const Transcript&)> respond;
  GameParams declared;
  std::string target;
};

struct DecayContract {
  long window = 1;
  Rational factor = Rational(1, 2);
};

struct BobStrategy {
  // Ordered candidates for the next ball given the transcript so far and the
  // obstacles still meeting the current ball.
  std::function<std::vector<Ball>(const Transcript&, const std::vector<Obstacle>&)> candidates;
  DecayContract decay;
  long backtrack_levels = 8;
  long retry_cap = 200000;
  bool clear_final = true;  // the last ball must avoid the whole ledger
  std::string name;
};

struct MatchResult {
  Transcript transcript;
  Ball enclosure;
  std::vector<Obstacle> ledger;
  bool cleared = false;
  long backtracks = 0;
  long nodes = 0;
  std::string diagnostic;
};

inline bool is_cleared(const Ball& B, const std::vector<Obstacle>& ledger) {
  for (auto& o : ledger)
    if (o.meets(B)) return false;
  return true;
}

Json to_json(const Obstacle& o);

// Bob plays turns 0..depth, Alice answers turns 0..depth-1. Bob's candidate
// lists are searched depth-first with bounded backtracking.
inline MatchResult run_match(const GameParams& P, const AliceStrategy& alice, const BobStrategy& bob, long depth) {
  MatchResult res;
  Transcript& T = res.transcript;
  T.params = P;
  struct Frame {
    std::vector<Ball> cands;
    std::size_t next = 0;
    std::vector<Obstacle> active;  // obstacles meeting the parent ball
  };
  std::vector<Frame> stack;
  stack.push_back({bob.candidates(T, {}), 0, {}});
  long deepest = 0;
  auto abort_with = [&](const std::string& why) {
    T.status = MatchStatus::Aborted;
    res.diagnostic = why;
    res.ledger = T.ledger();
    if (!T.bob.empty()) res.enclosure = T.bob.back();
    return res;
  };
  while (true) {
    Frame& f = stack.back();
    long m = static_cast<long>(stack.size()) - 1;
    if (f.next >= f.cands.size()) {
      // dead end: undo Bob's previous ball and Alice's answer to it
      if (m == 0 || deepest - (m - 1) > bob.backtrack_levels || res.backtracks >= bob.retry_cap) {
        T.status = MatchStatus::BobStuck;
        res.diagnostic = "no legal continuation at turn " + std::to_string(m) + " (deepest turn reached " +
                         std::to_string(deepest) + ", backtracks " + std::to_string(res.backtracks) + ")";
        res.ledger = T.ledger();
        if (!T.bob.empty()) res.enclosure = T.bob.back();
        for (auto& o : f.active) res.diagnostic += "\n  blocking: " + to_json(o).dump();
        return res;
      }
      stack.pop_back();
      T.bob.pop_back();
      T.alice.pop_back();
      T.alice_notes.pop_back();
      T.verdicts.resize(T.verdicts.size() - 2);
      ++res.backtracks;
      continue;
    }
    Ball B = f.cands[f.next++];
    ++res.nodes;
    Verdict vb = validate_bob_move(P, T, B);
    if (!vb.legal) return abort_with("Bob strategy proposed an illegal ball " + B.str() + ": " + vb.rule + " " + vb.detail);
    T.bob.push_back(B);
    T.verdicts.push_back(vb);
    deepest = std::max(deepest, m);
    std::vector<Obstacle> active;
    for (auto& o : f.active)
      if (o.meets(B)) active.push_back(o);
    if (m == depth) {
      if (bob.clear_final && !active.empty()) {
        T.bob.pop_back();
        T.verdicts.pop_back();
        continue;
      }
      T.status = MatchStatus::DepthReached;
      res.enclosure = B;
      res.ledger = T.ledger();
      res.cleared = is_cleared(B, res.ledger);
      return res;
    }
    AliceMove am = alice.respond(T);
    for (auto& o : am.obstacles) o.turn = m;
    Verdict va = validate_alice_move(P, T, am.obstacles);
    if (!va.legal) {
      T.alice.push_back(am.obstacles);
      T.alice_notes.push_back(am.notes);
      T.verdicts.push_back(va);
      return abort_with("Alice strategy produced an illegal move at turn " + std::to_string(m) + ": " + va.rule + " " +
                        va.detail);
    }
    T.alice.push_back(am.obstacles);
    T.alice_notes.push_back(am.notes);
    T.verdicts.push_back(va);
    for (auto& o : am.obstacles)
      if (o.meets(B)) active.push_back(o);
    stack.push_back({bob.candidates(T, active), 0, active});
  }
}

// Re-validate a recorded transcript move by move.
inline std::vector<Verdict> replay(const Transcript& T) {
  Transcript t;
  t.params = T.params;
  std::vector<Verdict> out;
  for (std::size_t m = 0; m < T.bob.size(); ++m) {
    out.push_back(validate_bob_move(T.params, t, T.bob[m]));
    t.bob.push_back(T.bob[m]);
    if (m < T.alice.size()) {
      out.push_back(validate_alice_move(T.params, t, T.alice[m]));
      t.alice.push_back(T.alice[m]);
    }
  }
  return out;
}

// Radii shrink by at least `factor` over every window of `window` turns.
inline bool radius_decay_certified(const Transcript& T, const DecayContract& dc) {
  if (dc.factor >= Rational(1) || dc.window < 1) return false;
  auto w = static_cast<std::size_t>(dc.window);
  if (T.bob.size() <= w) return false;
  for (std::size_t i = 0; i + w < T.bob.size(); ++i)
    if (T.bob[i + w].radius > dc.factor * T.bob[i].radius) return false;
  return true;
}

inline bool radius_decay_certified(const MatchResult& r, const DecayContract& dc) {
  return radius_decay_certified(r.transcript, dc);
}

// ---- serialization ----

inline Json to_json(const Ball& B) { return Json{{"center", to_json(B.center)}, {"radius", B.radius.str()}}; }
inline Ball ball_from_json(const Json& j) {
  return Ball(rationals_from_json(j.at("center")), rational_from_json(j.at("radius")));
}

inline Json to_json(const Obstacle& o) {
  Json j{{"thickness", o.thickness.str()}, {"turn", o.turn}, {"origin", o.origin}};
  if (!o.tag.empty()) j["tag"] = o.tag;
  if (o.is_point()) {
    j["kind"] = "point";
    j["point"] = to_json(std::get<PointCarrier>(o.carrier).p);
  } else {
    const auto& h = std::get<HyperplaneCarrier>(o.carrier);
    j["kind"] = "hyperplane";
    j["normal"] = to_json(h.a);
    j["offset"] = h.b.str();
  }
  return j;
}

inline Obstacle obstacle_from_json(const Json& j) {
  Obstacle o;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "point") {
    o.carrier = PointCarrier{rationals_from_json(j.at("point"))};
  } else if (kind == "hyperplane") {
    o.carrier = HyperplaneCarrier{rationals_from_json(j.at("normal")), rational_from_json(j.at("offset"))};
  } else {
    throw ConfigError("unknown obstacle kind " + kind);
  }
  o.thickness = rational_from_json(j.at("thickness"));
  o.turn = j.value("turn", -1L);
  if (j.contains("origin")) o.origin = j.at("origin").get<std::vector<int>>();
  o.tag = j.value("tag", std::string{});
  return o;
}

inline Json obstacles_to_json(const std::vector<Obstacle>& v) {
  Json a = Json::array();
  for (auto& o : v) a.push_back(to_json(o));
  return a;
}
inline std::vector<Obstacle> obstacles_from_json(const Json& j) {
  std::vector<Obstacle> v;
  for (auto& x : j) v.push_back(obstacle_from_json(x));
  return v;
}

inline Json to_json(const GameParams& p) {
  Json j{{"kind", p.kind == GameKind::Absolute ? "absolute" : "potential"},
         {"alpha", p.alpha.str()},
         {"beta", p.beta.str()},
         {"rho", p.rho.str()},
         {"obstacles", p.obstacles == ObstacleClass::Points ? "points" : "hyperplanes"},
         {"dimension", p.dimension}};
  if (p.kind == GameKind::Absolute) j["k"] = p.k;
  else j["c"] = p.c.str();
  return j;
}

inline GameParams params_from_json(const Json& j) {
  GameParams p;
  std::string kind = j.at("kind").get<std::string>();
  if (kind != "absolute" && kind != "potential") throw ConfigError("unknown game kind " + kind);
  p.kind = kind == "absolute" ? GameKind::Absolute : GameKind::Potential;
  p.alpha = rational_from_json(j.at("alpha"));
  p.beta = rational_from_json(j.at("beta"));
  p.rho = rational_from_json(j.at("rho"));
  if (p.kind == GameKind::Absolute) p.k = j.at("k").get<long>();
  else p.c = rational_from_json(j.at("c"));
  p.obstacles = j.value("obstacles", std::string("points")) == "points" ? ObstacleClass::Points : ObstacleClass::Hyperplanes;
  p.dimension = j.value("dimension", std::size_t(1));
  p.validate();
  return p;
}

inline Json to_json(const Verdict& v) {
  Json j{{"legal", v.legal}};
  if (!v.legal) {
    j["rule"] = v.rule;
    j["detail"] = v.detail;
  }
  return j;
}
inline Verdict verdict_from_json(const Json& j) {
  Verdict v;
  v.legal = j.at("legal").get<bool>();
  v.rule = j.value("rule", std::string{});
  v.detail = j.value("detail", std::string{});
  return v;
}

inline Json to_json(const Transcript& T) {
  Json moves = Json::array();
  for (std::size_t m = 0; m < T.bob.size(); ++m) {
    Json e{{"turn", m}, {"bob", to_json(T.bob[m])}};
    if (m < T.alice.size()) {
      e["alice"] = obstacles_to_json(T.alice[m]);
      if (m < T.alice_notes.size() && !T.alice_notes[m].empty()) e["notes"] = T.alice_notes[m];
    }
    moves.push_back(e);
  }
  Json verdicts = Json::array();
  for (auto& v : T.verdicts) verdicts.push_back(to_json(v));
  return Json{{"schema", "schmidt.transcript/1"},
              {"params", to_json(T.params)},
              {"moves", moves},
              {"verdicts", verdicts},
              {"status", to_string(T.status)}};
}

inline Transcript transcript_from_json(const Json& j) {
  Transcript T;
  T.params = params_from_json(j.at("params"));
  for (auto& e : j.at("moves")) {
    T.bob.push_back(ball_from_json(e.at("bob")));
    if (e.contains("alice")) {
      T.alice.push_back(obstacles_from_json(e.at("alice")));
      T.alice_notes.push_back(e.value("notes", std::vector<std::string>{}));
    }
  }
  for (auto& v : j.at("verdicts")) T.verdicts.push_back(verdict_from_json(v));
  std::string st = j.value("status", std::string("InProgress"));
  T.status = st == "BobStuck" ? MatchStatus::BobStuck
             : st == "DepthReached" ? MatchStatus::DepthReached
             : st == "Aborted" ? MatchStatus::Aborted
                               : MatchStatus::InProgress;
  return T;
}

}  // namespace schmidt
