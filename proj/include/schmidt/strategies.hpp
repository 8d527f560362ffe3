#pragma once

// Alice strategies for middle-eps Cantor sets, badly approximable numbers,
// bounded continued fractions and (in the plane) the Simplex-Lemma strategy;
// combinations through similarities; and Bob's subdivision strategies.

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "schmidt/cantor.hpp"
#include "schmidt/contfrac.hpp"
#include "schmidt/games.hpp"

namespace schmidt {

// ---------------------------------------------------------------- Alice

// Deletes the removed interval of stage <= n that meets Bob's ball, where n is
// the largest integer with lambda^(n+1) >= |B|.
inline AliceStrategy alice_meps(const CantorSpec& spec, const Rational& beta) {
  if (beta.sign() <= 0 || beta >= Rational(1)) throw ConfigError("beta must lie in (0,1)");
  const Rational eps = spec.epsilon, lam = spec.lambda;
  AliceStrategy s;
  s.declared = GameParams::absolute(Rational(2) * eps / ((Rational(1) - eps) * beta), beta, lam * beta / Rational(2), 1);
  s.target = "M_" + eps.str();
  GameParams P = s.declared;
  s.respond = [spec, P](const Transcript& T) {
    AliceMove mv;
    Interval B = T.bob.back().interval();
    Rational L = B.length();
    long n = -1;
    for (Rational pw = spec.lambda; pw >= L; pw *= spec.lambda) ++n;
    if (n < 0) {
      mv.notes.push_back("ball longer than lambda, nothing to delete");
      return mv;
    }
    struct Cand {
      Gap g;
      bool open_meet;
    };
    std::vector<Cand> cands;
    auto rec = [&](auto&& self, const std::string& addr, const Interval& K) -> void {
      if (static_cast<long>(addr.size()) > n || !K.intersects(B)) return;
      Interval G = spec.gap_of(K);
      if (G.intersects(B)) cands.push_back({{addr.size(), addr, G}, G.lo < B.hi && B.lo < G.hi});
      self(self, addr + 'L', spec.left_child(K));
      self(self, addr + 'R', spec.right_child(K));
    };
    rec(rec, "", Interval{0, 1});
    std::vector<Cand> open;
    for (auto& c : cands)
      if (c.open_meet) open.push_back(c);
    if (open.size() > 1)
      throw std::logic_error("ball " + B.str() + " meets two removed intervals of stage <= " + std::to_string(n));
    const Cand* pick = nullptr;
    if (!open.empty()) {
      pick = &open[0];
    } else if (!cands.empty()) {
      std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.g.hull.lo < b.g.hull.lo; });
      pick = &cands[0];
      if (cands.size() > 1) mv.notes.push_back("two gaps touch the ball; deleting the left one");
    }
    if (!pick) {
      mv.notes.push_back("no removed interval of stage <= " + std::to_string(n) + " meets the ball");
      return mv;
    }
    const Interval& G = pick->g.hull;
    if (G.radius() > P.alpha * B.radius()) {
      mv.notes.push_back("skip: gap " + G.str() + " of stage " + std::to_string(pick->g.stage) + " is too long");
      return mv;
    }
    mv.obstacles.push_back(Obstacle::point(G, "gap stage " + std::to_string(pick->g.stage) + " at " +
                                                  (pick->g.address.empty() ? std::string("root") : pick->g.address)));
    return mv;
  };
  return s;
}

namespace detail {

// Members of C_l meeting B: Delta(p/q) = B(p/q, eps/q^2) with
// l < (1-2eps) q^-2 <= l/beta.
inline std::vector<Rational> delta_members(const Interval& B, const Rational& eps, const Rational& beta) {
  Rational l = B.length();
  Rational top = Rational(1) - Rational(2) * eps;
  // q^2 in [beta*top/l, top/l)
  Rational q2lo = beta * top / l, q2hi = top / l;
  Integer qmin = isqrt_floor(q2lo);
  if (Rational(qmin * qmin) < q2lo) qmin += 1;
  if (qmin < 1) qmin = 1;
  Integer qmax = isqrt_floor(q2hi);
  if (Rational(qmax * qmax) >= q2hi) qmax -= 1;
  std::vector<Rational> out;
  if (qmax < qmin) return out;
  Rational pad = eps / Rational(qmin * qmin);
  for (auto& r : fractions_in(B.lo - pad, B.hi + pad, qmax)) {
    if (r.den() < qmin) continue;
    Rational rad = eps / Rational(r.den() * r.den());
    if (distance(B, r) <= rad) out.push_back(r);
  }
  return out;
}

}  // namespace detail

// Badly approximable numbers BA_1(eps) = {x : |x - p/q| >= eps q^-2}.
inline AliceStrategy alice_ba1(const Rational& eps, const Rational& beta) {
  if (eps.sign() <= 0 || eps >= Rational(1, 2)) throw ConfigError("alice_ba1 needs 0 < eps < 1/2");
  Rational r = eps / (Rational(1) - eps);
  if (beta < r * r || beta >= Rational(1)) throw ConfigError("alice_ba1 needs (eps/(1-eps))^2 <= beta < 1");
  AliceStrategy s;
  s.declared = GameParams::absolute(Rational(2) * eps / ((Rational(1) - Rational(2) * eps) * beta), beta,
                                    beta / Rational(2), 1);
  s.target = "BA_1(" + eps.str() + ")";
  s.respond = [eps, beta](const Transcript& T) {
    AliceMove mv;
    Interval B = T.bob.back().interval();
    auto members = detail::delta_members(B, eps, beta);
    if (members.size() > 1)
      throw std::logic_error("ball " + B.str() + " meets two members of C_l: " + members[0].str() + ", " +
                             members[1].str());
    if (members.empty()) return mv;
    const Rational& p = members[0];
    mv.obstacles.push_back(Obstacle::point({p}, eps / Rational(p.den() * p.den()), "Delta " + p.str()));
    return mv;
  };
  return s;
}

// F_n (continued-fraction quotients <= n) through BA_1(1/(n+1)).
inline AliceStrategy alice_fn(long n, const Rational& beta) {
  if (n < 2) throw ConfigError("alice_fn needs n >= 2");
  if (beta < Rational(1, n * n)) throw ConfigError("alice_fn needs beta >= 1/n^2");
  AliceStrategy s = alice_ba1(Rational(1, n + 1), beta);
  s.declared.alpha = Rational(2) / (Rational(n - 1) * beta);
  s.target = "F_" + std::to_string(n);
  return s;
}

// Badly approximable vectors in R^d (d = 1, 2), sup norm, via the Simplex
// Simplex Lemma: rationals with q < Q near Bob's centre lie on one affine hyperplane,
// whose thickening Alice deletes.
struct SimplexConstants {
  std::size_t d;
  Rational eps, beta;
  Enclosure scale;  // (d! V_d)^(-1/d), V_d = 2^d
  Enclosure K;      // scale - eps/beta
  Rational alpha_up, rho_up;
};

inline SimplexConstants simplex_constants(std::size_t d, const Rational& eps, const Rational& beta, long bits = 128) {
  if (d != 1 && d != 2) throw ConfigError("alice_bad_simplex supports d = 1, 2");
  if (eps.sign() <= 0 || beta.sign() <= 0 || beta >= Rational(1)) throw ConfigError("need eps > 0, 0 < beta < 1");
  SimplexConstants k{d, eps, beta, {}, {}, {}, {}};
  k.scale = d == 1 ? Enclosure(Rational(1, 2)) : root_enc(Rational(1, 8), 2, bits);
  k.K = k.scale - Enclosure(eps / beta);
  if (!k.K.certainly_positive()) throw ConfigError("alice_bad_simplex needs eps/beta < (d! V_d)^(-1/d)");
  k.alpha_up = round_up(eps / beta / k.K.lo, bits);
  Rational rho = beta * k.scale.hi - eps;
  if (rho.sign() <= 0) throw ConfigError("alice_bad_simplex needs beta (d! V_d)^(-1/d) > eps");
  k.rho_up = round_up(rho, bits);
  return k;
}

// Rational points with denominator q <= qmax in the closed sup-ball B(x, s).
inline std::vector<std::vector<Rational>> rational_points_in(const std::vector<Rational>& x, const Rational& s,
                                                             const Integer& qmax, std::size_t cap = 4000000) {
  std::vector<std::vector<Rational>> pts;
  if (x.size() == 1) {
    for (auto& r : fractions_in(x[0] - s, x[0] + s, qmax)) pts.push_back({r});
    return pts;
  }
  if (qmax > Integer(cap)) throw ResourceError("rational_points_in: qmax " + qmax.get_str() + " too large");
  long qm = qmax.get_si();
  std::set<std::pair<std::string, std::string>> seen;
  for (long q = 1; q <= qm; ++q) {
    Rational rq(q);
    Integer a0 = ceil((x[0] - s) * rq), a1 = floor((x[0] + s) * rq);
    Integer b0 = ceil((x[1] - s) * rq), b1 = floor((x[1] + s) * rq);
    for (Integer a = a0; a <= a1; ++a)
      for (Integer b = b0; b <= b1; ++b) {
        Rational u(a, Integer(q)), v(b, Integer(q));
        if (seen.insert({u.str(), v.str()}).second) pts.push_back({u, v});
        if (pts.size() > cap) throw ResourceError("rational_points_in: too many points");
      }
  }
  return pts;
}

struct SimplexInstance {
  std::vector<std::vector<Rational>> points;
  Integer qmax;
  Rational s;
  bool affinely_dependent = true;  // all points on one affine hyperplane
  std::vector<Rational> normal;
  Rational offset;
};

// Enumerates the points used by the Simplex-Lemma step for a ball of radius
// rho_m, with q < Q and radius s replaced by certified inner bounds.
inline SimplexInstance simplex_instance(const SimplexConstants& k, const std::vector<Rational>& x, const Rational& rho_m) {
  SimplexInstance in;
  long d = static_cast<long>(k.d);
  // q < Q  <=>  q^(d+1) < (K/rho)^d ; use K.lo so that q < Q is guaranteed
  Rational bound = pow(k.K.lo / rho_m, d);
  Integer q = 0;
  {
    // largest q with q^(d+1) < bound
    Integer lo = 0, hi = 1;
    while (Rational(ipow(hi, static_cast<unsigned long>(d + 1))) < bound) hi *= 2;
    while (hi - lo > 1) {
      Integer mid = (lo + hi) / 2;
      if (Rational(ipow(mid, static_cast<unsigned long>(d + 1))) < bound) lo = mid;
      else hi = mid;
    }
    q = lo;
  }
  in.qmax = q;
  in.s = rho_m * (Rational(1) + k.eps / (k.beta * k.K.hi));
  in.points = rational_points_in(x, in.s, in.qmax);
  if (in.points.empty()) return in;
  const auto& p0 = in.points[0];
  if (d == 1) {
    in.normal = {Rational(1)};
    in.offset = p0[0];
    in.affinely_dependent = in.points.size() == 1;
    return in;
  }
  std::size_t j = 1;
  while (j < in.points.size() && in.points[j] == p0) ++j;
  if (j == in.points.size()) {
    in.normal = {Rational(1), Rational(0)};
    in.offset = p0[0];
    return in;
  }
  const auto& p1 = in.points[j];
  in.normal = {p0[1] - p1[1], p1[0] - p0[0]};
  in.offset = in.normal[0] * p0[0] + in.normal[1] * p0[1];
  for (auto& p : in.points)
    if (in.normal[0] * p[0] + in.normal[1] * p[1] != in.offset) in.affinely_dependent = false;
  return in;
}

inline AliceStrategy alice_bad_simplex(const Rational& eps, const Rational& beta, std::size_t d) {
  SimplexConstants k = simplex_constants(d, eps, beta);
  AliceStrategy s;
  s.declared = GameParams::potential(k.alpha_up, beta, Rational(0), k.rho_up,
                                     d == 1 ? ObstacleClass::Points : ObstacleClass::Hyperplanes, d);
  s.target = "Bad(" + std::to_string(d) + ", " + eps.str() + ")";
  s.respond = [k](const Transcript& T) {
    AliceMove mv;
    const Ball& B = T.bob.back();
    SimplexInstance in = simplex_instance(k, B.center, B.radius);
    if (!in.affinely_dependent)
      throw std::logic_error("Simplex Lemma violated near " + B.str() + " with q < " + in.qmax.get_str());
    if (in.points.empty()) return mv;
    Rational th = k.alpha_up * B.radius;
    if (k.d == 1) mv.obstacles.push_back(Obstacle::point({in.offset}, th, "point " + in.offset.str()));
    else
      mv.obstacles.push_back(Obstacle::hyperplane(in.normal, in.offset, th,
                                                  "line through " + std::to_string(in.points.size()) + " points"));
    return mv;
  };
  return s;
}

// ---------------------------------------------------------------- combining

// x -> scale * x + shift
struct Similarity {
  Rational scale = 1;
  std::vector<Rational> shift;

  static Similarity identity(std::size_t d = 1) { return {Rational(1), std::vector<Rational>(d, Rational(0))}; }
  static Similarity affine(Rational s, Rational b) { return {std::move(s), {std::move(b)}}; }

  Ball pull(const Ball& B) const {
    std::vector<Rational> c;
    for (std::size_t i = 0; i < B.dim(); ++i) c.push_back((B.center[i] - shift.at(i)) / scale);
    return Ball(c, B.radius / abs(scale));
  }
  Obstacle push(Obstacle o) const {
    if (o.is_point()) {
      auto& p = std::get<PointCarrier>(o.carrier).p;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = scale * p[i] + shift.at(i);
    } else {
      auto& h = std::get<HyperplaneCarrier>(o.carrier);
      Rational dot = 0;
      for (std::size_t i = 0; i < h.a.size(); ++i) dot += h.a[i] * shift.at(i);
      for (auto& a : h.a) a = a / scale;
      h.b = h.b + dot / scale;
    }
    o.thickness = o.thickness * abs(scale);
    return o;
  }
  Obstacle pull(Obstacle o) const {
    if (o.is_point()) {
      auto& p = std::get<PointCarrier>(o.carrier).p;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = (p[i] - shift.at(i)) / scale;
    } else {
      auto& h = std::get<HyperplaneCarrier>(o.carrier);
      Rational dot = 0;
      for (std::size_t i = 0; i < h.a.size(); ++i) dot += h.a[i] * shift.at(i);
      h.b = h.b - dot;
      for (auto& a : h.a) a = a * scale;
    }
    o.thickness = o.thickness / abs(scale);
    return o;
  }
  Rational apply(const Rational& x) const { return scale * x + shift.at(0); }
  Rational unapply(const Rational& y) const { return (y - shift.at(0)) / scale; }
  std::string str() const {
    std::string s = scale.str() + "*x";
    for (auto& b : shift) s += " + " + b.str();
    return s;
  }
};

inline Transcript pull_transcript(const Transcript& T, const Similarity& f, const GameParams& sub) {
  Transcript t;
  t.params = sub;
  for (auto& B : T.bob) t.bob.push_back(f.pull(B));
  for (auto& A : T.alice) {
    std::vector<Obstacle> v;
    for (auto& o : A) v.push_back(f.pull(o));
    t.alice.push_back(std::move(v));
  }
  t.alice_notes = T.alice_notes;
  return t;
}

// Same strategy, weaker declared parameters (alpha, beta, rho, k, c may only grow).
inline AliceStrategy lift_params(AliceStrategy s, const GameParams& to) {
  const GameParams& from = s.declared;
  to.validate();
  if (from.kind != to.kind) throw ConfigError("lift_params cannot change the game kind");
  if (to.alpha < from.alpha || to.beta < from.beta || to.rho < from.rho)
    throw ConfigError("lift_params: " + to.str() + " is not weaker than " + from.str());
  if (to.kind == GameKind::Absolute && to.k < from.k) throw ConfigError("lift_params: k may only grow");
  if (to.kind == GameKind::Potential && to.c < from.c) throw ConfigError("lift_params: c may only grow");
  if (to.dimension != from.dimension) throw ConfigError("lift_params: dimension mismatch");
  if (to.kind == GameKind::Potential && to.obstacles != from.obstacles && from.obstacles == ObstacleClass::Hyperplanes)
    throw ConfigError("lift_params: cannot narrow the obstacle class");
  s.declared = to;
  return s;
}

// A one-ball absolute strategy read in the potential game with exponent c.
inline AliceStrategy as_potential(AliceStrategy s, const Rational& c) {
  if (s.declared.kind == GameKind::Potential) {
    if (c < s.declared.c) throw ConfigError("as_potential: c may only grow");
    s.declared.c = c;
    return s;
  }
  if (s.declared.k != 1) throw ConfigError("as_potential needs a one-ball absolute strategy");
  const GameParams& a = s.declared;
  s.declared = GameParams::potential(a.alpha, a.beta, c, a.rho, ObstacleClass::Points, a.dimension);
  return s;
}

// Rational upper bound for (sum alpha_j^c)^(1/c).
inline Rational power_mean_upper(const std::vector<Rational>& alphas, const Rational& c, long bits = 96) {
  if (c.sign() <= 0) throw ConfigError("power_mean_upper needs c > 0");
  bool equal = std::all_of(alphas.begin(), alphas.end(), [&](const Rational& a) { return a == alphas[0]; });
  Rational inv = inverse(c);
  if (equal && inv.is_integer())
    return pow(Rational(static_cast<long>(alphas.size())), inv.num().get_si()) * alphas[0];
  Enclosure s = Rational(0);
  for (auto& a : alphas) s = s + pow_enc(a, c, bits + 32);
  Enclosure r = pow_enc(s, Enclosure(inv), bits + 32);
  return round_up(r.hi, bits);
}

struct Component {
  AliceStrategy strategy;
  Similarity map = Similarity::identity();
};

enum class CombineMode { AbsoluteSum, PotentialSum };

// Strategy for the intersection of the images f_j(S_j): every turn each
// component answers in its own coordinates and the answers are pushed forward.
inline AliceStrategy combine_alice(std::vector<Component> parts, CombineMode mode, std::optional<Rational> c = {}) {
  if (parts.empty()) throw ConfigError("combine_alice needs at least one component");
  const Rational beta = parts[0].strategy.declared.beta;
  std::size_t dim = parts[0].strategy.declared.dimension;
  Rational rho = 0, alpha = 0;
  long k = 0;
  std::string target;
  ObstacleClass cls = ObstacleClass::Points;
  for (auto& p : parts) {
    const GameParams& g = p.strategy.declared;
    if (g.beta != beta) throw ConfigError("combine_alice: components must share beta");
    if (g.dimension != dim || p.map.shift.size() != dim) throw ConfigError("combine_alice: dimension mismatch");
    if (p.map.scale.is_zero()) throw ConfigError("combine_alice: similarity with zero ratio");
    rho = max(rho, abs(p.map.scale) * g.rho);
    if (g.obstacles == ObstacleClass::Hyperplanes) cls = ObstacleClass::Hyperplanes;
    target += (target.empty() ? "" : " & ") + std::string("(") + p.map.str() + ")[" + p.strategy.target + "]";
  }
  GameParams P;
  if (mode == CombineMode::AbsoluteSum) {
    for (auto& p : parts) {
      if (p.strategy.declared.kind != GameKind::Absolute) throw ConfigError("AbsoluteSum needs absolute components");
      k += p.strategy.declared.k;
      alpha = max(alpha, p.strategy.declared.alpha);
    }
    P = GameParams::absolute(alpha, beta, rho, k, dim);
  } else {
    Rational cc = c.value_or(Rational(0));
    for (auto& p : parts) {
      p.strategy = as_potential(p.strategy, max(cc, p.strategy.declared.kind == GameKind::Potential
                                                        ? p.strategy.declared.c
                                                        : Rational(0)));
      cc = max(cc, p.strategy.declared.c);
    }
    for (auto& p : parts) p.strategy = as_potential(p.strategy, cc);
    if (parts.size() > 1 && cc.is_zero()) throw ConfigError("PotentialSum of several components needs c > 0");
    std::vector<Rational> as;
    for (auto& p : parts) as.push_back(p.strategy.declared.alpha);
    alpha = parts.size() == 1 ? as[0] : power_mean_upper(as, cc);
    P = GameParams::potential(alpha, beta, cc, rho, cls, dim);
  }
  AliceStrategy s;
  s.declared = P;
  s.target = target;
  s.respond = [parts](const Transcript& T) {
    AliceMove mv;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      const auto& p = parts[j];
      Transcript t = pull_transcript(T, p.map, p.strategy.declared);
      AliceMove sub = p.strategy.respond(t);
      for (auto& o : sub.obstacles) {
        Obstacle q = p.map.push(o);
        q.origin.insert(q.origin.begin(), static_cast<int>(j));
        mv.obstacles.push_back(std::move(q));
      }
      for (auto& n : sub.notes) mv.notes.push_back("[" + std::to_string(j) + "] " + n);
    }
    return mv;
  };
  return s;
}

// ---------------------------------------------------------------- Bob

inline Rational min_gap(const Ball& B, const std::vector<Obstacle>& obs) {
  Rational g = -1;  // -1 stands for "no obstacle"
  for (auto& o : obs) {
    Rational d = o.gap_to(B);
    if (g.sign() < 0 || d < g) g = d;
  }
  return g;
}

// Split I into `pieces` intervals of length beta|I| separated by equal gaps
// (at least alpha|I| when (pieces-1) alpha + pieces beta <= 1).
inline std::vector<Interval> subdivide(const Interval& I, long pieces, const Rational& beta) {
  Rational L = I.length(), w = beta * L;
  Rational g = (L - Rational(pieces) * w) / Rational(pieces - 1);
  std::vector<Interval> out;
  for (long i = 0; i < pieces; ++i) {
    Rational lo = I.lo + Rational(i) * (w + g);
    out.emplace_back(lo, lo + w);
  }
  return out;
}

// Left to right, the first child at positive distance from every obstacle
// still meeting the current ball.
inline BobStrategy bob_subdivision(long pieces, const Rational& beta, const Rational& alpha, const Interval& start) {
  if (pieces < 2) throw ConfigError("bob_subdivision needs at least 2 pieces");
  if (Rational(pieces - 1) * alpha + Rational(pieces) * beta > Rational(1))
    throw ConfigError("bob_subdivision needs k*alpha + (k+1)*beta <= 1");
  BobStrategy b;
  b.name = "subdivision(" + std::to_string(pieces) + ", " + beta.str() + ")";
  b.decay = {1, beta};
  b.candidates = [pieces, beta, start](const Transcript& T, const std::vector<Obstacle>& active) {
    std::vector<Ball> out;
    if (T.bob.empty()) {
      out.emplace_back(start);
      return out;
    }
    for (auto& J : subdivide(T.bob.back().interval(), pieces, beta)) {
      Ball B(J);
      bool ok = true;
      for (auto& o : active) ok = ok && o.gap_to(B).sign() > 0;
      if (ok) out.push_back(B);
    }
    return out;
  };
  return b;
}

namespace detail {

// Children ranked by distance to the active obstacles, farthest first, ties to
// the left; covered children dropped, and in the absolute game children that
// meet last turn's deletions dropped as well.
inline std::vector<Ball> rank_children(const Transcript& T, const std::vector<Obstacle>& active,
                                       const std::vector<Interval>& kids) {
  struct R {
    Ball b;
    Rational g;
    std::size_t i;
  };
  std::vector<R> rs;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    Ball B(kids[i]);
    bool dead = false;
    for (auto& o : active) dead = dead || o.covers(B);
    if (T.params.kind == GameKind::Absolute && !T.alice.empty() && T.alice.size() == T.bob.size())
      for (auto& o : T.alice.back()) dead = dead || o.meets(B);
    if (!dead) rs.push_back({B, min_gap(B, active), i});
  }
  std::stable_sort(rs.begin(), rs.end(), [](const R& a, const R& b) {
    bool fa = a.g.sign() < 0, fb = b.g.sign() < 0;  // free of obstacles
    if (fa != fb) return fa;
    if (fa) return false;
    return a.g > b.g;
  });
  std::vector<Ball> out;
  for (auto& r : rs) out.push_back(r.b);
  return out;
}

}  // namespace detail

// Bob descends through the construction intervals of M_eps.
inline BobStrategy bob_construction_survival(const CantorSpec& spec) {
  BobStrategy b;
  b.name = "construction(" + spec.epsilon.str() + ")";
  b.decay = {1, spec.lambda};
  b.candidates = [spec](const Transcript& T, const std::vector<Obstacle>& active) {
    if (T.bob.empty()) return std::vector<Ball>{Ball(Interval{0, 1})};
    Interval K = T.bob.back().interval();
    return detail::rank_children(T, active, {spec.left_child(K), spec.right_child(K)});
  };
  return b;
}

// Bob splits the current interval into `pieces` equal touching pieces.
inline BobStrategy bob_equal_pieces(long pieces, const Interval& start) {
  if (pieces < 2) throw ConfigError("bob_equal_pieces needs at least 2 pieces");
  BobStrategy b;
  b.name = "pieces(" + std::to_string(pieces) + ")";
  b.decay = {1, Rational(1, pieces)};
  b.candidates = [pieces, start](const Transcript& T, const std::vector<Obstacle>& active) {
    if (T.bob.empty()) return std::vector<Ball>{Ball(start)};
    Interval K = T.bob.back().interval();
    std::vector<Interval> kids;
    Rational w = K.length() / Rational(pieces);
    for (long i = 0; i < pieces; ++i) kids.emplace_back(K.lo + Rational(i) * w, K.lo + Rational(i + 1) * w);
    return detail::rank_children(T, active, kids);
  };
  return b;
}

}  // namespace schmidt
