#pragma once

// Dimension estimators and bound calculators: the cylinder cover count for
// F_n ∩ C, closed-form lower bounds, and the survivor tree that measures
// branching under an Alice strategy.

#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "schmidt/cantor.hpp"
#include "schmidt/contfrac.hpp"
#include "schmidt/enclosure.hpp"
#include "schmidt/games.hpp"

namespace schmidt {

// ---------------------------------------------------------------- F_n ∩ C covers

struct CoverManifest {
  long n = 2;
  Rational scale;
  std::vector<std::vector<long>> a_leaves;  // meet C, first below the scale
  std::vector<std::vector<long>> b_leaves;  // miss C
};

struct DimensionEstimate {
  long n = 2;
  Rational scale;
  long count = 0;           // type-A leaves
  long b_count = 0;
  long internal_meeting = 0;  // internal nodes (|I| >= scale, meets C), monotone in the scale
  long nodes = 0;
  Enclosure estimate;       // log(count) / -log(scale)
  std::string digest;
  CoverManifest manifest;
};

inline std::string word_str(const std::vector<long>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s;
}

inline std::vector<long> parse_word(const std::string& s) {
  std::vector<long> w;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    w.push_back(std::stol(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return w;
}

// FNV-1a over the canonical manifest text.
inline std::string manifest_digest(const CoverManifest& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
    h ^= 0x0a;
    h *= 1099511628211ULL;
  };
  feed("n=" + std::to_string(m.n));
  feed("scale=" + m.scale.str());
  for (auto& w : m.a_leaves) feed("A:" + word_str(w));
  for (auto& w : m.b_leaves) feed("B:" + word_str(w));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline DimensionEstimate hd_estimate_fn_cap_cantor(long n, const Rational& scale, long node_cap = 20000000,
                                                   bool keep_manifest = true) {
  if (n < 2) throw ConfigError("hd_estimate_fn_cap_cantor needs n >= 2");
  if (scale.sign() <= 0 || scale >= Rational(1)) throw ConfigError("scale must lie in (0,1)");
  DimensionEstimate d;
  d.n = n;
  d.scale = scale;
  d.manifest.n = n;
  d.manifest.scale = scale;
  std::vector<long> w;
  auto rec = [&](auto&& self) -> void {
    for (long a = 1; a <= n; ++a) {
      w.push_back(a);
      if (++d.nodes > node_cap)
        throw ResourceError("hd_estimate: node cap " + std::to_string(node_cap) + " reached with " +
                            std::to_string(d.count) + " A-leaves and " + std::to_string(d.b_count) + " B-leaves so far");
      Interval I = cylinder_interval(w, n);
      if (!intersects_ternary_cantor(I).meets) {
        ++d.b_count;
        if (keep_manifest) d.manifest.b_leaves.push_back(w);
      } else if (I.length() < scale) {
        ++d.count;
        if (keep_manifest) d.manifest.a_leaves.push_back(w);
      } else {
        ++d.internal_meeting;
        self(self);
      }
      w.pop_back();
    }
  };
  rec(rec);
  if (d.count == 0) throw DomainError("no type-A leaves: F_n ∩ C cover is empty at this scale");
  d.estimate = log_ratio_enc(Rational(d.count), inverse(scale), 64);
  d.digest = manifest_digest(d.manifest);
  return d;
}

struct CoverCheck {
  bool ok = true;
  std::string problem;
  long a_leaves = 0;
};

// Re-derives every leaf classification and checks that the leaves form a
// complete prefix code over {1..n}: every infinite word has exactly one leaf
// as a prefix.
inline CoverCheck check_cover(const CoverManifest& m) {
  CoverCheck r;
  auto fail = [&](std::string why) {
    r.ok = false;
    r.problem = std::move(why);
    return r;
  };
  if (m.n < 2 || m.scale.sign() <= 0 || m.scale >= Rational(1)) return fail("bad manifest parameters");
  struct TrieNode {
    std::map<long, std::size_t> kids;
    bool leaf = false;
  };
  std::vector<TrieNode> trie(1);
  auto insert = [&](const std::vector<long>& w) -> bool {
    std::size_t cur = 0;
    for (long a : w) {
      if (a < 1 || a > m.n) return false;
      if (trie[cur].leaf) return false;
      auto it = trie[cur].kids.find(a);
      if (it == trie[cur].kids.end()) {
        trie.push_back({});
        it = trie[cur].kids.emplace(a, trie.size() - 1).first;
      }
      cur = it->second;
    }
    if (trie[cur].leaf || !trie[cur].kids.empty() || cur == 0) return false;
    trie[cur].leaf = true;
    return true;
  };
  for (auto& w : m.a_leaves) {
    if (!insert(w)) return fail("A-leaf " + word_str(w) + " is not part of a prefix code");
    Interval I = cylinder_interval(w, m.n);
    if (!intersects_ternary_cantor(I).meets) return fail("A-leaf " + word_str(w) + " misses C");
    if (!(I.length() < m.scale)) return fail("A-leaf " + word_str(w) + " is not below the scale");
  }
  for (auto& w : m.b_leaves) {
    if (!insert(w)) return fail("B-leaf " + word_str(w) + " is not part of a prefix code");
    if (intersects_ternary_cantor(cylinder_interval(w, m.n)).meets) return fail("B-leaf " + word_str(w) + " meets C");
  }
  // internal nodes: full branching, meet C, not yet below the scale
  std::vector<std::pair<std::size_t, std::vector<long>>> stack{{0, {}}};
  while (!stack.empty()) {
    auto [id, w] = stack.back();
    stack.pop_back();
    if (trie[id].leaf) continue;
    if (static_cast<long>(trie[id].kids.size()) != m.n) return fail("node '" + word_str(w) + "' is not fully branched");
    if (!w.empty()) {
      Interval I = cylinder_interval(w, m.n);
      if (I.length() < m.scale) return fail("internal node " + word_str(w) + " is already below the scale");
      if (!intersects_ternary_cantor(I).meets) return fail("internal node " + word_str(w) + " misses C");
    }
    for (auto& [a, k] : trie[id].kids) {
      auto v = w;
      v.push_back(a);
      stack.push_back({k, v});
    }
  }
  r.a_leaves = static_cast<long>(m.a_leaves.size());
  return r;
}

inline Json to_json(const CoverManifest& m) {
  Json a = Json::array(), b = Json::array();
  for (auto& w : m.a_leaves) a.push_back(word_str(w));
  for (auto& w : m.b_leaves) b.push_back(word_str(w));
  return Json{{"n", m.n}, {"scale", m.scale.str()}, {"a_leaves", a}, {"b_leaves", b}};
}

inline CoverManifest manifest_from_json(const Json& j) {
  CoverManifest m;
  m.n = j.at("n").get<long>();
  m.scale = rational_from_json(j.at("scale"));
  for (auto& w : j.at("a_leaves")) m.a_leaves.push_back(parse_word(w.get<std::string>()));
  for (auto& w : j.at("b_leaves")) m.b_leaves.push_back(parse_word(w.get<std::string>()));
  return m;
}

inline Json cover_certificate_json(const DimensionEstimate& d) {
  return Json{{"schema", "schmidt.certificate/1"},
              {"kind", "cover"},
              {"pipeline", "hd-fn-c"},
              {"inputs", {{"n", d.n}, {"scale", d.scale.str()}}},
              {"count", d.count},
              {"estimate", to_json(d.estimate)},
              {"estimate_decimal", {d.estimate.decimal_lo(8), d.estimate.decimal_hi(8)}},
              {"digest", d.digest},
              {"manifest", to_json(d.manifest)},
              {"status", "certified"}};
}

// ---------------------------------------------------------------- formulas

// log(N - k) / -log(beta)
inline Enclosure hd_lower_formula(long N, long k, const Rational& beta, long bits = 96) {
  if (N <= k) throw DomainError("hd_lower_formula needs N > k");
  if (k < 0) throw DomainError("hd_lower_formula needs k >= 0");
  if (beta.sign() <= 0 || beta >= Rational(1)) throw DomainError("hd_lower_formula needs 0 < beta < 1");
  return log_ratio_enc(Rational(N - k), inverse(beta), bits);
}

inline Rational independence_heuristic(const Rational& d1, const Rational& d2, long d) {
  Rational D(d);
  if (d1.sign() < 0 || d2.sign() < 0 || d1 > D || d2 > D) throw DomainError("independence_heuristic needs 0 <= d1, d2 <= d");
  return max(Rational(0), d1 + d2 - D);
}

// x^c when it is rational.
inline std::optional<Rational> exact_pow(const Rational& x, const Rational& c) {
  if (x.is_zero()) return c.sign() > 0 ? std::optional<Rational>(Rational(0)) : std::nullopt;
  if (c.is_integer()) return pow(x, c.num().get_si());
  if (x.sign() < 0) return std::nullopt;
  unsigned long v = c.den().get_ui();
  Integer rn, rd;
  if (!mpz_root(rn.get_mpz_t(), x.num().get_mpz_t(), v) || !mpz_root(rd.get_mpz_t(), x.den().get_mpz_t(), v))
    return std::nullopt;
  return pow(Rational(rn, rd), c.num().get_si());
}

inline Enclosure pow_any(const Rational& x, const Rational& c, long bits) {
  if (auto e = exact_pow(x, c)) return *e;
  return pow_enc(x, c, bits);
}

struct PotentialBound {
  Enclosure bound;    // delta - K1 alpha^eta / |log beta|
  Enclosure lhs, rhs;  // alpha^c and (1 - beta^(eta - c)) / K2
  std::optional<bool> condition;
  bool positivity_checked = false;
};

inline PotentialBound potential_hd_bound(const Rational& delta, const Rational& eta, const Rational& alpha,
                                         const Rational& beta, const Rational& c, const Rational& K1,
                                         const Rational& K2) {
  if (!(c < eta)) throw ConfigError("potential_hd_bound needs c < eta");
  if (beta.sign() <= 0 || beta > Rational(1, 4)) throw ConfigError("potential_hd_bound needs 0 < beta <= 1/4");
  if (alpha.sign() < 0 || alpha > Rational(1)) throw ConfigError("potential_hd_bound needs 0 <= alpha <= 1");
  if (delta.sign() <= 0 || eta.sign() <= 0 || c.sign() < 0 || K1.sign() <= 0 || K2.sign() <= 0)
    throw ConfigError("potential_hd_bound needs delta, eta, K1, K2 > 0 and c >= 0");
  PotentialBound r;
  std::optional<Rational> ae = exact_pow(alpha, eta);
  std::optional<Rational> ac = alpha.is_zero() ? std::optional<Rational>(c.is_zero() ? Rational(1) : Rational(0))
                                               : exact_pow(alpha, c);
  std::optional<Rational> bd = exact_pow(beta, eta - c);
  if (ac && bd) {
    r.lhs = *ac;
    r.rhs = (Rational(1) - *bd) / K2;
    r.condition = *ac <= (Rational(1) - *bd) / K2;
  }
  for (long bits : {96L, 256L, 768L}) {
    Enclosure aeta = ae ? Enclosure(*ae) : pow_enc(alpha, eta, bits);
    r.bound = Enclosure(delta) - Enclosure(K1) * aeta / log_enc(inverse(beta), bits);
    if (r.condition) break;
    r.lhs = ac ? Enclosure(*ac) : pow_enc(alpha, c, bits);
    r.rhs = (Enclosure(Rational(1)) - (bd ? Enclosure(*bd) : pow_enc(beta, eta - c, bits))) / Enclosure(K2);
    if (r.lhs.hi <= r.rhs.lo) r.condition = true;
    else if (r.lhs.lo > r.rhs.hi) r.condition = false;
    if (r.condition) break;
  }
  if (r.condition.value_or(false) && K2 > eta * K1 / delta) {
    r.positivity_checked = true;
    if (!r.bound.certainly_positive())
      throw std::logic_error("admissible parameters gave a non-positive dimension bound " + r.bound.lo.str());
  }
  return r;
}

// max(e^-2, 2 e^-1 log(1/e)), rounded up.
inline Rational default_K2(const Rational& e) {
  if (e.sign() <= 0 || e >= Rational(1)) throw ConfigError("default_K2 needs 0 < e < 1");
  Rational a = inverse(e * e);
  Rational b = (Enclosure(Rational(2) / e) * log_enc(inverse(e))).hi;
  return round_up(max(a, b), 64);
}

// min(1, x^c/(gamma y)^c) (x + 2y)^eta <= 3^eta x^c max(x^(eta-c), y^(eta-c)/gamma^c),
// decided exactly: with c = u/D, eta = v/D both sides are raised to the power D.
inline bool threshold_inequality_holds(const Rational& x, const Rational& y, const Rational& gamma,
                                       const Rational& c, const Rational& eta) {
  if (x.sign() <= 0 || y.sign() <= 0 || gamma.sign() <= 0) throw DomainError("need x, y, gamma > 0");
  if (c.sign() < 0 || eta < c) throw DomainError("need 0 <= c <= eta");
  Integer D;
  mpz_lcm(D.get_mpz_t(), c.den().get_mpz_t(), eta.den().get_mpz_t());
  if (!D.fits_slong_p() || D > 4096) throw ResourceError("exponent denominators too large");
  long u = (c * Rational(D)).num().get_si(), v = (eta * Rational(D)).num().get_si();
  // raised to D: min(1, x^u/(gamma y)^u) (x+2y)^v  vs  3^v x^u max(x^(v-u), y^(v-u)/gamma^u)
  Rational m = min(Rational(1), pow(x / (gamma * y), u));
  Rational lhs = m * pow(x + Rational(2) * y, v);
  Rational M = max(pow(x, v - u), pow(y, v - u) / pow(gamma, u));
  Rational rhs = pow(Rational(3), v) * pow(x, u) * M;
  return lhs <= rhs;
}

// ---------------------------------------------------------------- survivor tree

inline AliceStrategy alice_trivial(const Rational& beta) {
  AliceStrategy s;
  s.declared = GameParams::absolute(Rational(1, 1000000), beta, Rational(1, 2), 1);
  s.target = "everything";
  s.respond = [](const Transcript&) { return AliceMove{}; };
  return s;
}

struct SurvivorNode {
  Interval ball;
  long level = 0;
  Enclosure phi;
  bool survived = true;
};

struct SurvivorLevel {
  long level = 0;        // children live at grid level (level+1) N
  long expanded = 0;
  long min_branch = 0, max_branch = 0;
  long trivial_min = 0;  // fewest D-children of an expanded node
  Rational mean_branch;
  Rational min_ratio;    // min over expanded nodes of survivors / D-children
  Rational mean_ratio;
  long undecided = 0;    // thresholds no precision settled (counted as removed)
};

struct SurvivorConfig {
  Rational beta = Rational(1, 4);
  long N = 1;
  Rational gamma = Rational(1, 4);
  Rational c = Rational(1, 2);
  long levels = 2;
  long max_expand = 6;  // nodes expanded per level, spread evenly over the survivors
};

struct SurvivorStats {
  SurvivorConfig cfg;
  std::vector<SurvivorLevel> levels;
  std::optional<Enclosure> dimension;      // 1 + log(prod min_ratio) / (levels N |log beta|)
  std::optional<Enclosure> raw_dimension;  // log(prod min_branch) / (levels N |log beta|)
  std::optional<Enclosure> mean_dimension; // as dimension, with mean_ratio in place of min_ratio
  bool min_branching_positive = true;
  long alice_calls = 0;
  std::vector<SurvivorNode> sample;        // the expanded nodes, for inspection
  Enclosure deficit() const { return Enclosure(Rational(1)) - *dimension; }
};

// Runs the survivor construction on J = [0,1] with Lebesgue measure. Grid E_n has
// spacing rho_n / 2, rho_n = beta^n / 2; D_j keeps every sixth point of E_{jN}.
// Along the descent to each candidate child Bob plays the nearest grid balls and
// Alice answers; a child survives while the obstacles meeting it keep
// sum thi^c <= (gamma rho)^c.
inline SurvivorStats survivor_tree(const AliceStrategy& alice, const SurvivorConfig& cfg, long child_cap = 200000) {
  if (cfg.beta.sign() <= 0 || cfg.beta > Rational(1, 4)) throw ConfigError("survivor_tree needs 0 < beta <= 1/4");
  if (cfg.N < 1 || cfg.levels < 1 || cfg.max_expand < 1) throw ConfigError("survivor_tree needs N, levels, max_expand >= 1");
  if (cfg.gamma.sign() <= 0 || cfg.c.sign() <= 0) throw ConfigError("survivor_tree needs gamma, c > 0");
  if (alice.declared.beta != cfg.beta) throw ConfigError("Alice's declared beta differs from the tree's beta");
  SurvivorStats st;
  st.cfg = cfg;
  const Rational rho0(1, 2);
  auto rho = [&](long n) { return rho0 * pow(cfg.beta, n); };
  auto h = [&](long n) { return rho(n) / Rational(2); };
  auto nearest = [&](const Rational& x, long n) {
    Integer imax = floor(Rational(1) / h(n));
    Integer i = ceil(x / h(n) - Rational(1, 2));
    if (i < 0) i = 0;
    if (i > imax) i = imax;
    return i;
  };

  struct Node {
    Interval ball;
    Transcript T;                  // bob balls at levels 0..jN, alice answers to 0..jN-1
    std::vector<Obstacle> inherited;  // obstacles so far that meet the ball
    Enclosure phi;
  };
  std::vector<Node> frontier;
  {
    Node root;
    root.ball = Interval(Rational(0), Rational(1));
    root.T.params = alice.declared;
    root.T.bob.push_back(Ball(root.ball));
    root.phi = Rational(0);
    frontier.push_back(std::move(root));
  }
  auto thi_c = [&](const Obstacle& o, long bits) { return pow_any(o.thickness, cfg.c, bits); };

  for (long j = 0; j < cfg.levels; ++j) {
    long n0 = j * cfg.N, m = (j + 1) * cfg.N;
    Rational thr = cfg.gamma * rho(m);
    SurvivorLevel L;
    L.level = j;
    L.min_branch = std::numeric_limits<long>::max();
    L.trivial_min = std::numeric_limits<long>::max();
    Rational branch_sum = 0, ratio_sum = 0;
    std::vector<Node> next;
    for (Node& P : frontier) {
      // D-children inside the half ball
      Rational cB = P.ball.center(), half = P.ball.radius() / Rational(2);
      Rational hm = h(m);
      Integer lo = ceil((cB - half + rho(m)) / hm), hi = floor((cB + half - rho(m)) / hm);
      Integer r6;
      mpz_fdiv_r_ui(r6.get_mpz_t(), lo.get_mpz_t(), 6);
      if (r6 != 0) lo += Integer(6) - r6;
      std::vector<Rational> centers;
      for (Integer i = lo; i <= hi; i += 6) {
        centers.push_back(Rational(i) * hm);
        if (static_cast<long>(centers.size()) > child_cap)
          throw ResourceError("survivor_tree: more than " + std::to_string(child_cap) + " children per node");
      }
      long survivors = 0;
      std::vector<Node> kids;
      // descend the trie of projection paths, answering at every grid level
      std::vector<Obstacle> path;
      auto descend = [&](auto&& self, long n, Transcript& T, const std::vector<std::size_t>& idx) -> void {
        AliceMove mv = alice.respond(T);
        ++st.alice_calls;
        for (auto& o : mv.obstacles) o.turn = n;
        T.alice.push_back(mv.obstacles);
        T.alice_notes.push_back(mv.notes);
        std::size_t mark = path.size();
        path.insert(path.end(), mv.obstacles.begin(), mv.obstacles.end());
        if (n + 1 == m) {
          for (std::size_t k : idx) {
            Interval Bc = Interval::ball(centers[k], rho(m));
            Ball bb(Bc);
            std::vector<Obstacle> meet;
            for (auto& o : P.inherited)
              if (o.meets(bb)) meet.push_back(o);
            for (auto& o : path)
              if (o.meets(bb)) meet.push_back(o);
            std::vector<Rational> th;
            for (auto& o : meet) th.push_back(o.thickness);
            auto ok = power_sum_leq(th, thr, cfg.c);
            if (!ok) ++L.undecided;
            if (ok.value_or(false)) {
              ++survivors;
              Node K;
              K.ball = Bc;
              K.T = T;
              K.T.bob.push_back(bb);
              K.inherited = std::move(meet);
              Enclosure phi = Rational(0);
              for (auto& o : K.inherited) phi = phi + thi_c(o, 64);
              K.phi = phi;
              kids.push_back(std::move(K));
            }
          }
        } else {
          std::map<Integer, std::vector<std::size_t>> groups;
          for (std::size_t k : idx) groups[nearest(centers[k], n + 1)].push_back(k);
          for (auto& [gi, members] : groups) {
            T.bob.push_back(Ball(Interval::ball(Rational(gi) * h(n + 1), rho(n + 1))));
            self(self, n + 1, T, members);
            T.bob.pop_back();
          }
        }
        path.resize(mark);
        T.alice.pop_back();
        T.alice_notes.pop_back();
      };
      std::vector<std::size_t> all(centers.size());
      for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
      long total = static_cast<long>(centers.size());
      if (total > 0) {
        Transcript T = P.T;
        descend(descend, n0, T, all);
      }
      ++L.expanded;
      L.min_branch = std::min(L.min_branch, survivors);
      L.max_branch = std::max(L.max_branch, survivors);
      L.trivial_min = std::min(L.trivial_min, total);
      Rational ratio = total ? Rational(survivors, total) : Rational(0);
      if (L.expanded == 1 || ratio < L.min_ratio) L.min_ratio = ratio;
      branch_sum += Rational(survivors);
      ratio_sum += ratio;
      st.sample.push_back({P.ball, j, P.phi, true});
      for (auto& K : kids) next.push_back(std::move(K));
    }
    L.mean_branch = branch_sum / Rational(L.expanded);
    L.mean_ratio = ratio_sum / Rational(L.expanded);
    st.levels.push_back(L);
    if (L.min_branch == 0) {
      st.min_branching_positive = false;
      break;
    }
    // spread the expansions evenly over the survivors (left to right)
    frontier.clear();
    std::size_t S = next.size(), E = std::min<std::size_t>(S, static_cast<std::size_t>(cfg.max_expand));
    for (std::size_t e = 0; e < E; ++e) {
      std::size_t pick = E == 1 ? S / 2 : e * (S - 1) / (E - 1);
      frontier.push_back(std::move(next[pick]));
    }
  }
  if (st.min_branching_positive) {
    Rational pr = 1, pb = 1, pm = 1;
    for (auto& L : st.levels) {
      pr *= L.min_ratio;
      pm *= L.mean_ratio;
      pb *= Rational(L.min_branch);
    }
    Rational base = pow(inverse(cfg.beta), cfg.N * static_cast<long>(st.levels.size()));
    st.dimension = Enclosure(Rational(1)) - log_ratio_enc(inverse(pr), base, 64);
    st.raw_dimension = log_ratio_enc(pb, base, 64);
    st.mean_dimension = Enclosure(Rational(1)) - log_ratio_enc(inverse(pm), base, 64);
  }
  return st;
}

}  // namespace schmidt
