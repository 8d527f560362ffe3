#pragma once

// Certificate pipelines. Each one plays a game (or searches a tree), then packages
// what it found as a certificate that audit.hpp can re-check from JSON alone.

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schmidt/cantor.hpp"
#include "schmidt/contfrac.hpp"
#include "schmidt/games.hpp"
#include "schmidt/strategies.hpp"

namespace schmidt {

inline constexpr const char* kCertificateSchema = "schmidt.certificate/1";

// Why an element belongs to the target set.
struct MembershipProof {
  std::string type;     // "endpoint", "stage" or "cf_prefix"
  Interval enclosure;   // contains the element (degenerate for endpoints)
  std::string address;  // construction interval (endpoint / stage proofs)
  char side = 0;        // 'l' / 'r' for endpoint proofs
  CFWord prefix;        // cf_prefix proofs
};

struct SetTag {
  char family = 'M';  // 'M': middle-eps Cantor set, 'F': bounded quotients
  Rational epsilon;
  long n = 0;
  std::string str() const { return family == 'M' ? "M_" + epsilon.str() : "F_" + std::to_string(n); }
};

struct APCertificate {
  std::string pipeline;
  Json inputs;
  SetTag set;
  std::vector<Rational> elements;
  Rational gap;
  std::vector<MembershipProof> proofs;
  std::optional<Transcript> transcript;
  std::string status;  // "certified", "certified_to_stage", "failed", "unknown"
  std::string diagnostic;
  std::vector<std::string> notes;
  bool ok() const { return status == "certified" || status == "certified_to_stage"; }
};

struct PointCertificate {
  std::string pipeline;
  Json inputs;
  std::vector<Interval> nested;
  std::optional<Transcript> transcript;
  Interval enclosure;
  CFWord cf_prefix;
  long quotient_bound = 0;
  std::string ternary_prefix;  // digits 0/2
  Json extra;
  std::string status;
  std::string diagnostic;
  bool ok() const { return status == "certified"; }
};

struct SumsetCertificate {
  Rational t;
  Json inputs;
  Interval window, x_enclosure;
  CFWord prefix_x, prefix_tx;
  long quotient_bound = 49;
  std::optional<Transcript> transcript;
  std::string status;
  std::string diagnostic;
  bool ok() const { return status == "certified"; }
};

// ---------------------------------------------------------------- helpers

// Address of the smallest construction interval (up to max_stage) containing I,
// or nullopt when I is not inside [0,1].
inline std::optional<std::string> deepest_containing(const CantorSpec& spec, const Interval& I,
                                                     std::size_t max_stage = 4096) {
  Interval K{0, 1};
  if (!K.contains(I)) return std::nullopt;
  std::string addr;
  while (addr.size() < max_stage) {
    Interval L = spec.left_child(K), R = spec.right_child(K);
    if (L.contains(I)) {
      K = L;
      addr += 'L';
    } else if (R.contains(I)) {
      K = R;
      addr += 'R';
    } else {
      break;
    }
  }
  return addr;
}

inline std::string mirror_address(const std::string& a) {
  std::string m = a;
  for (char& ch : m) ch = ch == 'L' ? 'R' : 'L';
  return m;
}

// Endpoint proof when x is a construction endpoint, otherwise a stage proof
// through the enclosure E (x in E).
inline std::optional<MembershipProof> meps_proof(const CantorSpec& spec, const Rational& x, const Interval& E) {
  auto ep = is_endpoint(spec, x);
  MembershipProof p;
  if (ep.is_endpoint) {
    p.type = "endpoint";
    p.enclosure = Interval(x, x);
    p.address = ep.address;
    p.side = ep.side;
    return p;
  }
  auto addr = deepest_containing(spec, E);
  if (!addr || !E.contains(x)) return std::nullopt;
  p.type = "stage";
  p.enclosure = E;
  p.address = *addr;
  return p;
}

inline Json to_json(const MembershipProof& p) {
  Json j{{"type", p.type}, {"enclosure", to_json(p.enclosure)}};
  if (p.type == "endpoint" || p.type == "stage") j["address"] = p.address;
  if (p.type == "endpoint") j["side"] = std::string(1, p.side);
  if (p.type == "cf_prefix") j["prefix"] = to_json(p.prefix);
  return j;
}

inline MembershipProof proof_from_json(const Json& j) {
  MembershipProof p;
  p.type = j.at("type").get<std::string>();
  p.enclosure = interval_from_json(j.at("enclosure"));
  p.address = j.value("address", std::string{});
  std::string side = j.value("side", std::string{});
  p.side = side.empty() ? 0 : side[0];
  if (j.contains("prefix")) p.prefix = cfword_from_json(j.at("prefix"));
  return p;
}

inline Json to_json(const SetTag& s) {
  if (s.family == 'M') return Json{{"family", "M"}, {"epsilon", s.epsilon.str()}};
  return Json{{"family", "F"}, {"n", s.n}};
}

inline SetTag settag_from_json(const Json& j) {
  SetTag s;
  std::string f = j.at("family").get<std::string>();
  if (f == "M") {
    s.family = 'M';
    s.epsilon = rational_from_json(j.at("epsilon"));
  } else if (f == "F") {
    s.family = 'F';
    s.n = j.at("n").get<long>();
  } else {
    throw ConfigError("unknown set family " + f);
  }
  return s;
}

// ---------------------------------------------------------------- strategies used by the pipelines

// Rebuilt from the certificate inputs by the auditor as well.
inline AliceStrategy ap3_alice(const Rational& eps, const Rational& a) {
  CantorSpec spec(eps);
  AliceStrategy s1 = lift_params(alice_meps(spec, Rational(1, 6)),
                                 GameParams::absolute(Rational(1, 4), Rational(1, 6), Rational(1, 24), 1));
  // S2 = 2 S1 - a: a point x is in S2 iff (x + a)/2 is in S1
  return combine_alice({{s1, Similarity::identity()}, {s1, Similarity::affine(Rational(2), -a)}},
                       CombineMode::AbsoluteSum);
}

inline AliceStrategy f19_alice() { return as_potential(alice_fn(19, Rational(1, 3)), Rational(0)); }

inline AliceStrategy sumset_alice(const Rational& t) {
  AliceStrategy s1 = alice_fn(49, Rational(1, 6));
  return combine_alice({{s1, Similarity::identity()}, {s1, Similarity::affine(Rational(-1), t)}},
                       CombineMode::AbsoluteSum);
}

inline Rational ap_game_beta() { return Rational(1, 4); }

// Exponent used for the k-fold intersection: 1 - 1/log(1/alpha) rounded
// down, or 1/2 when alpha is too large for that formula.
inline Rational ap_game_c(const Rational& alpha) {
  if (alpha * Rational(271828, 100000) >= Rational(1)) return Rational(1, 2);
  Enclosure c = Enclosure(Rational(1)) - Enclosure(Rational(1)) / log_enc(inverse(alpha), 96);
  Rational lo = round_down(c.lo, 16);
  if (lo.sign() <= 0) return Rational(1, 2);
  return lo;
}

inline AliceStrategy ap_game_alice(const Rational& eps, long k, const Rational& t, const Rational& c) {
  CantorSpec spec(eps);
  AliceStrategy base = alice_meps(spec, ap_game_beta());
  std::vector<Component> parts;
  // S~ - i t: x belongs iff x + i t is in S~
  for (long i = 0; i < k; ++i) parts.push_back({base, Similarity::affine(Rational(1), -Rational(i) * t)});
  return combine_alice(parts, CombineMode::PotentialSum, c);
}

// ---------------------------------------------------------------- 3-term progressions in M_eps

inline APCertificate certify_ap3_meps(const Rational& eps, const Rational& a, long depth) {
  if (eps.sign() <= 0 || eps > Rational(1, 49)) throw ConfigError("certify_ap3_meps needs 0 < eps <= 1/49");
  if (depth < 1) throw ConfigError("depth must be >= 1");
  CantorSpec spec(eps);
  auto ea = is_endpoint(spec, a);
  if (!ea.is_endpoint) throw ConfigError("a = " + a.str() + " must be a construction endpoint of M_" + eps.str());
  APCertificate cert;
  cert.pipeline = "ap-meps";
  cert.set = {'M', eps, 0};
  Interval window = a <= Rational(1, 2) ? Interval(Rational(5, 6), Rational(1)) : Interval(Rational(0), Rational(1, 6));
  cert.inputs = Json{{"epsilon", eps.str()}, {"a", a.str()}, {"depth", depth}, {"window", to_json(window)}};
  AliceStrategy alice = ap3_alice(eps, a);
  BobStrategy bob = bob_subdivision(3, Rational(1, 6), Rational(1, 4), window);
  MatchResult r = run_match(alice.declared, alice, bob, depth);
  cert.transcript = r.transcript;
  if (r.transcript.status != MatchStatus::DepthReached || !r.cleared) {
    cert.status = "failed";
    cert.diagnostic = "game did not produce a cleared enclosure: " + r.diagnostic;
    return cert;
  }
  Interval E = r.enclosure.interval();
  auto hit = interval_meets_meps(spec, E, -1);
  if (hit.status != Meets::NonemptyCertified) {
    cert.status = "failed";
    cert.diagnostic = "final enclosure " + E.str() + " misses M_eps (" + to_string(hit.status) + ")";
    return cert;
  }
  Rational t = *hit.endpoint;
  Rational m = midpoint(a, t);
  Interval Em = E.affine(Rational(1, 2), a / Rational(2));
  auto hm = interval_meets_meps(spec, Em, -1);
  if (hm.status != Meets::NonemptyCertified) {
    cert.status = "failed";
    cert.diagnostic = "enclosure of (a+t)/2 misses M_eps";
    return cert;
  }
  auto pa = meps_proof(spec, a, Interval(a, a));
  auto pt = meps_proof(spec, t, Interval(t, t));
  auto pm = meps_proof(spec, m, Em);
  if (!pa || !pt || !pm) {
    cert.status = "failed";
    cert.diagnostic = "could not build membership proofs";
    return cert;
  }
  std::vector<std::pair<Rational, MembershipProof>> el{{a, *pa}, {m, *pm}, {t, *pt}};
  std::sort(el.begin(), el.end(), [](auto& x, auto& y) { return x.first < y.first; });
  for (auto& [x, p] : el) {
    cert.elements.push_back(x);
    cert.proofs.push_back(p);
  }
  cert.gap = cert.elements[1] - cert.elements[0];
  cert.status = "certified";
  cert.notes.push_back("t = " + t.str() + " is a construction endpoint inside the final enclosure");
  cert.notes.push_back("(a+t)/2 proof: " + pm->type + " at stage " + std::to_string(pm->address.size()));
  return cert;
}

// ---------------------------------------------------------------- Newhouse AP4

// Finds u = 1/2 + t in M_eps with 3u - 1 in M_eps by a synchronized DFS over
// pairs of construction intervals; the AP is {1-v, 1-u, u, v}, v = 3u - 1.
inline APCertificate certify_newhouse_ap4(const Rational& eps, long depth, long node_cap = 400000) {
  if (eps.sign() <= 0 || eps > Rational(1, 3)) throw ConfigError("certify_newhouse_ap4 needs 0 < eps <= 1/3");
  if (depth < 1) throw ConfigError("depth must be >= 1");
  CantorSpec spec(eps);
  APCertificate cert;
  cert.pipeline = "ap4-newhouse";
  cert.set = {'M', eps, 0};
  cert.inputs = Json{{"epsilon", eps.str()}, {"depth", depth}};
  const Rational half(1, 2), two3(2, 3);
  struct Node {
    std::string a1, a2;
    Interval K1, K2;
  };
  auto window = [&](const Node& nd) -> std::optional<Interval> {
    Rational lo = max(max(nd.K1.lo, half), (nd.K2.lo + Rational(1)) / Rational(3));
    Rational hi = min(min(nd.K1.hi, two3), (nd.K2.hi + Rational(1)) / Rational(3));
    if (hi < lo || hi <= half) return std::nullopt;
    return Interval(lo, hi);
  };
  std::optional<Rational> exact_u;
  std::optional<std::pair<Node, Interval>> deep_leaf;
  long nodes = 0;
  std::vector<Node> stack{{"", "", Interval{0, 1}, Interval{0, 1}}};
  while (!stack.empty() && !exact_u && nodes < node_cap) {
    Node nd = stack.back();
    stack.pop_back();
    ++nodes;
    auto U = window(nd);
    if (!U) continue;
    for (const Rational& e : {nd.K1.lo, nd.K1.hi})
      if (!exact_u && U->contains(e) && e > half && is_endpoint(spec, Rational(3) * e - Rational(1)).is_endpoint &&
          is_endpoint(spec, e).is_endpoint)
        exact_u = e;
    for (const Rational& f : {nd.K2.lo, nd.K2.hi}) {
      Rational u = (f + Rational(1)) / Rational(3);
      if (!exact_u && U->contains(u) && u > half && is_endpoint(spec, u).is_endpoint && is_endpoint(spec, f).is_endpoint)
        exact_u = u;
    }
    if (exact_u) break;
    long s1 = static_cast<long>(nd.a1.size()), s2 = static_cast<long>(nd.a2.size());
    if (s1 >= depth && s2 >= depth) {
      if (!deep_leaf) deep_leaf = {nd, *U};
      continue;
    }
    bool refine1 = s2 >= depth || (s1 < depth && Rational(3) * nd.K1.length() >= nd.K2.length());
    // push right first so the left child is explored first
    for (char side : {'R', 'L'}) {
      Node ch = nd;
      if (refine1) {
        ch.K1 = spec.child(nd.K1, side);
        ch.a1 += side;
      } else {
        ch.K2 = spec.child(nd.K2, side);
        ch.a2 += side;
      }
      stack.push_back(ch);
    }
  }
  cert.notes.push_back("pair-tree nodes visited: " + std::to_string(nodes));
  Rational u;
  Interval U;
  if (exact_u) {
    u = *exact_u;
    U = Interval(u, u);
    cert.status = "certified";
  } else if (deep_leaf) {
    U = deep_leaf->second;
    u = U.lo > half ? U.lo : U.center();
    cert.status = "certified_to_stage";
  } else {
    cert.status = "unknown";
    cert.diagnostic = nodes >= node_cap ? "node cap reached without a pair at depth" : "no consistent pair found";
    return cert;
  }
  Rational v = Rational(3) * u - Rational(1);
  Interval V = U.affine(Rational(3), Rational(-1));
  std::vector<Rational> xs{Rational(1) - v, Rational(1) - u, u, v};
  std::vector<Interval> encs{V.affine(Rational(-1), Rational(1)), U.affine(Rational(-1), Rational(1)), U, V};
  for (std::size_t i = 0; i < 4; ++i) {
    auto p = meps_proof(spec, xs[i], encs[i]);
    if (!p) {
      cert.status = "failed";
      cert.diagnostic = "no membership proof for " + xs[i].str();
      return cert;
    }
    cert.elements.push_back(xs[i]);
    cert.proofs.push_back(*p);
  }
  cert.gap = u - (Rational(1) - u);
  return cert;
}

// ---------------------------------------------------------------- endpoint AP search

struct APSearchResult {
  std::vector<Rational> ap;
  Rational gap;
  std::size_t stage = 0;
  std::size_t endpoints = 0;
};

// Longest AP (<= kmax terms) made of stage-n construction endpoints; ties go
// to the larger gap, then the smaller start.
inline APSearchResult search_ap_endpoints(const CantorSpec& spec, std::size_t stage, std::size_t kmax,
                                          std::size_t pair_cap = 50000000) {
  if (kmax < 2) throw ConfigError("kmax must be >= 2");
  auto ivs = stage_intervals(spec, stage);
  // common denominator den(lambda)^stage turns endpoints into integers
  Integer D = ipow(spec.lambda.den(), stage);
  std::vector<Integer> e;
  for (auto& si : ivs) {
    for (auto* x : {&si.interval.lo, &si.interval.hi}) {
      Rational y = *x * Rational(D);
      if (!y.is_integer()) throw std::logic_error("endpoint off the common lattice");
      e.push_back(y.num());
    }
  }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  std::size_t E = e.size();
  if (E * (E - 1) / 2 > pair_cap) throw ResourceError("search_ap_endpoints: too many endpoint pairs at stage " + std::to_string(stage));
  auto has = [&](const Integer& x) { return std::binary_search(e.begin(), e.end(), x); };
  std::size_t best_len = 0;
  Integer best_start, best_gap;
  for (std::size_t i = 0; i < E; ++i)
    for (std::size_t j = i + 1; j < E; ++j) {
      Integer g = e[j] - e[i];
      if (has(e[i] - g)) continue;  // not the start of a maximal run
      std::size_t len = 2;
      Integer x = e[j] + g;
      while (len < kmax && has(x)) {
        ++len;
        x += g;
      }
      if (len > best_len || (len == best_len && g > best_gap)) {
        best_len = len;
        best_start = e[i];
        best_gap = g;
      }
    }
  APSearchResult r;
  r.stage = stage;
  r.endpoints = E;
  r.gap = Rational(best_gap, D);
  for (std::size_t i = 0; i < best_len; ++i) r.ap.push_back(Rational(Integer(best_start + best_gap * Integer(static_cast<unsigned long>(i))), D));
  return r;
}

// ---------------------------------------------------------------- F_19 ∩ C

inline std::string ternary_address_digits(const std::string& addr) {
  std::string d;
  for (char ch : addr) d += ch == 'L' ? '0' : '2';
  return d;
}

inline PointCertificate certify_f19_cap_c(long depth) {
  if (depth < 1) throw ConfigError("depth must be >= 1");
  PointCertificate cert;
  cert.pipeline = "f19-cap-c";
  cert.inputs = Json{{"depth", depth}};
  cert.quotient_bound = 19;
  AliceStrategy alice = f19_alice();
  BobStrategy bob = bob_construction_survival(CantorSpec::ternary());
  MatchResult r = run_match(alice.declared, alice, bob, depth);
  cert.transcript = r.transcript;
  for (auto& B : r.transcript.bob) cert.nested.push_back(B.interval());
  if (r.transcript.status != MatchStatus::DepthReached || !r.cleared) {
    cert.status = "failed";
    cert.diagnostic = "survival failed: " + r.diagnostic;
    return cert;
  }
  cert.enclosure = r.enclosure.interval();
  auto addr = deepest_containing(CantorSpec::ternary(), cert.enclosure);
  cert.ternary_prefix = addr ? ternary_address_digits(*addr) : "";
  if (cert.enclosure.lo.sign() <= 0 || cert.enclosure.hi >= Rational(1)) {
    cert.status = "failed";
    cert.diagnostic = "enclosure touches 0 or 1, no continued-fraction prefix";
    return cert;
  }
  cert.cf_prefix = cf_prefix_of_interval(cert.enclosure);
  if (!cert.cf_prefix.quotients_at_most(19)) {
    cert.status = "failed";
    cert.diagnostic = "certified prefix has a quotient above 19: " + cert.cf_prefix.str();
    return cert;
  }
  cert.status = "certified";
  return cert;
}

// ---------------------------------------------------------------- sumsets of F_49

inline Interval sumset_window(const Rational& t) {
  return {max(Rational(0), t - Rational(1)), min(Rational(1), t)};
}

inline SumsetCertificate certify_sumset_f49(const Rational& t, long depth) {
  if (t < Rational(1, 6) || t > Rational(11, 6)) throw ConfigError("certify_sumset_f49 needs t in [1/6, 11/6]");
  if (depth < 1) throw ConfigError("depth must be >= 1");
  SumsetCertificate cert;
  cert.t = t;
  cert.inputs = Json{{"t", t.str()}, {"depth", depth}};
  cert.window = sumset_window(t);
  AliceStrategy alice = sumset_alice(t);
  BobStrategy bob = bob_subdivision(3, Rational(1, 6), Rational(1, 4), cert.window);
  MatchResult r = run_match(alice.declared, alice, bob, depth);
  cert.transcript = r.transcript;
  if (r.transcript.status != MatchStatus::DepthReached || !r.cleared) {
    cert.status = "failed";
    cert.diagnostic = "game did not produce a cleared enclosure: " + r.diagnostic;
    return cert;
  }
  cert.x_enclosure = r.enclosure.interval();
  Interval tx = cert.x_enclosure.affine(Rational(-1), t);
  for (auto* I : {&cert.x_enclosure, &tx})
    if (I->lo.sign() <= 0 || I->hi >= Rational(1)) {
      cert.status = "failed";
      cert.diagnostic = "enclosure " + I->str() + " touches 0 or 1";
      return cert;
    }
  cert.prefix_x = cf_prefix_of_interval(cert.x_enclosure);
  cert.prefix_tx = cf_prefix_of_interval(tx);
  if (!cert.prefix_x.quotients_at_most(49) || !cert.prefix_tx.quotients_at_most(49)) {
    cert.status = "failed";
    cert.diagnostic = "a certified prefix has a quotient above 49";
    return cert;
  }
  cert.status = "certified";
  return cert;
}

inline std::vector<Rational> sumset_grid(std::size_t count = 21) {
  std::vector<Rational> g;
  if (count < 2) throw ConfigError("grid needs at least 2 points");
  for (std::size_t i = 0; i < count; ++i)
    g.push_back(Rational(1, 6) + Rational(5, 3) * Rational(static_cast<long>(i), static_cast<long>(count - 1)));
  return g;
}

// ---------------------------------------------------------------- folding chain

struct FoldingChain {
  std::vector<Rational> x;
  std::vector<unsigned long> exponents;  // den(x_k) = 3^exponent
  Rational y;                            // 2 - 2 x_n
  Interval y_enclosure;
  std::size_t verified_digits = 0;       // digits of the limit fixed by y_n
  std::string digits;                    // ternary digits of y on the verified prefix
  std::vector<std::size_t> two_positions;
};

inline FoldingChain folding_chain(long iterations) {
  if (iterations < 1 || iterations > 6) throw ConfigError("folding iterations must lie in 1..6");
  FoldingChain c;
  Rational x(17, 27);
  for (long k = 0; k <= iterations; ++k) {
    auto g = is_good(x);
    if (!g) throw std::logic_error("folding chain: x_" + std::to_string(k) + " = " + x.str() + " is not good");
    c.x.push_back(x);
    c.exponents.push_back(g->power_of_3_exponent);
    if (k < iterations) x = folding_step(x);
  }
  c.y = Rational(2) - Rational(2) * c.x.back();
  // the remaining corrections add 2 sum_{j >= n+3} 3^-(2^j - 1) < 3^-M
  unsigned long M = (1UL << (iterations + 3)) - 2;
  Rational w = Rational(Integer(1), ipow(Integer(3), M));
  c.y_enclosure = Interval(c.y - w, c.y + w);
  c.verified_digits = M;
  TernaryDigits td = ternary_digits(c.y, M);
  for (std::size_t i = 0; i < td.digits.size(); ++i) {
    c.digits += static_cast<char>('0' + td.digits[i]);
    if (td.digits[i] == 2) c.two_positions.push_back(i + 1);
  }
  return c;
}

inline PointCertificate certify_folding_f9(long iterations, std::size_t cf_depth) {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  FoldingChain ch = folding_chain(iterations);
  PointCertificate cert;
  cert.pipeline = "folding-f9";
  cert.inputs = Json{{"iterations", iterations}, {"cf_depth", cf_depth}};
  cert.quotient_bound = 9;
  cert.enclosure = ch.y_enclosure;
  cert.nested.push_back(ch.y_enclosure);
  cert.ternary_prefix = ch.digits;
  cert.cf_prefix = cf_prefix_of_interval(ch.y_enclosure);
  Json xs = Json::array(), ex = Json::array(), tp = Json::array();
  for (auto& x : ch.x) xs.push_back(x.str());
  for (auto e : ch.exponents) ex.push_back(e);
  for (auto p : ch.two_positions) tp.push_back(p);
  cert.extra = Json{{"chain", xs}, {"exponents", ex}, {"y", ch.y.str()}, {"verified_digits", ch.verified_digits},
                    {"two_positions", tp}};
  for (char d : ch.digits)
    if (d == '1') {
      cert.status = "failed";
      cert.diagnostic = "ternary digit 1 in the verified prefix of y";
      return cert;
    }
  if (cert.cf_prefix.size() < cf_depth) {
    cert.status = "failed";
    cert.diagnostic = "certified CF prefix has only " + std::to_string(cert.cf_prefix.size()) + " quotients";
    return cert;
  }
  CFWord head;
  head.quotients.assign(cert.cf_prefix.quotients.begin(), cert.cf_prefix.quotients.begin() + static_cast<long>(cf_depth));
  if (!head.quotients_at_most(9)) {
    cert.status = "failed";
    cert.diagnostic = "a quotient above 9 among the first " + std::to_string(cf_depth) + ": " + head.str();
    return cert;
  }
  cert.status = "certified";
  return cert;
}

// ---------------------------------------------------------------- progression length budget

struct APBudget {
  long k = 0;
  Enclosure c;       // 1 - 1/log(1/alpha)
  Enclosure alpha_c; // = e * alpha
  Enclosure slack;   // 1 - beta^(1-c)
  Enclosure ratio;   // k * alpha * log(1/alpha)
  bool empty() const { return k == 0; }
};

inline APBudget ap_length_budget(const Rational& alpha, const Rational& beta, const Rational& K2, long bits = 128) {
  if (alpha.sign() <= 0 || beta.sign() <= 0 || beta > Rational(1, 4) || K2.sign() <= 0)
    throw ConfigError("ap_length_budget needs alpha > 0, 0 < beta <= 1/4, K2 > 0");
  Enclosure L = log_enc(inverse(alpha), bits);  // log(1/alpha)
  if (!(L.lo > Rational(1))) throw ConfigError("ap_length_budget needs alpha < 1/e so that c lies in (0,1)");
  APBudget b;
  Enclosure one(Rational(1));
  b.c = one - one / L;
  // alpha^c = alpha * alpha^(-1/log(1/alpha)) = e * alpha
  b.alpha_c = exp_enc(Rational(1), bits) * Enclosure(alpha);
  // beta^(1-c) = exp(-log(1/beta) / log(1/alpha))
  Enclosure e = exp_enc(-(log_enc(inverse(beta), bits) / L), bits);
  b.slack = one - e;
  Enclosure X = b.slack / (Enclosure(K2) * b.alpha_c);
  Integer klo = floor(X.lo);
  b.k = klo.fits_slong_p() ? klo.get_si() : std::numeric_limits<long>::max();
  if (b.k < 0) b.k = 0;
  b.ratio = Enclosure(Rational(b.k) * alpha) * L;
  return b;
}

// ---------------------------------------------------------------- progressions from the translated game

inline APCertificate find_ap_via_game(const Rational& eps, long k, const Rational& t, long depth,
                                      std::optional<Rational> c_override = {}, long retry_cap = 4000) {
  if (k < 2) throw ConfigError("find_ap_via_game needs k >= 2");
  if (depth < 1) throw ConfigError("depth must be >= 1");
  CantorSpec spec(eps);
  Rational beta = ap_game_beta();
  Rational width = spec.lambda * beta;  // Bob starts on [0, 2 rho]
  Rational tmax = (Rational(1) - width) / Rational(k);
  if (t.sign() <= 0 || t > tmax) throw ConfigError("find_ap_via_game needs 0 < t <= " + tmax.str());
  AliceStrategy base = alice_meps(spec, beta);
  Rational c = c_override.value_or(ap_game_c(base.declared.alpha));
  APCertificate cert;
  cert.pipeline = "ap-via-game";
  cert.set = {'M', eps, 0};
  cert.inputs = Json{{"epsilon", eps.str()}, {"k", k}, {"t", t.str()}, {"depth", depth}, {"c", c.str()}};
  AliceStrategy alice = ap_game_alice(eps, k, t, c);
  BobStrategy bob = bob_equal_pieces(4, Interval(Rational(0), width));
  bob.retry_cap = retry_cap;
  MatchResult r = run_match(alice.declared, alice, bob, depth);
  cert.transcript = r.transcript;
  if (r.transcript.status != MatchStatus::DepthReached || !r.cleared) {
    cert.status = "failed";
    cert.diagnostic = "no cleared enclosure for k = " + std::to_string(k) + ": " + r.diagnostic;
    return cert;
  }
  Interval E = r.enclosure.interval();
  auto hit = interval_meets_meps(spec, E, -1);
  if (hit.status != Meets::NonemptyCertified) {
    cert.status = "failed";
    cert.diagnostic = "final enclosure misses M_eps";
    return cert;
  }
  Rational x = *hit.endpoint;
  for (long i = 0; i < k; ++i) {
    Rational xi = x + Rational(i) * t;
    Interval Ei = E.affine(Rational(1), Rational(i) * t);
    if (interval_meets_meps(spec, Ei, -1).status != Meets::NonemptyCertified) {
      cert.status = "failed";
      cert.diagnostic = "translate " + std::to_string(i) + " of the enclosure misses M_eps";
      return cert;
    }
    auto p = meps_proof(spec, xi, Ei);
    if (!p) {
      cert.status = "failed";
      cert.diagnostic = "no membership proof for " + xi.str();
      return cert;
    }
    cert.elements.push_back(xi);
    cert.proofs.push_back(*p);
  }
  cert.gap = t;
  bool all_exact = std::all_of(cert.proofs.begin(), cert.proofs.end(), [](auto& p) { return p.type == "endpoint"; });
  cert.status = all_exact ? "certified" : "certified_to_stage";
  return cert;
}

// ---------------------------------------------------------------- upper-bound diagnostics

inline CFWord common_prefix(const CFWord& a, const CFWord& b) {
  CFWord w;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()) && a.quotients[i] == b.quotients[i]; ++i)
    w.quotients.push_back(a.quotients[i]);
  return w;
}

struct MepsDiagnostics {
  std::string address;  // smallest construction interval I containing the AP
  Interval I, J;        // J: the middle gap of I
  bool gap_at_least_J = false;
  bool length_bound = false;  // k - 1 <= |I|/|J| = 1/eps
  Rational ratio;             // |I|/|J|
};

inline MepsDiagnostics meps_diagnostics(const CantorSpec& spec, const std::vector<Rational>& ap) {
  MepsDiagnostics d;
  Interval hull(ap.front(), ap.back());
  auto addr = deepest_containing(spec, hull);
  if (!addr) throw DomainError("AP not inside [0,1]");
  d.address = *addr;
  d.I = spec.interval_of(d.address);
  d.J = spec.gap_of(d.I);
  Rational t = ap.size() > 1 ? ap[1] - ap[0] : Rational(0);
  d.gap_at_least_J = t >= d.J.length();
  d.ratio = d.I.length() / d.J.length();
  d.length_bound = Rational(static_cast<long>(ap.size()) - 1) <= d.ratio;
  return d;
}

struct FnDiagnostics {
  CFWord omega;
  std::optional<Integer> i, j;
  Rational diameter, gap;
  std::optional<Rational> ratio;      // diam / t
  std::optional<Rational> near_i;     // |[0; w, i] - [0; w, n+1]|
  std::optional<Rational> across;     // |[0; w, j, n+1] - [0; w, i, 1]|
};

inline FnDiagnostics fn_diagnostics(const std::vector<CFWord>& prefixes, const std::vector<Interval>& encs, long n) {
  FnDiagnostics d;
  if (prefixes.empty()) return d;
  d.omega = prefixes[0];
  for (auto& p : prefixes) d.omega = common_prefix(d.omega, p);
  std::set<Integer> next;
  for (auto& p : prefixes)
    if (p.size() > d.omega.size()) next.insert(p.quotients[d.omega.size()]);
  if (next.size() >= 2) {
    d.i = *next.begin();
    d.j = *std::next(next.begin());
    auto val = [&](std::vector<Integer> tail) {
      CFWord w = d.omega;
      for (auto& x : tail) w.quotients.push_back(x);
      return cf_value(w);
    };
    d.near_i = abs(val({*d.i}) - val({Integer(n + 1)}));
    d.across = abs(val({*d.j, Integer(n + 1)}) - val({*d.i, Integer(1)}));
  }
  Rational lo = encs[0].lo, hi = encs[0].hi;
  for (auto& e : encs) lo = min(lo, e.lo), hi = max(hi, e.hi);
  d.diameter = hi - lo;
  if (encs.size() >= 2) {
    Rational c0 = encs[0].center(), c1 = encs[1].center();
    d.gap = abs(c1 - c0);
    if (d.gap.sign() > 0) d.ratio = d.diameter / d.gap;
  }
  return d;
}

inline Json ap_instance_diagnostics(const APCertificate& cert) {
  Json out{{"pipeline", cert.pipeline}, {"set", to_json(cert.set)}, {"length", cert.elements.size()}};
  if (cert.set.family == 'M') {
    auto d = meps_diagnostics(CantorSpec(cert.set.epsilon), cert.elements);
    out["I"] = to_json(d.I);
    out["I_address"] = d.address;
    out["J"] = to_json(d.J);
    out["t_at_least_J"] = d.gap_at_least_J;
    out["k_minus_1_le_ratio"] = d.length_bound;
    out["ratio_I_over_J"] = d.ratio.str();
    return out;
  }
  std::vector<CFWord> ps;
  std::vector<Interval> es;
  for (auto& p : cert.proofs) {
    ps.push_back(p.prefix);
    es.push_back(p.enclosure);
  }
  auto d = fn_diagnostics(ps, es, cert.set.n);
  out["omega"] = to_json(d.omega);
  if (d.i) out["i"] = d.i->get_str();
  if (d.j) out["j"] = d.j->get_str();
  if (d.near_i) out["near_i"] = d.near_i->str();
  if (d.across) out["across"] = d.across->str();
  if (d.ratio) out["diam_over_t"] = d.ratio->str();
  return out;
}

// Sumset certificates read as the two-element set {x, t - x} in F_49.
inline Json sumset_diagnostics(const SumsetCertificate& cert) {
  Interval tx = cert.x_enclosure.affine(Rational(-1), cert.t);
  auto d = fn_diagnostics({cert.prefix_x, cert.prefix_tx}, {cert.x_enclosure, tx}, cert.quotient_bound);
  Json out{{"t", cert.t.str()}, {"omega", to_json(d.omega)}};
  if (d.i) out["i"] = d.i->get_str();
  if (d.j) out["j"] = d.j->get_str();
  if (d.near_i) out["near_i"] = d.near_i->str();
  if (d.across) out["across"] = d.across->str();
  if (d.ratio) out["diam_over_t"] = d.ratio->str();
  return out;
}

// ---------------------------------------------------------------- serialization

inline Json to_json(const APCertificate& c) {
  Json el = Json::array(), pr = Json::array();
  for (auto& x : c.elements) el.push_back(x.str());
  for (auto& p : c.proofs) pr.push_back(to_json(p));
  Json j{{"schema", kCertificateSchema}, {"kind", "ap"}, {"pipeline", c.pipeline}, {"inputs", c.inputs},
         {"set", to_json(c.set)}, {"elements", el}, {"gap", c.gap.str()}, {"proofs", pr},
         {"status", c.status}, {"notes", c.notes}};
  if (!c.diagnostic.empty()) j["diagnostic"] = c.diagnostic;
  if (c.transcript) j["transcript"] = to_json(*c.transcript);
  return j;
}

inline APCertificate ap_certificate_from_json(const Json& j) {
  APCertificate c;
  c.pipeline = j.at("pipeline").get<std::string>();
  c.inputs = j.at("inputs");
  c.set = settag_from_json(j.at("set"));
  c.elements = rationals_from_json(j.at("elements"));
  c.gap = rational_from_json(j.at("gap"));
  for (auto& p : j.at("proofs")) c.proofs.push_back(proof_from_json(p));
  c.status = j.at("status").get<std::string>();
  c.diagnostic = j.value("diagnostic", std::string{});
  c.notes = j.value("notes", std::vector<std::string>{});
  if (j.contains("transcript")) c.transcript = transcript_from_json(j.at("transcript"));
  return c;
}

inline Json to_json(const PointCertificate& c) {
  Json nested = Json::array();
  for (auto& I : c.nested) nested.push_back(to_json(I));
  Json j{{"schema", kCertificateSchema}, {"kind", "point"}, {"pipeline", c.pipeline}, {"inputs", c.inputs},
         {"nested", nested}, {"enclosure", to_json(c.enclosure)}, {"cf_prefix", to_json(c.cf_prefix)},
         {"quotient_bound", c.quotient_bound}, {"ternary_prefix", c.ternary_prefix}, {"status", c.status}};
  if (!c.extra.is_null()) j["extra"] = c.extra;
  if (!c.diagnostic.empty()) j["diagnostic"] = c.diagnostic;
  if (c.transcript) {
    j["transcript"] = to_json(*c.transcript);
    j["ledger"] = obstacles_to_json(c.transcript->ledger());
  }
  return j;
}

inline PointCertificate point_certificate_from_json(const Json& j) {
  PointCertificate c;
  c.pipeline = j.at("pipeline").get<std::string>();
  c.inputs = j.at("inputs");
  for (auto& I : j.at("nested")) c.nested.push_back(interval_from_json(I));
  c.enclosure = interval_from_json(j.at("enclosure"));
  c.cf_prefix = cfword_from_json(j.at("cf_prefix"));
  c.quotient_bound = j.at("quotient_bound").get<long>();
  c.ternary_prefix = j.at("ternary_prefix").get<std::string>();
  c.status = j.at("status").get<std::string>();
  if (j.contains("extra")) c.extra = j.at("extra");
  c.diagnostic = j.value("diagnostic", std::string{});
  if (j.contains("transcript")) c.transcript = transcript_from_json(j.at("transcript"));
  return c;
}

inline Json to_json(const SumsetCertificate& c) {
  Json j{{"schema", kCertificateSchema}, {"kind", "sumset"}, {"pipeline", "sumset-f49"}, {"inputs", c.inputs},
         {"t", c.t.str()}, {"window", to_json(c.window)}, {"x_enclosure", to_json(c.x_enclosure)},
         {"prefix_x", to_json(c.prefix_x)}, {"prefix_tx", to_json(c.prefix_tx)},
         {"quotient_bound", c.quotient_bound}, {"status", c.status}};
  if (!c.diagnostic.empty()) j["diagnostic"] = c.diagnostic;
  if (c.transcript) j["transcript"] = to_json(*c.transcript);
  return j;
}

inline SumsetCertificate sumset_certificate_from_json(const Json& j) {
  SumsetCertificate c;
  c.t = rational_from_json(j.at("t"));
  c.inputs = j.at("inputs");
  c.window = interval_from_json(j.at("window"));
  c.x_enclosure = interval_from_json(j.at("x_enclosure"));
  c.prefix_x = cfword_from_json(j.at("prefix_x"));
  c.prefix_tx = cfword_from_json(j.at("prefix_tx"));
  c.quotient_bound = j.at("quotient_bound").get<long>();
  c.status = j.at("status").get<std::string>();
  c.diagnostic = j.value("diagnostic", std::string{});
  if (j.contains("transcript")) c.transcript = transcript_from_json(j.at("transcript"));
  return c;
}

}  // namespace schmidt
