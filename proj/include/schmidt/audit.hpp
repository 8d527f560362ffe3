#pragma once

// Independent re-verification of serialized certificates. Everything is
// rebuilt from the JSON: Alice's strategy from the recorded inputs, every move
// re-validated, every membership proof re-derived.

#include <string>
#include <vector>

#include "schmidt/certify.hpp"
#include "schmidt/dimension.hpp"

namespace schmidt {

struct AuditReport {
  bool ok = true;
  std::vector<std::string> checks;    // passed checks, in order
  std::vector<std::string> failures;
  void pass(const std::string& what) { checks.push_back(what); }
  void fail(const std::string& what) {
    ok = false;
    failures.push_back(what);
  }
  void expect(bool cond, const std::string& what) { cond ? pass(what) : fail(what); }
  Json to_json() const { return Json{{"ok", ok}, {"checks", checks}, {"failures", failures}}; }
};

inline std::string dump_moves(const std::vector<Obstacle>& v) {
  Json a = Json::array();
  for (auto& o : v) {
    Json j = to_json(o);
    j.erase("turn");
    a.push_back(j);
  }
  return a.dump();
}

// Replays a transcript: legality of every move, Bob nested, optional final
// clearance, and (when given) Alice's moves recomputed from her strategy.
inline void audit_transcript(const Transcript& T, const AliceStrategy* alice, bool require_cleared, AuditReport& R) {
  if (T.bob.empty()) {
    R.fail("transcript has no Bob moves");
    return;
  }
  auto verdicts = replay(T);
  bool all_legal = true;
  for (auto& v : verdicts)
    if (!v.legal) {
      all_legal = false;
      R.fail("illegal move: " + v.rule + " " + v.detail);
      break;
    }
  if (all_legal) R.pass("all " + std::to_string(verdicts.size()) + " moves legal");
  bool nested = true;
  for (std::size_t m = 1; m < T.bob.size(); ++m) nested = nested && T.bob[m - 1].contains(T.bob[m]);
  R.expect(nested, "Bob's balls are nested");
  if (alice) {
    R.expect(to_json(alice->declared).dump() == to_json(T.params).dump(),
             "declared parameters match the rebuilt strategy (" + alice->declared.str() + ")");
    Transcript t;
    t.params = T.params;
    bool same = true;
    for (std::size_t m = 0; m < T.alice.size() && same; ++m) {
      t.bob.push_back(T.bob[m]);
      AliceMove mv = alice->respond(t);
      if (dump_moves(mv.obstacles) != dump_moves(T.alice[m])) {
        same = false;
        R.fail("Alice's move at turn " + std::to_string(m) + " differs from the rebuilt strategy");
      }
      t.alice.push_back(T.alice[m]);
    }
    if (same) R.pass("Alice's " + std::to_string(T.alice.size()) + " moves recomputed exactly");
  }
  if (require_cleared) R.expect(is_cleared(T.bob.back(), T.ledger()), "final ball avoids the whole ledger");
}

inline void audit_proof(const SetTag& set, const Rational& x, const MembershipProof& p, AuditReport& R) {
  std::string who = "proof for " + x.str() + " (" + p.type + ")";
  if (!p.enclosure.contains(x)) {
    R.fail(who + ": enclosure does not contain the element");
    return;
  }
  if (set.family == 'M') {
    CantorSpec spec(set.epsilon);
    if (p.type == "endpoint") {
      Interval K = spec.interval_of(p.address);
      Rational e = p.side == 'l' ? K.lo : K.hi;
      R.expect((p.side == 'l' || p.side == 'r') && e == x, who + ": endpoint of stage-" +
                                                               std::to_string(p.address.size()) + " interval");
    } else if (p.type == "stage") {
      Interval K = spec.interval_of(p.address);
      bool inside = K.contains(p.enclosure);
      bool meets = interval_meets_meps(spec, p.enclosure, -1).status == Meets::NonemptyCertified;
      R.expect(inside && meets, who + ": enclosure inside stage-" + std::to_string(p.address.size()) +
                                    " interval and meets M_eps");
    } else {
      R.fail(who + ": unsupported proof type for M_eps");
    }
    return;
  }
  if (p.type != "cf_prefix") {
    R.fail(who + ": F_n elements need cf_prefix proofs");
    return;
  }
  CFWord w = cf_prefix_of_interval(p.enclosure);
  bool prefix = w.size() >= p.prefix.size() &&
                std::equal(p.prefix.quotients.begin(), p.prefix.quotients.end(), w.quotients.begin());
  R.expect(prefix && p.prefix.quotients_at_most(set.n), who + ": certified prefix with quotients <= " +
                                                            std::to_string(set.n));
}

inline AuditReport audit_ap(const Json& j) {
  AuditReport R;
  APCertificate c = ap_certificate_from_json(j);
  R.expect(c.ok(), "status " + c.status);
  if (!c.ok()) return R;
  std::size_t k = c.elements.size();
  bool ap = k >= 2 && c.gap.sign() > 0;
  for (std::size_t i = 1; ap && i < k; ++i) ap = c.elements[i] - c.elements[i - 1] == c.gap;
  R.expect(ap, "elements form an exact progression with gap " + c.gap.str());
  R.expect(c.proofs.size() == k, "one membership proof per element");
  if (c.proofs.size() != k) return R;
  if (c.set.family == 'M') {
    R.expect(Rational(static_cast<long>(k)) <= inverse(c.set.epsilon) + Rational(1), "length <= 1/eps + 1");
  }
  for (std::size_t i = 0; i < k; ++i) audit_proof(c.set, c.elements[i], c.proofs[i], R);

  if (c.pipeline == "ap-meps") {
    Rational eps = rational_from_json(c.inputs.at("epsilon")), a = rational_from_json(c.inputs.at("a"));
    R.expect(eps <= Rational(1, 49), "eps <= 1/49");
    bool has_a = std::find(c.elements.begin(), c.elements.end(), a) != c.elements.end();
    R.expect(has_a && k == 3, "3-term progression through a");
    if (!c.transcript) {
      R.fail("ap-meps certificate carries no transcript");
      return R;
    }
    AliceStrategy alice = ap3_alice(eps, a);
    audit_transcript(*c.transcript, &alice, true, R);
    Interval E = c.transcript->bob.back().interval();
    Interval W = interval_from_json(c.inputs.at("window"));
    R.expect(W.contains(E), "final ball inside the window " + W.str());
    // t is the element other than a and the midpoint
    Rational t = c.elements.front() == a ? c.elements.back() : c.elements.front();
    R.expect(E.contains(t), "t lies in the final ball");
    Interval Em = E.affine(Rational(1, 2), a / Rational(2));
    R.expect(Em.contains(midpoint(a, t)), "(a+t)/2 lies in (a+E)/2");
  } else if (c.pipeline == "ap-via-game") {
    Rational eps = rational_from_json(c.inputs.at("epsilon")), t = rational_from_json(c.inputs.at("t"));
    Rational cc = rational_from_json(c.inputs.at("c"));
    long kk = c.inputs.at("k").get<long>();
    R.expect(static_cast<long>(k) == kk && c.gap == t, "progression of the requested length and gap");
    if (!c.transcript) {
      R.fail("ap-via-game certificate carries no transcript");
      return R;
    }
    AliceStrategy alice = ap_game_alice(eps, kk, t, cc);
    audit_transcript(*c.transcript, &alice, true, R);
    R.expect(c.transcript->bob.back().interval().contains(c.elements.front()), "first element lies in the final ball");
  } else if (c.pipeline == "ap4-newhouse") {
    R.expect(k == 4, "4-term progression");
    if (k == 4) {
      R.expect(c.elements[0] + c.elements[3] == Rational(1) && c.elements[1] + c.elements[2] == Rational(1),
               "progression symmetric about 1/2");
    }
  } else {
    R.fail("unknown ap pipeline '" + c.pipeline + "'");
  }
  return R;
}

inline AuditReport audit_point(const Json& j) {
  AuditReport R;
  PointCertificate c = point_certificate_from_json(j);
  R.expect(c.ok(), "status " + c.status);
  if (!c.ok()) return R;
  bool nested = !c.nested.empty();
  for (std::size_t i = 1; nested && i < c.nested.size(); ++i) nested = c.nested[i - 1].contains(c.nested[i]);
  R.expect(nested, "nested intervals");
  R.expect(!c.nested.empty() && c.nested.back() == c.enclosure, "enclosure is the innermost interval");
  CFWord w = cf_prefix_of_interval(c.enclosure);
  R.expect(w == c.cf_prefix, "CF prefix recomputed from the enclosure (" + std::to_string(w.size()) + " quotients)");

  if (c.pipeline == "f19-cap-c") {
    R.expect(c.quotient_bound == 19 && c.cf_prefix.quotients_at_most(19), "all certified quotients <= 19");
    if (!c.transcript) {
      R.fail("f19 certificate carries no transcript");
      return R;
    }
    AliceStrategy alice = f19_alice();
    audit_transcript(*c.transcript, &alice, true, R);
    bool same = c.transcript->bob.size() == c.nested.size();
    for (std::size_t i = 0; same && i < c.nested.size(); ++i) same = c.transcript->bob[i].interval() == c.nested[i];
    R.expect(same, "nested intervals are Bob's balls");
    // every deleted Delta has thickness <= alpha times the radius it answered
    bool thin = true;
    for (std::size_t m = 0; m < c.transcript->alice.size(); ++m)
      for (auto& o : c.transcript->alice[m])
        thin = thin && o.thickness <= c.transcript->params.alpha * c.transcript->bob[m].radius;
    R.expect(thin, "every deletion has thickness <= alpha rho_m");
    auto addr = deepest_containing(CantorSpec::ternary(), c.enclosure);
    R.expect(addr && ternary_address_digits(*addr) == c.ternary_prefix,
             "ternary prefix is the construction address of the enclosure");
    R.expect(intersects_ternary_cantor(c.enclosure).meets, "enclosure meets C");
  } else if (c.pipeline == "folding-f9") {
    long it = c.inputs.at("iterations").get<long>();
    std::size_t cf_depth = c.inputs.at("cf_depth").get<std::size_t>();
    FoldingChain ch = folding_chain(it);
    R.expect(ch.y_enclosure == c.enclosure, "y-enclosure recomputed from the folding chain");
    R.expect(ch.digits == c.ternary_prefix && c.ternary_prefix.find('1') == std::string::npos,
             "verified ternary digits avoid 1");
    bool head = c.cf_prefix.size() >= cf_depth;
    for (std::size_t i = 0; head && i < cf_depth; ++i) head = c.cf_prefix.quotients[i] <= 9;
    R.expect(head, "first " + std::to_string(cf_depth) + " quotients <= 9");
  } else {
    R.fail("unknown point pipeline '" + c.pipeline + "'");
  }
  return R;
}

inline AuditReport audit_sumset(const Json& j) {
  AuditReport R;
  SumsetCertificate c = sumset_certificate_from_json(j);
  R.expect(c.ok(), "status " + c.status);
  if (!c.ok()) return R;
  R.expect(c.window == sumset_window(c.t), "window is [max(0,t-1), min(1,t)]");
  R.expect(c.window.contains(c.x_enclosure), "x-enclosure inside the window");
  Interval tx = c.x_enclosure.affine(Rational(-1), c.t);
  R.expect(cf_prefix_of_interval(c.x_enclosure) == c.prefix_x && cf_prefix_of_interval(tx) == c.prefix_tx,
           "both CF prefixes recomputed");
  R.expect(c.quotient_bound == 49 && c.prefix_x.quotients_at_most(49) && c.prefix_tx.quotients_at_most(49),
           "quotients <= 49 on both prefixes");
  if (!c.transcript) {
    R.fail("sumset certificate carries no transcript");
    return R;
  }
  AliceStrategy alice = sumset_alice(c.t);
  audit_transcript(*c.transcript, &alice, true, R);
  R.expect(c.transcript->bob.back().interval() == c.x_enclosure, "x-enclosure is Bob's final ball");
  return R;
}

inline AuditReport audit_cover(const Json& j) {
  AuditReport R;
  CoverManifest m = manifest_from_json(j.at("manifest"));
  R.expect(manifest_digest(m) == j.at("digest").get<std::string>(), "manifest digest");
  CoverCheck ck = check_cover(m);
  R.expect(ck.ok, ck.ok ? "cover is a complete prefix code with correct leaf types" : ck.problem);
  long count = j.at("count").get<long>();
  R.expect(ck.a_leaves == count, "count equals the number of A-leaves");
  if (count > 0) {
    Enclosure e = log_ratio_enc(Rational(count), inverse(m.scale), 64);
    Enclosure rec = enclosure_from_json(j.at("estimate"));
    R.expect(rec.lo <= e.hi && e.lo <= rec.hi && rec.width() <= Rational(1, 1000000),
             "estimate enclosure consistent and narrower than 1e-6");
  }
  return R;
}

inline AuditReport audit_certificate(const Json& j) {
  AuditReport R;
  if (j.value("schema", std::string{}) != kCertificateSchema) {
    R.fail("unknown schema");
    return R;
  }
  std::string kind = j.value("kind", std::string{});
  if (kind == "ap") return audit_ap(j);
  if (kind == "point") return audit_point(j);
  if (kind == "sumset") return audit_sumset(j);
  if (kind == "cover") return audit_cover(j);
  R.fail("unknown certificate kind '" + kind + "'");
  return R;
}

// Bare transcripts: legality, nesting, clearance. No strategy is rebuilt.
inline AuditReport audit_transcript_json(const Json& j, bool require_cleared = false) {
  AuditReport R;
  Transcript T = transcript_from_json(j);
  audit_transcript(T, nullptr, require_cleared, R);
  return R;
}

}  // namespace schmidt
