#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "schmidt/audit.hpp"
#include "schmidt/certify.hpp"

using namespace schmidt;
using R = Rational;

namespace {

// longest progression among stage-n endpoints, by plain set lookups
std::size_t brute_longest_ap(const CantorSpec& spec, std::size_t stage, std::size_t kmax) {
  std::set<R> pts;
  for (auto& si : stage_intervals(spec, stage)) {
    pts.insert(si.interval.lo);
    pts.insert(si.interval.hi);
  }
  std::vector<R> v(pts.begin(), pts.end());
  std::size_t best = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      R g = v[j] - v[i];
      std::size_t len = 2;
      R x = v[j] + g;
      while (len < kmax && pts.count(x)) {
        ++len;
        x += g;
      }
      best = std::max(best, len);
    }
  return best;
}

}  // namespace

TEST(ApMeps, CertificateAndAudit) {
  auto c = certify_ap3_meps(R(1, 49), R(0), 20);
  ASSERT_EQ(c.status, "certified") << c.diagnostic;
  ASSERT_EQ(c.elements.size(), 3u);
  EXPECT_EQ(c.elements[0], R(0));
  EXPECT_EQ(c.elements[1] - c.elements[0], c.elements[2] - c.elements[1]);
  EXPECT_GT(c.gap, R(0));
  ASSERT_TRUE(c.transcript.has_value());
  const auto& P = c.transcript->params;
  EXPECT_EQ(P.alpha, R(1, 4));
  EXPECT_EQ(P.beta, R(1, 6));
  EXPECT_EQ(P.rho, R(1, 12));
  EXPECT_EQ(P.k, 2);
  // second route: witness search by the digit-expansion search, not the gap recursion
  CantorSpec spec(R(1, 49));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = c.proofs[i];
    EXPECT_TRUE(p.enclosure.contains(c.elements[i]));
    EXPECT_TRUE(intersects_meps(spec, p.enclosure).meets) << i;
    if (p.type == "endpoint") {
      EXPECT_TRUE(is_endpoint(spec, c.elements[i]).is_endpoint);
    }
  }
  // t comes from the right end window
  EXPECT_TRUE(Interval(R(5, 6), R(1)).contains(c.elements[2]));
  Json j = to_json(c);
  auto rep = audit_certificate(Json::parse(j.dump()));
  EXPECT_TRUE(rep.ok) << Json(rep.failures).dump();
  // round trip
  EXPECT_EQ(to_json(ap_certificate_from_json(j)).dump(), j.dump());
}

TEST(ApMeps, RightEndpointUsesLeftWindow) {
  auto c = certify_ap3_meps(R(1, 49), R(1), 16);
  ASSERT_TRUE(c.ok()) << c.diagnostic;
  EXPECT_EQ(c.elements.back(), R(1));
  EXPECT_TRUE(Interval(R(0), R(1, 6)).contains(c.elements.front()));
  EXPECT_TRUE(audit_certificate(to_json(c)).ok);
}

TEST(ApMeps, TamperingIsCaught) {
  Json j = to_json(certify_ap3_meps(R(1, 49), R(0), 12));
  {
    Json t = j;
    t["elements"][1] = R(R(1, 2)).str();
    EXPECT_FALSE(audit_certificate(t).ok);
  }
  {
    Json t = j;
    t["gap"] = "1/7";
    EXPECT_FALSE(audit_certificate(t).ok);
  }
  {
    // drop one of Alice's deletions
    Json t = j;
    bool dropped = false;
    for (auto& mv : t["transcript"]["moves"])
      if (mv.contains("alice") && !mv["alice"].empty()) {
        mv["alice"].erase(mv["alice"].begin());
        dropped = true;
        break;
      }
    ASSERT_TRUE(dropped);
    EXPECT_FALSE(audit_certificate(t).ok);
  }
  {
    Json t = j;
    t["schema"] = "something/else";
    EXPECT_FALSE(audit_certificate(t).ok);
  }
}

TEST(ApMeps, Preconditions) {
  EXPECT_THROW(certify_ap3_meps(R(1, 3), R(0), 10), ConfigError);
  EXPECT_THROW(certify_ap3_meps(R(1, 50), R(1, 3), 10), ConfigError);  // not an endpoint
  EXPECT_THROW(certify_ap3_meps(R(1, 49), R(0), 0), ConfigError);
}

TEST(Newhouse, FourTermProgressions) {
  auto c = certify_newhouse_ap4(R(1, 3), 12);
  ASSERT_EQ(c.status, "certified") << c.diagnostic;
  ASSERT_EQ(c.elements.size(), 4u);
  EXPECT_EQ(c.elements[2] - R(1, 2), R(1, 6));
  EXPECT_EQ(c.gap, R(1, 3));
  CantorSpec tern(R(1, 3));
  for (auto& x : c.elements) EXPECT_TRUE(is_endpoint(tern, x).is_endpoint) << x.str();
  EXPECT_TRUE(audit_certificate(to_json(c)).ok);

  auto d = certify_newhouse_ap4(R(1, 4), 14);
  ASSERT_TRUE(d.ok()) << d.diagnostic;
  ASSERT_EQ(d.elements.size(), 4u);
  EXPECT_EQ(d.elements[0] + d.elements[3], R(1));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_TRUE(intersects_meps(CantorSpec(R(1, 4)), d.proofs[i].enclosure).meets);
  EXPECT_TRUE(audit_certificate(to_json(d)).ok);
  EXPECT_THROW(certify_newhouse_ap4(R(2, 5), 10), ConfigError);
}

TEST(EndpointSearch, Examples) {
  auto r = search_ap_endpoints(CantorSpec(R(1, 3)), 2, 10);
  ASSERT_EQ(r.ap.size(), 4u);
  EXPECT_EQ(r.ap[0], R(0));
  EXPECT_EQ(r.gap, R(1, 3));
  // {0, 1/4, 3/4, 1} holds no 3-term progression
  EXPECT_EQ(search_ap_endpoints(CantorSpec(R(1, 2)), 1, 10).ap.size(), 2u);
  EXPECT_EQ(search_ap_endpoints(CantorSpec(R(1, 3)), 0, 10).ap.size(), 2u);
  EXPECT_THROW(search_ap_endpoints(CantorSpec(R(1, 3)), 2, 1), ConfigError);
}

TEST(EndpointSearch, MatchesBruteForceAndLengthBound) {
  for (R eps : {R(1, 2), R(2, 5), R(1, 3), R(1, 4), R(1, 5), R(1, 7), R(1, 10), R(3, 10)}) {
    CantorSpec spec(eps);
    for (std::size_t n = 0; n <= 5; ++n) {
      auto r = search_ap_endpoints(spec, n, 64);
      EXPECT_EQ(r.ap.size(), brute_longest_ap(spec, n, 64)) << eps.str() << " stage " << n;
      for (std::size_t i = 2; i < r.ap.size(); ++i) EXPECT_EQ(r.ap[i] - r.ap[i - 1], r.gap);
      for (auto& x : r.ap) EXPECT_TRUE(is_endpoint(spec, x).is_endpoint);
      EXPECT_LE(R(static_cast<long>(r.ap.size())), inverse(eps) + R(1)) << eps.str() << " stage " << n;
    }
  }
}

TEST(F19, CertificateAndLedger) {
  auto c = certify_f19_cap_c(24);
  ASSERT_EQ(c.status, "certified") << c.diagnostic;
  EXPECT_TRUE(c.cf_prefix.quotients_at_most(19));
  EXPECT_GE(c.cf_prefix.size(), 6u);
  // the enclosure is a ternary construction interval: digits 0/2 only
  EXPECT_EQ(c.ternary_prefix.size(), 24u);
  EXPECT_EQ(c.ternary_prefix.find('1'), std::string::npos);
  ASSERT_TRUE(c.transcript.has_value());
  for (std::size_t m = 0; m < c.transcript->alice.size(); ++m)
    for (auto& o : c.transcript->alice[m]) EXPECT_LE(o.thickness, R(1, 3) * c.transcript->bob[m].radius);
  // CF prefix oracle: every fraction in the enclosure shares it, checked at both ends
  auto lo = cf_expand(c.enclosure.lo), hi = cf_expand(c.enclosure.hi);
  for (std::size_t i = 0; i < c.cf_prefix.size(); ++i) {
    EXPECT_EQ(c.cf_prefix.quotients[i], lo.quotients.at(i));
    EXPECT_EQ(c.cf_prefix.quotients[i], hi.quotients.at(i));
  }
  Json j = to_json(c);
  EXPECT_TRUE(audit_certificate(j).ok);
  Json t = j;
  t["cf_prefix"]["quotients"][0] = "20";
  EXPECT_FALSE(audit_certificate(t).ok);
  EXPECT_EQ(to_json(point_certificate_from_json(j)).dump(), j.dump());
}

TEST(F19, DeeperGamesExtendThePrefix) {
  auto a = certify_f19_cap_c(16), b = certify_f19_cap_c(28);
  ASSERT_TRUE(a.ok() && b.ok());
  ASSERT_LE(a.cf_prefix.size(), b.cf_prefix.size());
  for (std::size_t i = 0; i < a.cf_prefix.size(); ++i) EXPECT_EQ(a.cf_prefix.quotients[i], b.cf_prefix.quotients[i]);
  EXPECT_TRUE(a.enclosure.contains(b.enclosure));
}

TEST(Sumset, WindowAndCertificates) {
  EXPECT_EQ(sumset_window(R(1, 6)), Interval(R(0), R(1, 6)));
  EXPECT_EQ(sumset_window(R(1)), Interval(R(0), R(1)));
  EXPECT_EQ(sumset_window(R(11, 6)), Interval(R(5, 6), R(1)));
  auto g = sumset_grid(21);
  ASSERT_EQ(g.size(), 21u);
  EXPECT_EQ(g.front(), R(1, 6));
  EXPECT_EQ(g.back(), R(11, 6));
  EXPECT_EQ(g[10], R(1));
  for (R t : {R(1, 6), R(1), R(11, 6), R(3, 5)}) {
    auto c = certify_sumset_f49(t, 16);
    ASSERT_EQ(c.status, "certified") << t.str() << " " << c.diagnostic;
    Interval tx = c.x_enclosure.affine(R(-1), t);
    EXPECT_TRUE(c.prefix_x.quotients_at_most(49));
    EXPECT_TRUE(c.prefix_tx.quotients_at_most(49));
    // x + (t - x) = t exactly for any x in the enclosure
    EXPECT_EQ(c.x_enclosure.lo + tx.hi, t);
    EXPECT_TRUE(audit_certificate(to_json(c)).ok);
  }
  EXPECT_THROW(certify_sumset_f49(R(2), 10), ConfigError);
  EXPECT_THROW(certify_sumset_f49(R(1, 7), 10), ConfigError);
}

TEST(Sumset, TamperingIsCaught) {
  Json j = to_json(certify_sumset_f49(R(1), 12));
  Json t = j;
  t["t"] = "9/10";
  EXPECT_FALSE(audit_certificate(t).ok);
  Json u = j;
  u["x_enclosure"] = to_json(Interval(R(1, 3), R(1, 2)));
  EXPECT_FALSE(audit_certificate(u).ok);
}

TEST(Folding, CertificateAndDigitPattern) {
  auto c = certify_folding_f9(6, 15);
  ASSERT_EQ(c.status, "certified") << c.diagnostic;
  EXPECT_TRUE(audit_certificate(to_json(c)).ok);
  auto ch = folding_chain(6);
  ASSERT_EQ(ch.exponents.size(), 7u);
  for (std::size_t k = 0; k < ch.exponents.size(); ++k) EXPECT_EQ(ch.exponents[k], (1UL << (k + 2)) - 1);
  EXPECT_EQ(ch.verified_digits, 510u);
  // independent digit oracle: 2s exactly at 2^k - 1, k >= 1
  std::vector<std::size_t> want;
  for (std::size_t p = 1; p <= ch.verified_digits; p = 2 * p + 1) want.push_back(p);
  EXPECT_EQ(ch.two_positions, want);
  // the limit's digits from y by exact long division
  R y = ch.y;
  std::string d;
  for (std::size_t i = 0; i < ch.verified_digits; ++i) {
    y *= R(3);
    Integer q = floor(y);
    d += static_cast<char>('0' + q.get_si());
    y -= R(q);
  }
  EXPECT_EQ(d, ch.digits);
  EXPECT_THROW(folding_chain(7), ConfigError);
  Json t = to_json(c);
  t["ternary_prefix"] = std::string("1") + c.ternary_prefix.substr(1);
  EXPECT_FALSE(audit_certificate(t).ok);
}

TEST(Budget, MatchesFloatingFormula) {
  for (double a : {1e-2, 3e-3, 1e-3, 1e-4, 1e-5, 1e-6}) {
    R alpha = R(1, static_cast<long>(std::llround(1 / a)));
    for (R K2 : {R(1), R(2), R(1, 2)}) {
      auto b = ap_length_budget(alpha, R(1, 4), K2);
      long double L = std::log(1.0L / alpha.to_double());
      long double X = (1 - std::pow(0.25L, 1 / L)) / (K2.to_double() * std::exp(1.0L) * alpha.to_double());
      if (std::fabs(X - std::round(X)) > 1e-9) {
        EXPECT_EQ(b.k, static_cast<long>(std::floor(X))) << a;
      }
      EXPECT_LE(b.c.lo.to_double(), 1 - 1 / L + 1e-15);
      EXPECT_GE(b.c.hi.to_double(), 1 - 1 / L - 1e-15);
      // k alpha log(1/alpha) tends to log 4 / (e K2)
      if (b.k > 0) {
        EXPECT_NEAR(b.ratio.mid().to_double(), static_cast<double>(b.k * alpha.to_double() * L), 1e-9);
      }
    }
  }
  EXPECT_EQ(ap_length_budget(R(1, 100), R(1, 4), R(1)).k, 9);
  EXPECT_TRUE(ap_length_budget(R(1, 100), R(1, 4), R(1000000)).empty());
  EXPECT_THROW(ap_length_budget(R(1, 2), R(1, 4), R(1)), ConfigError);
  EXPECT_THROW(ap_length_budget(R(1, 100), R(1, 3), R(1)), ConfigError);
}

TEST(ApViaGame, ShortProgressionSucceedsLongOneFails) {
  auto ok = find_ap_via_game(R(1, 3), 2, R(1, 6), 24);
  ASSERT_TRUE(ok.ok()) << ok.diagnostic;
  ASSERT_EQ(ok.elements.size(), 2u);
  EXPECT_EQ(ok.elements[1] - ok.elements[0], R(1, 6));
  CantorSpec tern(R(1, 3));
  for (auto& p : ok.proofs) EXPECT_TRUE(intersects_meps(tern, p.enclosure).meets);
  EXPECT_TRUE(audit_certificate(to_json(ok)).ok);

  auto bad = find_ap_via_game(R(1, 3), 10, R(1, 120), 20);
  EXPECT_EQ(bad.status, "failed");
  EXPECT_FALSE(bad.diagnostic.empty());
  EXPECT_FALSE(audit_certificate(to_json(bad)).ok);
  EXPECT_THROW(find_ap_via_game(R(1, 3), 2, R(1, 2), 10), ConfigError);
  EXPECT_THROW(find_ap_via_game(R(1, 3), 1, R(1, 6), 10), ConfigError);
}

TEST(Diagnostics, TernaryProgressionIsTight) {
  auto d = meps_diagnostics(CantorSpec(R(1, 3)), {R(0), R(1, 3), R(2, 3), R(1)});
  EXPECT_EQ(d.address, "");
  EXPECT_EQ(d.ratio, R(3));
  EXPECT_TRUE(d.length_bound);
  EXPECT_TRUE(d.gap_at_least_J);
  EXPECT_EQ(d.J, Interval(R(1, 3), R(2, 3)));
  auto e = meps_diagnostics(CantorSpec(R(1, 3)), {R(0), R(2, 9)});
  EXPECT_EQ(e.address, "L");
  EXPECT_TRUE(e.gap_at_least_J);
  // the length bound k - 1 <= 1/eps holds for every endpoint progression found by search
  for (R eps : {R(1, 3), R(1, 5), R(1, 6)}) {
    auto r = search_ap_endpoints(CantorSpec(eps), 4, 64);
    auto dd = meps_diagnostics(CantorSpec(eps), r.ap);
    EXPECT_TRUE(dd.length_bound) << eps.str();
    EXPECT_TRUE(dd.gap_at_least_J) << eps.str();
  }
}
