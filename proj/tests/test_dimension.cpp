#include <gtest/gtest.h>

#include <cmath>

#include "property_checks.hpp"
#include "schmidt/dimension.hpp"

using namespace schmidt;
using R = Rational;

namespace {

// Type-A leaf count by a second classifier: the gap recursion on the ternary
// construction instead of the digit search used by the estimator.
long recount(long n, const R& scale) {
  CantorSpec tern(R(1, 3));
  std::vector<long> w;
  long count = 0;
  auto rec = [&](auto&& self) -> void {
    for (long a = 1; a <= n; ++a) {
      w.push_back(a);
      Interval I = cylinder_interval(w, n);
      auto m = interval_meets_meps(tern, I, -1);
      EXPECT_NE(m.status, Meets::Unknown);
      if (m.status == Meets::NonemptyCertified) {
        if (I.length() < scale) ++count;
        else self(self);
      }
      w.pop_back();
    }
  };
  rec(rec);
  return count;
}

}  // namespace

TEST(CoverEstimate, SmallScales) {
  for (R scale : {R(1, 2), R(1, 10), R(1, 100), R(1, 10000), R(1, 1000000)}) {
    auto d = hd_estimate_fn_cap_cantor(2, scale);
    EXPECT_EQ(d.count, recount(2, scale)) << scale.str();
    EXPECT_EQ(d.count, static_cast<long>(d.manifest.a_leaves.size()));
    EXPECT_EQ(d.b_count, static_cast<long>(d.manifest.b_leaves.size()));
    auto ck = check_cover(d.manifest);
    EXPECT_TRUE(ck.ok) << ck.problem;
    EXPECT_EQ(ck.a_leaves, d.count);
    // estimate = log(count)/log(1/scale)
    long double want = std::log(static_cast<long double>(d.count)) / std::log(1 / scale.to_double());
    EXPECT_NEAR(d.estimate.mid().to_double(), static_cast<double>(want), 1e-12);
    EXPECT_LT(d.estimate.width(), R(1, 1000000));
  }
}

TEST(CoverEstimate, KnownValues) {
  auto a = hd_estimate_fn_cap_cantor(2, R(1, 100000000));
  auto b = hd_estimate_fn_cap_cantor(2, R(1, 10000000000LL));
  EXPECT_EQ(a.count, 14);
  EXPECT_EQ(b.count, 23);
  for (auto* d : {&a, &b}) {
    EXPECT_GE(d->estimate.lo, R(13, 100));
    EXPECT_LE(d->estimate.hi, R(15, 100));
  }
  EXPECT_LE(abs(a.estimate.mid() - b.estimate.mid()), R(2, 100));
}

TEST(CoverEstimate, InternalNodeCountIsMonotone) {
  // the A-leaf count itself is not monotone in the scale (a node splitting can
  // lose children that miss C); internal meeting nodes are
  long prev = -1;
  for (long e = 1; e <= 40; ++e) {
    R scale = inverse(pow(R(3, 2), e));
    auto d = hd_estimate_fn_cap_cantor(2, scale, 20000000, false);
    EXPECT_GE(d.internal_meeting, prev) << scale.str();
    prev = d.internal_meeting;
  }
  EXPECT_EQ(hd_estimate_fn_cap_cantor(2, R(1, 10)).count, 3);
  EXPECT_EQ(hd_estimate_fn_cap_cantor(2, R(1, 100)).count, 1);
}

TEST(CoverEstimate, TamperedManifestsAreRejected) {
  auto d = hd_estimate_fn_cap_cantor(2, R(1, 100000000));
  ASSERT_GE(d.manifest.a_leaves.size(), 2u);
  {
    auto m = d.manifest;
    m.a_leaves.pop_back();  // no longer complete
    EXPECT_FALSE(check_cover(m).ok);
  }
  {
    auto m = d.manifest;
    m.b_leaves.push_back(m.a_leaves.back());  // misclassified
    m.a_leaves.pop_back();
    EXPECT_FALSE(check_cover(m).ok);
  }
  {
    auto m = d.manifest;
    auto w = m.a_leaves[0];
    w.push_back(1);  // overlapping prefixes
    m.a_leaves.push_back(w);
    EXPECT_FALSE(check_cover(m).ok);
  }
  Json j = cover_certificate_json(d);
  EXPECT_EQ(manifest_digest(manifest_from_json(j.at("manifest"))), d.digest);
  EXPECT_THROW(hd_estimate_fn_cap_cantor(1, R(1, 2)), ConfigError);
  EXPECT_THROW(hd_estimate_fn_cap_cantor(2, R(1, 1000000000000LL), 100), ResourceError);
}

TEST(Formulas, HdLower) {
  auto e = hd_lower_formula(4, 2, R(1, 4));
  ASSERT_TRUE(e.exact());
  EXPECT_EQ(e.lo, R(1, 2));
  auto t = hd_lower_formula(3, 1, R(1, 3));
  EXPECT_NEAR(t.mid().to_double(), std::log(2.0) / std::log(3.0), 1e-15);
  EXPECT_TRUE(hd_lower_formula(2, 1, R(1, 3)).exact());
  EXPECT_EQ(hd_lower_formula(2, 1, R(1, 3)).lo, R(0));
  EXPECT_THROW(hd_lower_formula(2, 2, R(1, 3)), DomainError);
  // N - k surviving pieces of ratio beta
  for (long N = 2; N <= 12; ++N)
    for (long k = 0; k < N; ++k) {
      R beta(1, N + 1);
      auto h = hd_lower_formula(N, k, beta);
      long double want = std::log(static_cast<long double>(N - k)) / std::log(static_cast<long double>(N + 1));
      EXPECT_LE(h.lo.to_double(), static_cast<double>(want) + 1e-15);
      EXPECT_GE(h.hi.to_double(), static_cast<double>(want) - 1e-15);
    }
}

TEST(Formulas, IndependenceAndPotentialBound) {
  EXPECT_EQ(independence_heuristic(R(531, 1000), R(631, 1000), 1), R(162, 1000));
  EXPECT_EQ(independence_heuristic(R(1, 3), R(1, 3), 1), R(0));
  EXPECT_THROW(independence_heuristic(R(2), R(0), 1), DomainError);

  // alpha = 0 leaves delta
  auto z = potential_hd_bound(R(1, 2), R(1), R(0), R(1, 4), R(1, 2), R(1), R(4));
  EXPECT_TRUE(z.bound.exact());
  EXPECT_EQ(z.bound.lo, R(1, 2));
  ASSERT_TRUE(z.condition.has_value());
  EXPECT_TRUE(*z.condition);
  // boundary: alpha^c = (1 - beta^(eta-c))/K2 with c = 1, eta = 2, beta = 1/4, alpha = 1/2, K2 = 3/2
  auto b = potential_hd_bound(R(1), R(2), R(1, 2), R(1, 4), R(1), R(1), R(3, 2));
  ASSERT_TRUE(b.condition.has_value());
  EXPECT_TRUE(*b.condition);
  EXPECT_EQ(b.lhs.lo, R(1, 2));
  EXPECT_EQ(b.rhs.lo, R(1, 2));
  auto over = potential_hd_bound(R(1), R(2), R(1, 2) + R(1, 1000000), R(1, 4), R(1), R(1), R(3, 2));
  ASSERT_TRUE(over.condition.has_value());
  EXPECT_FALSE(*over.condition);
  // irrational powers: bound = delta - K1 alpha^eta / log 4
  auto ir = potential_hd_bound(R(1), R(1, 2), R(1, 100), R(1, 4), R(1, 3), R(1), R(2));
  EXPECT_NEAR(ir.bound.mid().to_double(), 1 - std::sqrt(0.01) / std::log(4.0), 1e-12);
  EXPECT_THROW(potential_hd_bound(R(1), R(1, 2), R(1, 100), R(1, 4), R(1, 2), R(1), R(2)), ConfigError);
  EXPECT_THROW(potential_hd_bound(R(1), R(1), R(1, 100), R(1, 3), R(1, 2), R(1), R(2)), ConfigError);

  EXPECT_EQ(default_K2(R(1, 2)), R(4));
  // small e: the log term wins
  R k = default_K2(R(1, 1000));
  EXPECT_EQ(k, R(1000000));
  EXPECT_GE(default_K2(R(9, 10)).to_double(), 2 / 0.9 * std::log(1 / 0.9));
}

TEST(Formulas, ExactPowers) {
  EXPECT_EQ(*exact_pow(R(8, 27), R(2, 3)), R(4, 9));
  EXPECT_EQ(*exact_pow(R(1, 4), R(-1, 2)), R(2));
  EXPECT_FALSE(exact_pow(R(2), R(1, 2)).has_value());
  auto e = pow_any(R(2), R(1, 2), 96);
  EXPECT_LE(e.lo * e.lo, R(2));
  EXPECT_GE(e.hi * e.hi, R(2));
  EXPECT_LT(e.width(), R(1, 1000000000000LL));
}

TEST(ThresholdInequality, ExamplesAndRandomTuples) {
  // x = y: both sides reduce to (3x)^eta up to gamma^-c
  EXPECT_TRUE(threshold_inequality_holds(R(1, 7), R(1, 7), R(1, 4), R(1, 2), R(1)));
  EXPECT_TRUE(threshold_inequality_holds(R(5), R(1, 1000), R(1), R(0), R(1)));
  EXPECT_THROW(threshold_inequality_holds(R(1), R(1), R(1), R(1), R(1, 2)), DomainError);
  EXPECT_THROW(threshold_inequality_holds(R(0), R(1), R(1), R(0), R(1)), DomainError);
  EXPECT_THROW(threshold_inequality_holds(R(1), R(1), R(1), R(1, 4099), R(1)), ResourceError);
  auto rep = props::threshold_inequality(20000, 71);
  EXPECT_EQ(rep.violations, 0) << rep.first;
}

TEST(SurvivorTree, TrivialAliceKeepsEverything) {
  for (long N = 1; N <= 4; ++N) {
    SurvivorConfig cfg;
    cfg.N = N;
    auto s = survivor_tree(alice_trivial(R(1, 4)), cfg);
    ASSERT_TRUE(s.dimension && s.raw_dimension);
    EXPECT_TRUE(s.dimension->contains(R(1)));
    EXPECT_LE(s.raw_dimension->hi, R(1));
    // raw counts lose the grid slack, at most one level's worth of it
    EXPECT_GE(s.raw_dimension->lo, R(1) - inverse(R(N))) << N;
    for (auto& L : s.levels) EXPECT_EQ(L.min_ratio, R(1));
    EXPECT_TRUE(s.min_branching_positive);
  }
}

TEST(SurvivorTree, Ba1BranchesAndShrinksWithGamma) {
  SurvivorConfig cfg;
  cfg.N = 3;
  auto A = alice_ba1(R(1, 100), R(1, 4));
  auto s = survivor_tree(A, cfg);
  ASSERT_TRUE(s.dimension.has_value());
  EXPECT_TRUE(s.min_branching_positive);
  EXPECT_LE(s.dimension->hi, R(1));
  // with one level only the root is expanded, so the runs compare the same
  // children; a smaller gamma is a stricter threshold
  Rational prev = 2;
  long prev_branch = 1L << 40;
  Rational first = -1;
  for (R g : {R(1), R(1, 2), R(1, 4), R(1, 8), R(1, 16)}) {
    SurvivorConfig c2 = cfg;
    c2.gamma = g;
    c2.levels = 1;
    auto t = survivor_tree(A, c2);
    ASSERT_EQ(t.levels.size(), 1u);
    EXPECT_LE(t.levels[0].min_ratio, prev) << g.str();
    EXPECT_LE(t.levels[0].min_branch, prev_branch) << g.str();
    if (first.sign() < 0) first = t.levels[0].min_ratio;
    prev = t.levels[0].min_ratio;
    prev_branch = t.levels[0].min_branch;
  }
  EXPECT_LT(prev, first);  // the threshold actually bites somewhere in the range
  SurvivorConfig bad = cfg;
  bad.beta = R(1, 3);
  EXPECT_THROW(survivor_tree(alice_ba1(R(1, 100), R(1, 3)), bad), ConfigError);
  EXPECT_THROW(survivor_tree(alice_ba1(R(1, 100), R(1, 3)), cfg), ConfigError);
}
