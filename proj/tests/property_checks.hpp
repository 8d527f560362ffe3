#pragma once

// Randomized property checks shared by the unit suites and the acceptance
// binary. Each returns the number of violations found.

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "schmidt/dimension.hpp"
#include "schmidt/strategies.hpp"

namespace props {

using namespace schmidt;

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); }
  Rational unit(long steps = 1000003) { return Rational(uniform(0, steps), steps); }
};

struct Report {
  long trials = 0;
  long violations = 0;
  std::string first;
  void violation(const std::string& what) {
    if (violations++ == 0) first = what;
  }
};

// Members Delta(p/q) = B(p/q, eps/q^2) of C_l (l < (1-2eps) q^-2 <= l/beta)
// have pairwise distance > l; checked on a window of 40 l, reduced p/q only.
inline Report cl_separation(long trials, std::uint64_t seed) {
  Rng r(seed);
  Report rep;
  while (rep.trials < trials) {
    Rational eps(r.uniform(1, 499), 1000);
    Rational rr = eps / (Rational(1) - eps);
    Rational bmin = rr * rr;
    Rational beta = bmin + (Rational(1) - bmin) * Rational(r.uniform(0, 999), 1000);
    if (beta >= Rational(1) || beta < bmin || beta.is_zero()) continue;
    long Q = r.uniform(1, 80);
    Rational top = Rational(1) - Rational(2) * eps;
    Rational l = top / Rational(Q * Q) * Rational(r.uniform(500, 1500), 1000);
    // q range: beta top / l <= q^2 < top / l
    Rational q2lo = beta * top / l, q2hi = top / l;
    if (q2hi / q2lo > Rational(1000000)) continue;
    long qlo = std::max<long>(1, isqrt_floor(q2lo).get_si());
    while (Rational(qlo * qlo) < q2lo) ++qlo;
    long qhi = isqrt_floor(q2hi).get_si() + 1;
    while (qhi >= 1 && Rational(qhi * qhi) >= q2hi) --qhi;
    ++rep.trials;
    if (qhi < qlo) continue;
    if (qhi > 200000) continue;
    Rational x0 = r.unit();
    Rational w0 = x0 - l, w1 = x0 + Rational(40) * l;
    struct M {
      Rational c, rad;
    };
    std::vector<M> ms;
    for (long q = qlo; q <= qhi; ++q) {
      Rational rq(q);
      long p0 = floor(w0 * rq).get_si(), p1 = ceil(w1 * rq).get_si();
      for (long p = p0; p <= p1; ++p)
        if (std::gcd(p < 0 ? -p : p, q) == 1) ms.push_back({Rational(p, q), eps / Rational(q * q)});
    }
    std::sort(ms.begin(), ms.end(), [](const M& a, const M& b) { return a.c < b.c; });
    for (std::size_t i = 1; i < ms.size(); ++i) {
      Rational d = ms[i].c - ms[i - 1].c - ms[i].rad - ms[i - 1].rad;
      if (!(d > l)) {
        rep.violation("eps " + eps.str() + " beta " + beta.str() + " l " + l.str() + ": " + ms[i - 1].c.str() +
                      " and " + ms[i].c.str());
        break;
      }
    }
    // the strategy's enumeration sees the same members on a random ball of length l
    Rational a = x0 + Rational(r.uniform(0, 1000), 100) * l;
    Interval B(a, a + l);
    auto got = detail::delta_members(B, eps, beta);
    std::vector<Rational> want;
    for (auto& m : ms)
      if (distance(B, m.c) <= m.rad) want.push_back(m.c);
    if (got != want || got.size() > 1) rep.violation("delta_members disagrees on " + B.str());
  }
  return rep;
}

// Rationals with denominator q < Q inside a sup-norm square of side 2s with
// (2s)^2 <= 1/(2 Q^3) lie on one line.
inline Report simplex_d2(long trials, std::uint64_t seed) {
  Rng r(seed);
  Report rep;
  for (; rep.trials < trials; ++rep.trials) {
    long Q = r.uniform(2, 400);
    // largest s = m / 2^40 with 8 s^2 Q^3 <= 1
    Integer den = Integer(1) << 40;
    Rational target = inverse(Rational(8 * Q * Q) * Rational(Q));
    Integer m = isqrt_floor(target * Rational(den * den));
    Rational s(m, den);
    // centre near a rational with small denominator so that points exist
    long q0 = r.uniform(1, std::max<long>(1, Q - 1));
    Rational cx = Rational(r.uniform(0, q0), q0) + s * Rational(r.uniform(-100, 100), 100);
    Rational cy = Rational(r.uniform(0, q0), q0) + s * Rational(r.uniform(-100, 100), 100);
    auto pts = rational_points_in({cx, cy}, s, Integer(Q - 1));
    if (pts.size() < 3) continue;
    const auto& p0 = pts[0];
    std::size_t j = 1;
    while (j < pts.size() && pts[j] == p0) ++j;
    const auto& p1 = pts[j];
    for (auto& p : pts) {
      Rational cross = (p1[0] - p0[0]) * (p[1] - p0[1]) - (p1[1] - p0[1]) * (p[0] - p0[0]);
      if (!cross.is_zero()) {
        rep.violation("Q " + std::to_string(Q) + " centre (" + cx.str() + ", " + cy.str() + ")");
        break;
      }
    }
  }
  return rep;
}

// Randomized legal adversaries against the subdivision Bob with
// k alpha + (k+1) beta < 1; Bob must never get stuck.
inline Report bob_never_stuck(long trials, std::uint64_t seed, long depth = 8) {
  Rng r(seed);
  Report rep;
  while (rep.trials < trials) {
    long k = r.uniform(1, 3);
    Rational beta(r.uniform(1, 1000), 1000 * (k + 1));
    Rational room = Rational(1) - Rational(k + 1) * beta;  // k alpha < room
    Rational alpha = room / Rational(k) * Rational(r.uniform(1, 999), 1000);
    if (!(Rational(k) * alpha + Rational(k + 1) * beta < Rational(1))) continue;
    ++rep.trials;
    GameParams P = GameParams::absolute(alpha, beta, Rational(1, 2), k);
    auto rng = std::make_shared<Rng>(r.g());
    AliceStrategy adv;
    adv.declared = P;
    adv.respond = [rng, k, alpha, beta](const Transcript& T) {
      AliceMove mv;
      Interval B = T.bob.back().interval();
      Rational cap = alpha * B.radius();
      auto kids = subdivide(B, k + 1, beta);
      for (long i = 0; i < k; ++i) {
        Rational rad = cap * Rational(rng->uniform(0, 1000), 1000);
        Rational c;
        long mode = rng->uniform(0, 3);
        if (mode == 0) {
          c = B.lo + B.length() * rng->unit();
        } else {
          const Interval& K = kids[static_cast<std::size_t>(rng->uniform(0, k))];
          // aim at a child, or just outside one of its ends
          Rational off = rad * Rational(rng->uniform(-1000, 1000), 1000);
          c = mode == 1 ? K.center() : (mode == 2 ? K.lo : K.hi) + off;
        }
        mv.obstacles.push_back(Obstacle::point({c}, rad));
      }
      return mv;
    };
    BobStrategy bob = bob_subdivision(k + 1, beta, alpha, Interval(Rational(0), Rational(1)));
    bob.backtrack_levels = 0;
    MatchResult m = run_match(P, adv, bob, depth);
    if (m.transcript.status != MatchStatus::DepthReached)
      rep.violation("k " + std::to_string(k) + " alpha " + alpha.str() + " beta " + beta.str() + ": " +
                    to_string(m.transcript.status) + " " + m.diagnostic);
  }
  return rep;
}

// The survivor-tree threshold inequality on random rational tuples, decided
// exactly by the library and cross-checked in long double where the margin
// is clear.
inline Report threshold_inequality(long trials, std::uint64_t seed) {
  Rng r(seed);
  Report rep;
  for (; rep.trials < trials; ++rep.trials) {
    auto pos = [&]() {
      long e = r.uniform(-4, 4);
      Rational v(r.uniform(1, 9999), 1000);
      return e >= 0 ? v * pow(Rational(10), e) : v / pow(Rational(10), -e);
    };
    Rational x = pos();
    Rational y = r.uniform(0, 9) == 0 ? x : pos();
    Rational gamma(r.uniform(1, 1000), 1000);
    long D = r.uniform(1, 4);
    long v = r.uniform(1, 2 * D), u = r.uniform(0, v);
    Rational c(u, D), eta(v, D);
    bool ok = threshold_inequality_holds(x, y, gamma, c, eta);
    long double X = x.to_double(), Y = y.to_double(), G = gamma.to_double();
    long double C = c.to_double(), H = eta.to_double();
    long double lhs = std::min(1.0L, std::pow(X / (G * Y), C)) * std::pow(X + 2 * Y, H);
    long double rhs = std::pow(3.0L, H) * std::pow(X, C) * std::max(std::pow(X, H - C), std::pow(Y, H - C) / std::pow(G, C));
    if (!ok) rep.violation("x " + x.str() + " y " + y.str() + " gamma " + gamma.str() + " c " + c.str() + " eta " + eta.str());
    else if (lhs > rhs * (1 + 1e-12L)) rep.violation("floating cross-check disagrees at x " + x.str() + " y " + y.str());
  }
  return rep;
}

}  // namespace props
