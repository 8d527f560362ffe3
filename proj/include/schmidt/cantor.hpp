#pragma once

// Middle-epsilon Cantor sets M_eps: [0,1] with the open middle interval of
// relative length eps removed from every construction interval, forever.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schmidt/interval.hpp"

namespace schmidt {

inline constexpr std::size_t kDefaultStageCap = std::size_t(1) << 22;

struct CantorSpec {
  Rational epsilon;
  Rational lambda;

  explicit CantorSpec(Rational eps) : epsilon(std::move(eps)) {
    if (epsilon.sign() <= 0 || epsilon >= Rational(1))
      throw DomainError("epsilon must lie in (0,1), got " + epsilon.str());
    lambda = (Rational(1) - epsilon) / Rational(2);
  }
  static CantorSpec ternary() { return CantorSpec(Rational(1, 3)); }

  Interval left_child(const Interval& K) const { return {K.lo, K.lo + lambda * K.length()}; }
  Interval right_child(const Interval& K) const { return {K.hi - lambda * K.length(), K.hi}; }
  // Closed hull of the removed middle interval.
  Interval gap_of(const Interval& K) const {
    return {K.lo + lambda * K.length(), K.hi - lambda * K.length()};
  }
  Interval child(const Interval& K, char side) const { return side == 'L' ? left_child(K) : right_child(K); }

  Interval interval_of(const std::string& address) const {
    Interval K{0, 1};
    for (char ch : address) {
      if (ch != 'L' && ch != 'R') throw DomainError("bad stage address '" + address + "'");
      K = child(K, ch);
    }
    return K;
  }
};

struct StageInterval {
  std::string address;
  Interval interval;
};

inline void check_cap(std::size_t n, std::size_t cap) {
  if (n >= 63 || (std::size_t(1) << n) > cap)
    throw ResourceError("2^" + std::to_string(n) + " intervals exceed the cap of " + std::to_string(cap));
}

inline std::vector<StageInterval> stage_intervals(const CantorSpec& spec, std::size_t n,
                                                  std::size_t cap = kDefaultStageCap) {
  check_cap(n, cap);
  std::vector<StageInterval> cur{{"", Interval{0, 1}}};
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<StageInterval> next;
    next.reserve(cur.size() * 2);
    for (auto& si : cur) {
      next.push_back({si.address + 'L', spec.left_child(si.interval)});
      next.push_back({si.address + 'R', spec.right_child(si.interval)});
    }
    cur = std::move(next);
  }
  return cur;
}

struct Gap {
  std::size_t stage;
  std::string address;  // construction interval the gap was removed from
  Interval hull;
};

// Gaps of stages 0..n, left to right.
inline std::vector<Gap> gaps_up_to(const CantorSpec& spec, std::size_t n, std::size_t cap = kDefaultStageCap) {
  check_cap(n + 1, cap * 2);
  std::vector<Gap> out;
  // in-order traversal yields left-to-right order
  auto rec = [&](auto&& self, const std::string& addr, const Interval& K) -> void {
    std::size_t s = addr.size();
    if (s > n) return;
    self(self, addr + 'L', spec.left_child(K));
    out.push_back({s, addr, spec.gap_of(K)});
    self(self, addr + 'R', spec.right_child(K));
  };
  rec(rec, "", Interval{0, 1});
  return out;
}

enum class Meets { EmptyCertified, NonemptyCertified, Unknown };

inline const char* to_string(Meets m) {
  switch (m) {
    case Meets::EmptyCertified: return "EmptyCertified";
    case Meets::NonemptyCertified: return "NonemptyCertified";
    default: return "Unknown";
  }
}

struct MeetsResult {
  Meets status = Meets::Unknown;
  std::optional<Rational> endpoint;  // witness for Nonempty
  std::optional<Interval> gap;       // witness for Empty (closed hull)
  std::string address;               // deepest construction interval reached
};

// Tri-state test for I ∩ M_eps, looking at construction stages up to depth.
// depth < 0 means unbounded, which terminates whenever I is nondegenerate.
inline MeetsResult interval_meets_meps(const CantorSpec& spec, const Interval& I, long depth) {
  MeetsResult r;
  Interval K{0, 1};
  if (!K.intersects(I)) {
    r.status = Meets::EmptyCertified;
    return r;
  }
  for (long s = 0;; ++s) {
    if (I.contains(K.lo) || I.contains(K.hi)) {
      r.status = Meets::NonemptyCertified;
      r.endpoint = I.contains(K.lo) ? K.lo : K.hi;
      return r;
    }
    // here I sits inside the open interior of K
    Interval G = spec.gap_of(K);
    if (G.lo < I.lo && I.hi < G.hi) {
      r.status = Meets::EmptyCertified;
      r.gap = G;
      return r;
    }
    if (depth >= 0 && s >= depth) return r;
    char side = I.lo <= G.lo ? 'L' : 'R';
    K = spec.child(K, side);
    r.address += side;
  }
}

struct EndpointResult {
  bool is_endpoint = false;
  std::string address;  // construction interval having x as an endpoint
  char side = 0;        // 'l' for its left endpoint, 'r' for its right endpoint
};

// Exact endpoint test by following the renormalized orbit of x.
inline EndpointResult is_endpoint(const CantorSpec& spec, const Rational& x, std::size_t max_steps = 1000000) {
  EndpointResult r;
  if (x.sign() < 0 || x > Rational(1)) return r;
  const Rational& lam = spec.lambda;
  Rational one_minus = Rational(1) - lam;
  const Integer& p = lam.num();
  std::set<std::pair<std::string, std::string>> seen;
  bool track_cycles = p == 1;
  Rational u = x;
  for (std::size_t step = 0; step < max_steps; ++step) {
    if (u.is_zero()) {
      r.is_endpoint = true;
      r.side = 'l';
      return r;
    }
    if (u == Rational(1)) {
      r.is_endpoint = true;
      r.side = 'r';
      return r;
    }
    if (lam < u && u < one_minus) return r;  // removed
    if (p != 1) {
      // once a prime of p divides the denominator, its valuation only drops
      Integer g;
      mpz_gcd(g.get_mpz_t(), u.den().get_mpz_t(), p.get_mpz_t());
      if (g != 1) {
        r.address.clear();
        return r;
      }
    } else if (track_cycles && !seen.insert({u.num().get_str(16), u.den().get_str(16)}).second) {
      r.address.clear();
      return r;
    }
    if (u <= lam) {
      u = u / lam;
      r.address += 'L';
    } else {
      u = (u - one_minus) / lam;
      r.address += 'R';
    }
  }
  throw ResourceError("is_endpoint: orbit did not resolve within " + std::to_string(max_steps) + " steps");
}

struct CantorHit {
  bool meets = false;
  std::optional<Rational> witness;
  bool witness_is_least = false;
};

// Least y >= lo in M_eps (lo in [0,1]) when it can be found within the step
// budget; also used as an exact intersection test.
inline CantorHit intersects_meps(const CantorSpec& spec, Interval I, std::size_t extra_steps = 256) {
  CantorHit h;
  Interval unit{0, 1};
  if (!I.intersects(unit)) return h;
  I = Interval(max(I.lo, Rational(0)), min(I.hi, Rational(1)));
  const Rational lo = I.lo;
  Interval K = unit;
  std::optional<Rational> fallback;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t step = 0;; ++step) {
    if (lo == K.lo || lo == K.hi) {
      h.meets = true;
      h.witness = lo;
      h.witness_is_least = true;
      return h;
    }
    Interval G = spec.gap_of(K);
    if (G.lo < lo && lo < G.hi) {
      Rational y = G.hi;  // left endpoint of the right child
      h.meets = y <= I.hi;
      if (h.meets) {
        h.witness = y;
        h.witness_is_least = true;
      }
      return h;
    }
    if (!fallback && K.hi <= I.hi) {
      fallback = K.hi;  // an endpoint inside I: the answer is already yes
      extra_steps += step;
    }
    if (fallback && step >= extra_steps) {
      h.meets = true;
      h.witness = fallback;
      return h;
    }
    if (step > 200000) throw ResourceError("intersects_meps: orbit of a degenerate interval did not resolve");
    if (spec.lambda.num() == 1 && step > 64) {
      Rational u = (lo - K.lo) / K.length();
      if (!seen.insert({u.num().get_str(16), u.den().get_str(16)}).second) {
        // the orbit of lo never leaves the construction: lo itself is in M_eps
        h.meets = true;
        h.witness = lo;
        h.witness_is_least = true;
        return h;
      }
    }
    K = lo <= G.lo ? spec.left_child(K) : spec.right_child(K);
  }
}

inline CantorHit intersects_ternary_cantor(const Interval& I) { return intersects_meps(CantorSpec::ternary(), I); }

}  // namespace schmidt
