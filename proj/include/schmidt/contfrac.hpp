#pragma once

// Continued fractions [a0; a1, a2, ...] of rationals, cylinder intervals, and
// the folding map f(p/q) = p/q - 1/(3q^2).

#include <optional>
#include <string>
#include <vector>

#include "schmidt/interval.hpp"

namespace schmidt {

struct CFWord {
  Integer a0 = 0;
  std::vector<Integer> quotients;

  std::size_t size() const { return quotients.size(); }
  bool empty() const { return quotients.empty(); }
  Integer max_quotient() const {
    Integer m = 0;
    for (auto& a : quotients)
      if (a > m) m = a;
    return m;
  }
  bool quotients_at_most(long n) const {
    for (auto& a : quotients)
      if (a > n) return false;
    return true;
  }
  // Replace a trailing 1 by folding it into the previous quotient.
  CFWord& normalize() {
    if (quotients.size() >= 2 && quotients.back() == 1) {
      quotients.pop_back();
      quotients.back() += 1;
    } else if (quotients.size() == 1 && quotients.back() == 1) {
      quotients.pop_back();
      a0 += 1;
    }
    return *this;
  }
  std::string str() const {
    std::string s = "[" + a0.get_str();
    for (std::size_t i = 0; i < quotients.size(); ++i) s += (i == 0 ? ";" : ",") + quotients[i].get_str();
    return s + "]";
  }
  friend bool operator==(const CFWord&, const CFWord&) = default;
};

inline CFWord make_word(long a0, const std::vector<long>& qs) {
  CFWord w;
  w.a0 = a0;
  for (long q : qs) w.quotients.emplace_back(q);
  return w;
}

inline CFWord cf_expand(const Rational& x) {
  CFWord w;
  Integer p = x.num(), q = x.den();
  Integer a, r;
  mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  w.a0 = a;
  p = q;
  q = r;
  while (q != 0) {
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    w.quotients.push_back(a);
    p = q;
    q = r;
  }
  return w.normalize();
}

inline Rational cf_value(const CFWord& w) {
  for (auto& a : w.quotients)
    if (a <= 0) throw DomainError("continued fraction quotients must be positive");
  if (w.quotients.empty()) return Rational(w.a0);
  // convergent recurrence h_n = a_n h_{n-1} + h_{n-2}
  Integer h = w.a0, k = 1;
  Integer h1 = h, k1 = k, h2 = 1, k2 = 0;
  for (auto& a : w.quotients) {
    h = a * h1 + h2;
    k = a * k1 + k2;
    h2 = h1, k2 = k1;
    h1 = h, k1 = k;
  }
  return Rational(h, k);
}

inline Rational cf_value(const std::vector<long>& word, long tail) {
  CFWord w;
  for (long a : word) w.quotients.emplace_back(a);
  w.quotients.emplace_back(tail);
  return cf_value(w);
}

// Interval with endpoints [0; w, 1] and [0; w, n+1].
inline Interval cylinder_interval(const std::vector<long>& w, long n) {
  if (w.empty()) throw DomainError("cylinder of the empty word");
  for (long a : w)
    if (a < 1 || a > n) throw DomainError("cylinder letter outside 1..n");
  Rational e1 = cf_value(w, 1), e2 = cf_value(w, n + 1);
  return e1 < e2 ? Interval(e1, e2) : Interval(e2, e1);
}

// Longest word w such that every x in I (canonical expansion) starts with w.
inline CFWord cf_prefix_of_interval(const Interval& I, std::size_t max_len = 100000) {
  if (I.lo.sign() <= 0 || I.hi >= Rational(1) || !(I.lo < I.hi))
    throw DomainError("cf_prefix_of_interval needs lo < hi inside (0,1)");
  CFWord w;
  Rational ylo = inverse(I.hi), yhi = inverse(I.lo);
  while (w.size() < max_len) {
    Integer a = floor(ylo);
    Rational ra(a);
    if (!(yhi < ra + Rational(1))) break;
    if (a == 1 && ylo == Rational(1)) break;
    w.quotients.push_back(a);
    if (ylo == ra) break;  // that endpoint's expansion stops here
    Rational nlo = inverse(yhi - ra), nhi = inverse(ylo - ra);
    ylo = nlo;
    yhi = nhi;
  }
  return w;
}

// Rational of least denominator in the closed interval [a, b].
inline Rational simplest_rational(const Rational& a, const Rational& b) {
  if (b < a) throw DomainError("simplest_rational on an empty interval");
  Integer n = floor(a);
  if (Rational(n) == a) return a;
  if (Rational(n + 1) <= b) return Rational(Integer(n + 1));
  // a, b share the integer part n; recurse on reciprocals of the fractional parts
  Rational fa = a - Rational(n), fb = b - Rational(n);
  return Rational(n) + inverse(simplest_rational(inverse(fb), inverse(fa)));
}

// All rationals p/q (lowest terms) in [a, b] with q <= qmax, ascending.
inline std::vector<Rational> fractions_in(const Rational& a, const Rational& b, const Integer& qmax,
                                          std::size_t cap = 1000000) {
  std::vector<Rational> out;
  if (b < a || qmax < 1) return out;
  auto rec = [&](auto&& self, const Rational& lo, const Rational& hi) -> void {
    if (hi < lo) return;
    Rational r = simplest_rational(lo, hi);
    if (r.den() > qmax) return;
    if (out.size() >= cap) throw ResourceError("fractions_in: too many fractions");
    // any other fraction with q <= qmax sits at least 1/(q_r qmax) away from r
    Rational sep = inverse(Rational(r.den() * qmax));
    self(self, lo, r - sep);
    out.push_back(r);
    self(self, r + sep, hi);
  };
  rec(rec, a, b);
  return out;
}

inline Integer isqrt_floor(const Rational& x) {
  if (x.sign() <= 0) return 0;
  Integer f = floor(x), r;
  mpz_sqrt(r.get_mpz_t(), f.get_mpz_t());
  return r;
}

inline Rational folding_step(const Rational& x) {
  return x - Rational(Integer(1), Integer(3) * x.den() * x.den());
}

struct GoodRational {
  Rational value;
  CFWord cf;
  unsigned long power_of_3_exponent = 0;
};

inline std::optional<GoodRational> is_good(const Rational& x) {
  if (x.sign() <= 0 || x >= Rational(1)) return std::nullopt;
  Integer rest;
  unsigned long m = valuation(x.den(), 3, &rest);
  if (rest != 1) return std::nullopt;
  CFWord w = cf_expand(x);
  const auto& a = w.quotients;
  std::size_t h = a.size();
  if (h < 4 || h % 2 == 0) return std::nullopt;
  if (a[0] != 1 || a[1] != 1) return std::nullopt;
  if (a[h - 1] < 2) return std::nullopt;
  for (std::size_t i = 2; i < h; ++i)
    if (a[i] > 3) return std::nullopt;
  return GoodRational{x, w, m};
}

}  // namespace schmidt
