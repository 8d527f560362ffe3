#pragma once

// Certified real enclosures [lo, hi] with rational endpoints. Transcendental
// functions (log, exp, non-integer powers) are bracketed by truncated series
// with explicit remainder bounds; endpoints are rounded outward to dyadics so
// sizes stay bounded.

#include <optional>
#include <string>
#include <utility>

#include "schmidt/interval.hpp"
#include "schmidt/rational.hpp"

namespace schmidt {

inline constexpr long kDefaultBits = 160;

struct Enclosure {
  Rational lo, hi;

  Enclosure() = default;
  Enclosure(const Rational& x) : lo(x), hi(x) {}  // NOLINT
  Enclosure(Rational a, Rational b) : lo(std::move(a)), hi(std::move(b)) {
    if (hi < lo) throw DomainError("enclosure with lo > hi");
  }

  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  Rational mid() const { return midpoint(lo, hi); }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool certainly_positive() const { return lo.sign() > 0; }
  bool certainly_negative() const { return hi.sign() < 0; }

  Enclosure widen(long bits) const {
    if (exact()) return *this;
    return {lo.sign() >= 0 ? round_down(lo, bits) : -round_up(-lo, bits),
            hi.sign() >= 0 ? round_up(hi, bits) : -round_down(-hi, bits)};
  }

  std::string decimal_lo(int digits) const { return to_decimal(lo, digits, false); }
  std::string decimal_hi(int digits) const { return to_decimal(hi, digits, true); }
};

inline Enclosure operator-(const Enclosure& a) { return {-a.hi, -a.lo}; }
inline Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Rational lo = p[0], hi = p[0];
  for (auto& v : p) {
    lo = min(lo, v);
    hi = max(hi, v);
  }
  return {lo, hi};
}
inline Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (b.lo.sign() <= 0 && b.hi.sign() >= 0) throw DomainError("enclosure division by an interval containing 0");
  return a * Enclosure(inverse(b.hi), inverse(b.lo));
}

namespace detail {

// 2*atanh(z) for 0 <= z <= 1/3, enclosure to about `bits` bits.
inline Enclosure two_atanh(const Rational& z, long bits) {
  if (z.is_zero()) return Rational(0);
  long wb = bits + 16;
  Rational z2 = z * z;
  Rational z2lo = round_down(z2, wb), z2hi = round_up(z2, wb);
  Rational plo = z, phi = z;  // z^(2j+1)
  Rational slo = 0, shi = 0;
  Rational tol = pow2(-(bits + 4));
  for (long j = 0;; ++j) {
    Rational d = Rational(2 * j + 1);
    slo += round_down(plo / d, wb);
    shi += round_up(phi / d, wb);
    plo = round_down(plo * z2lo, wb);
    phi = round_up(phi * z2hi, wb);
    // tail: sum_{i>j} z^(2i+1)/(2i+1) <= z^(2j+3) / ((2j+3)(1-z^2))
    Rational tail = phi / (Rational(2 * j + 3) * (Rational(1) - z2hi));
    if (tail < tol) {
      shi += round_up(tail, wb);
      break;
    }
  }
  return {Rational(2) * slo, Rational(2) * shi};
}

}  // namespace detail

inline Enclosure ln2_enc(long bits = kDefaultBits) { return detail::two_atanh(Rational(1, 3), bits); }

// Natural log of a positive rational.
inline Enclosure log_enc(const Rational& x, long bits = kDefaultBits) {
  if (x.sign() <= 0) throw DomainError("log of non-positive " + x.str());
  if (x == Rational(1)) return Rational(0);
  long k = ilog2(x);
  Rational y = x * pow2(-k);
  if (y >= Rational(3, 2)) {
    y /= Rational(2);
    ++k;
  }
  // y in [3/4, 3/2): z = (y-1)/(y+1) in [-1/7, 1/5]
  Rational z = (y - Rational(1)) / (y + Rational(1));
  long extra = k == 0 ? 0 : ilog2(Rational(k < 0 ? -k : k)) + 2;
  Enclosure t = detail::two_atanh(abs(z), bits + extra);
  if (z.sign() < 0) t = -t;
  Enclosure r = t + Enclosure(Rational(k)) * ln2_enc(bits + extra);
  return r.widen(bits + 8);
}

inline Enclosure log_enc(const Enclosure& x, long bits = kDefaultBits) {
  if (x.exact()) return log_enc(x.lo, bits);
  return {log_enc(x.lo, bits).lo, log_enc(x.hi, bits).hi};
}

// exp of a rational.
inline Enclosure exp_enc(const Rational& x, long bits = kDefaultBits) {
  if (x.is_zero()) return Rational(1);
  Rational ax = abs(x);
  long s = 0;
  while (ax * pow2(-s) > Rational(1, 2)) ++s;
  long wb = bits + s + 24;
  Rational r = round_down(ax * pow2(-s), wb);  // r<=|x|/2^s exactly representable error below
  Rational rhi = round_up(ax * pow2(-s), wb);
  // Taylor sum with remainder bound 2 r^(N+1)/(N+1)! for r <= 1/2.
  auto taylor = [&](const Rational& rr, bool up) {
    Rational sum = 1, term = 1;
    Rational tol = pow2(-wb);
    for (long n = 1;; ++n) {
      term = up ? round_up(term * rr / Rational(n), wb) : round_down(term * rr / Rational(n), wb);
      sum += term;
      if (term < tol) {
        if (up) sum += Rational(2) * term;
        break;
      }
    }
    return sum;
  };
  Rational lo = taylor(r, false), hi = taylor(rhi, true);
  for (long i = 0; i < s; ++i) {
    lo = round_down(lo * lo, wb);
    hi = round_up(hi * hi, wb);
  }
  Enclosure e(lo, hi);
  if (x.sign() < 0) e = Enclosure(round_down(inverse(hi), wb), round_up(inverse(lo), wb));
  return e.widen(bits + 8);
}

inline Enclosure exp_enc(const Enclosure& x, long bits = kDefaultBits) {
  if (x.exact()) return exp_enc(x.lo, bits);
  return {exp_enc(x.lo, bits).lo, exp_enc(x.hi, bits).hi};
}

// q-th root of a positive rational, bracketed at 2^-bits absolute resolution.
inline Enclosure root_enc(const Rational& x, unsigned long q, long bits = kDefaultBits) {
  if (x.sign() < 0) throw DomainError("root of negative");
  if (q == 1 || x.is_zero()) return x;
  // exact when numerator and denominator are perfect q-th powers
  Integer rn, rd;
  bool en = mpz_root(rn.get_mpz_t(), x.num().get_mpz_t(), q) != 0;
  bool ed = mpz_root(rd.get_mpz_t(), x.den().get_mpz_t(), q) != 0;
  if (en && ed) return Rational(rn, rd);
  long b = bits + 8 + std::max(0L, -ilog2(x) / static_cast<long>(q));
  Integer scaled = ipow(Integer(2), static_cast<unsigned long>(b) * q) * x.num();
  Integer m;
  mpz_fdiv_q(m.get_mpz_t(), scaled.get_mpz_t(), x.den().get_mpz_t());
  Integer r;
  mpz_root(r.get_mpz_t(), m.get_mpz_t(), q);
  return {Rational(r) * pow2(-b), Rational(r + 1) * pow2(-b)};
}

// x^c for positive rational x and rational c.
inline Enclosure pow_enc(const Rational& x, const Rational& c, long bits = kDefaultBits) {
  if (x.sign() <= 0) throw DomainError("pow_enc of non-positive base");
  if (c.is_integer()) return pow(x, c.num().get_si());
  if (x == Rational(1)) return Rational(1);
  if (mpz_cmp_ui(c.den().get_mpz_t(), 64) <= 0 && mpz_cmpabs_ui(c.num().get_mpz_t(), 64) <= 0) {
    long p = c.num().get_si();
    unsigned long q = c.den().get_ui();
    Rational xp = pow(x, p);
    if (mpz_sizeinbase(xp.num().get_mpz_t(), 2) + mpz_sizeinbase(xp.den().get_mpz_t(), 2) < 20000)
      return root_enc(xp, q, bits);
  }
  return exp_enc(Enclosure(c) * log_enc(x, bits + 16), bits);
}

// x^c with an enclosed exponent.
inline Enclosure pow_enc(const Rational& x, const Enclosure& c, long bits = kDefaultBits) {
  if (c.exact()) return pow_enc(x, c.lo, bits);
  return exp_enc(c * log_enc(x, bits + 16), bits);
}

inline Enclosure pow_enc(const Enclosure& x, const Enclosure& c, long bits = kDefaultBits) {
  if (x.exact()) return pow_enc(x.lo, c, bits);
  if (x.lo.sign() <= 0) throw DomainError("pow_enc of non-positive base");
  return exp_enc(c * log_enc(x, bits + 16), bits);
}

// Write x = g^e with e maximal (x > 0 rational, x != 1).
inline std::pair<Rational, unsigned long> primitive_power(const Rational& x) {
  unsigned long maxe = std::max(mpz_sizeinbase(x.num().get_mpz_t(), 2), mpz_sizeinbase(x.den().get_mpz_t(), 2));
  for (unsigned long e = maxe; e >= 2; --e) {
    Integer rn, rd;
    if (mpz_root(rn.get_mpz_t(), x.num().get_mpz_t(), e) && mpz_root(rd.get_mpz_t(), x.den().get_mpz_t(), e))
      return {Rational(rn, rd), e};
  }
  return {x, 1};
}

// log(a)/log(b) exactly, when it is rational.
inline std::optional<Rational> exact_log_ratio(const Rational& a, const Rational& b) {
  if (a.sign() <= 0 || b.sign() <= 0 || b == Rational(1)) return std::nullopt;
  if (a == Rational(1)) return Rational(0);
  auto [ga, ea] = primitive_power(a);
  auto [gb, eb] = primitive_power(b);
  long sa = static_cast<long>(ea), sb = static_cast<long>(eb);
  if (ga == gb) return Rational(sa, sb);
  if (ga == inverse(gb)) return Rational(-sa, sb);
  return std::nullopt;
}

inline Enclosure log_ratio_enc(const Rational& a, const Rational& b, long bits = kDefaultBits) {
  if (auto r = exact_log_ratio(a, b)) return *r;
  return (log_enc(a, bits + 8) / log_enc(b, bits + 8)).widen(bits);
}

}  // namespace schmidt
