#pragma once

#include <array>
#include <string>
#include <vector>

#include "schmidt/rational.hpp"

namespace schmidt {

struct Interval {
  Rational lo, hi;

  Interval() = default;
  Interval(Rational a, Rational b) : lo(std::move(a)), hi(std::move(b)) {
    if (hi < lo) throw DomainError("interval with lo > hi: [" + lo.str() + ", " + hi.str() + "]");
  }
  static Interval ball(const Rational& c, const Rational& r) { return {c - r, c + r}; }

  Rational center() const { return midpoint(lo, hi); }
  Rational radius() const { return (hi - lo) / Rational(2); }
  Rational length() const { return hi - lo; }

  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  // Closed-set semantics: a shared endpoint counts.
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  bool interior_contains(const Interval& o) const { return lo < o.lo && o.hi < hi; }
  bool interior_meets(const Interval& o) const { return lo < o.hi && o.lo < hi; }

  // Image under x -> s*x + b.
  Interval affine(const Rational& s, const Rational& b) const {
    Rational a = s * lo + b, c = s * hi + b;
    return s.sign() >= 0 ? Interval(a, c) : Interval(c, a);
  }

  friend bool operator==(const Interval&, const Interval&) = default;
  std::string str() const { return "[" + lo.str() + ", " + hi.str() + "]"; }
};

inline Rational gap_distance(const Interval& I, const Interval& J) {
  return max(Rational(0), max(J.lo - I.hi, I.lo - J.hi));
}

inline Rational distance(const Interval& I, const Rational& x) {
  if (x < I.lo) return I.lo - x;
  if (x > I.hi) return x - I.hi;
  return 0;
}

struct Relation {
  bool disjoint = false;
  bool touching = false;
  bool contained = false;  // one inside the other
  bool first_in_second = false;
  bool second_in_first = false;
  Rational gap;
};

inline Relation interval_relate(const Interval& I, const Interval& J) {
  Relation r;
  r.gap = gap_distance(I, J);
  r.disjoint = r.gap.sign() > 0;
  r.first_in_second = J.contains(I);
  r.second_in_first = I.contains(J);
  r.contained = r.first_in_second || r.second_in_first;
  r.touching = !r.disjoint && !I.interior_meets(J) && !r.contained;
  // Degenerate intervals sitting on an endpoint are contained, not touching;
  // two point intervals at the same spot are both.
  return r;
}

// Closed ball in R^2 under the sup norm.
struct Ball2 {
  std::array<Rational, 2> center;
  Rational radius;

  Ball2() = default;
  Ball2(Rational x, Rational y, Rational r) : center{std::move(x), std::move(y)}, radius(std::move(r)) {
    if (radius.sign() < 0) throw DomainError("negative radius");
  }
  bool contains(const Rational& x, const Rational& y) const {
    return abs(x - center[0]) <= radius && abs(y - center[1]) <= radius;
  }
  Interval side(int axis) const { return Interval::ball(center[axis], radius); }
};

struct TernaryDigits {
  int integer_part = 0;  // 1 only for x == 1
  std::vector<int> digits;
  bool exact = false;
};

// Base-3 digits of x in [0,1], preferring the terminating expansion.
inline TernaryDigits ternary_digits(const Rational& x, std::size_t n) {
  if (x.sign() < 0 || x > Rational(1)) throw DomainError("ternary_digits: x outside [0,1]: " + x.str());
  TernaryDigits out;
  if (x == Rational(1)) {
    out.integer_part = 1;
    out.digits.assign(n, 0);
    out.exact = true;
    return out;
  }
  Integer num = x.num();
  const Integer& den = x.den();
  out.digits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    num *= 3;
    Integer d;
    mpz_fdiv_qr(d.get_mpz_t(), num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out.digits.push_back(static_cast<int>(d.get_si()));
  }
  out.exact = num == 0;
  return out;
}

inline Rational ternary_value(const std::vector<int>& digits) {
  Rational v = 0, p = 1;
  for (int d : digits) {
    p /= Rational(3);
    v += Rational(d) * p;
  }
  return v;
}

}  // namespace schmidt
