#pragma once

// Exact rational scalars. Every geometric quantity in the library is a
// Rational; nothing is ever rounded unless a function says so explicitly.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace schmidt {

using Integer = mpz_class;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class Rational {
 public:
  Rational() = default;
  Rational(int v) : v_(v) {}  // NOLINT
  Rational(long v) : v_(v) {}  // NOLINT
  Rational(long long v) : v_(Integer(std::to_string(v))) {}  // NOLINT
  Rational(const Integer& v) : v_(v) {}  // NOLINT
  Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}
  static Rational from_mpq(const mpq_class& q) {
    Rational r;
    r.v_ = q;
    r.v_.canonicalize();
    return r;
  }

  const Integer& num() const { return v_.get_num(); }
  const Integer& den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational operator-() const { return from_mpq(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.v_, b.v_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    int c = cmp(a.v_, b.v_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  double to_double() const { return v_.get_d(); }

  // Canonical "p/q" with q > 0, always carrying the denominator.
  std::string str() const { return num().get_str() + "/" + den().get_str(); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
inline const Rational& min(const Rational& a, const Rational& b) {
  return b < a ? b : a;
}
inline const Rational& max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

inline Integer floor(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
  return q;
}

inline Integer ceil(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
  return q;
}

inline Rational inverse(const Rational& x) { return Rational(1) / x; }

inline Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational pow(const Rational& x, long e) {
  if (e < 0) return pow(inverse(x), -e);
  auto ue = static_cast<unsigned long>(e);
  return Rational(ipow(x.num(), ue), ipow(x.den(), ue));
}

// 2^e as a rational, e may be negative.
inline Rational pow2(long e) {
  Integer p = ipow(Integer(2), static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

inline Rational midpoint(const Rational& a, const Rational& b) {
  return (a + b) / Rational(2);
}

// floor(log2 |x|) for x != 0.
inline long ilog2(const Rational& x) {
  if (x.is_zero()) throw DomainError("ilog2 of zero");
  long nb = static_cast<long>(mpz_sizeinbase(x.num().get_mpz_t(), 2));
  long db = static_cast<long>(mpz_sizeinbase(x.den().get_mpz_t(), 2));
  long e = nb - db;
  Rational ax = abs(x);
  // 2^e <= |x| < 2^(e+1) after at most one correction each way.
  while (pow2(e) > ax) --e;
  while (pow2(e + 1) <= ax) ++e;
  return e;
}

// Round to a dyadic rational with `bits` significant bits, downward/upward.
inline Rational round_down(const Rational& x, long bits) {
  if (x.is_zero()) return x;
  long shift = bits - ilog2(x);
  Rational scaled = x * pow2(shift);
  return Rational(floor(scaled)) * pow2(-shift);
}

inline Rational round_up(const Rational& x, long bits) {
  if (x.is_zero()) return x;
  long shift = bits - ilog2(x);
  Rational scaled = x * pow2(shift);
  return Rational(ceil(scaled)) * pow2(-shift);
}

// Exact parse of "p/q", "p", "0.531", "-1.5e3", "1e-8". Decimals become exact
// fractions over powers of ten.
inline Rational parse_rational(std::string_view s) {
  auto fail = [&]() {
    return ConfigError("not a rational literal: '" + std::string(s) + "'");
  };
  if (s.empty()) throw fail();
  auto slash = s.find('/');
  auto is_int = [](std::string_view t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto to_int = [&](std::string_view t) {
    std::string str(t);
    if (str[0] == '+') str.erase(0, 1);
    return Integer(str, 10);
  };
  if (slash != std::string_view::npos) {
    auto a = s.substr(0, slash), b = s.substr(slash + 1);
    if (!is_int(a) || !is_int(b)) throw fail();
    Integer d = to_int(b);
    if (d == 0) throw fail();
    return Rational(to_int(a), d);
  }
  std::string_view mant = s;
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string_view::npos) {
    mant = s.substr(0, epos);
    auto es = s.substr(epos + 1);
    if (!is_int(es) || es.size() > 8) throw fail();
    exp10 = std::stol(std::string(es));
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.remove_prefix(1);
  }
  auto dot = mant.find('.');
  std::string digits;
  if (dot == std::string_view::npos) {
    digits = std::string(mant);
  } else {
    digits = std::string(mant.substr(0, dot)) + std::string(mant.substr(dot + 1));
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty()) throw fail();
  for (char ch : digits)
    if (ch < '0' || ch > '9') throw fail();
  Rational v{Integer(digits, 10)};
  Integer p10 = ipow(Integer(10), static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  v = exp10 < 0 ? v / Rational(p10) : v * Rational(p10);
  return neg ? -v : v;
}

// Fixed-point decimal string with `digits` fractional digits, rounded in the
// requested direction (used for certified decimal enclosures).
inline std::string to_decimal(const Rational& x, int digits, bool round_up_dir) {
  Integer scale = ipow(Integer(10), static_cast<unsigned long>(digits));
  Rational scaled = x * Rational(scale);
  Integer n = round_up_dir ? ceil(scaled) : floor(scaled);
  bool neg = n < 0;
  if (neg) n = -n;
  std::string s = n.get_str();
  if (static_cast<int>(s.size()) <= digits)
    s = std::string(static_cast<std::size_t>(digits) - s.size() + 1, '0') + s;
  std::string out = s.substr(0, s.size() - static_cast<std::size_t>(digits));
  if (digits > 0) out += "." + s.substr(s.size() - static_cast<std::size_t>(digits));
  return neg ? "-" + out : out;
}

// v_p(n) and n / p^v_p(n) for n != 0.
inline unsigned long valuation(const Integer& n, unsigned long p, Integer* rest = nullptr) {
  Integer m = n;
  unsigned long v = 0;
  while (m != 0 && mpz_divisible_ui_p(m.get_mpz_t(), p)) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    ++v;
  }
  if (rest) *rest = m;
  return v;
}

struct RationalHash {
  std::size_t operator()(const Rational& r) const {
    std::size_t h1 = std::hash<std::string>{}(r.num().get_str(16));
    std::size_t h2 = std::hash<std::string>{}(r.den().get_str(16));
    return h1 ^ (h2 * 0x9e3779b97f4a7c15ULL);
  }
};

}  // namespace schmidt
