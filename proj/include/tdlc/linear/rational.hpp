#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "tdlc/error.hpp"

namespace tdlc::linear {

using Rational = mpq_class;
using Integer = mpz_class;

/// Integer extended by -inf and +inf. Addition treats +inf as absorbing, so
/// (+inf) + (-inf) = +inf: an exactly-zero entry stays zero under any scaling.
class ExtInt {
 public:
  enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

  ExtInt() : ExtInt(Kind::Finite, 0) {}
  ExtInt(std::int64_t v) : ExtInt(Kind::Finite, v) {}  // NOLINT: implicit by design
  static ExtInt pos_inf() { return ExtInt(Kind::PosInf, 0); }
  static ExtInt neg_inf() { return ExtInt(Kind::NegInf, 0); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  std::int64_t value() const {
    if (!is_finite()) throw Error("ExtInt::value: not finite");
    return value_;
  }

  friend ExtInt operator+(ExtInt a, ExtInt b) {
    if (a.is_pos_inf() || b.is_pos_inf()) return pos_inf();
    if (a.is_neg_inf() || b.is_neg_inf()) return neg_inf();
    return ExtInt(a.value_ + b.value_);
  }
  friend ExtInt operator-(ExtInt a, std::int64_t b) { return a + ExtInt(-b); }

  friend bool operator==(const ExtInt&, const ExtInt&) = default;
  friend std::strong_ordering operator<=>(const ExtInt& a, const ExtInt& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    return a.value_ <=> b.value_;
  }

  std::string to_string() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    return std::to_string(value_);
  }

 private:
  ExtInt(Kind k, std::int64_t v) : kind_(k), value_(k == Kind::Finite ? v : 0) {}
  Kind kind_;
  std::int64_t value_;
};

inline ExtInt max(ExtInt a, ExtInt b) { return a < b ? b : a; }
inline ExtInt min(ExtInt a, ExtInt b) { return a < b ? a : b; }

/// p-adic valuation of an integer; +inf for zero.
inline ExtInt vp(const Integer& z, int p) {
  if (z == 0) return ExtInt::pos_inf();
  Integer t = abs(z);
  const Integer pp = p;
  std::int64_t v = 0;
  while (mpz_divisible_p(t.get_mpz_t(), pp.get_mpz_t())) {
    t /= pp;
    ++v;
  }
  return v;
}

/// p-adic valuation of a rational; +inf for zero.
inline ExtInt vp(const Rational& q, int p) {
  if (q == 0) return ExtInt::pos_inf();
  return ExtInt(vp(Integer(q.get_num()), p).value() - vp(Integer(q.get_den()), p).value());
}

inline bool is_p_integral(const Rational& q, int p) { return !mpz_divisible_ui_p(q.get_den_mpz_t(), static_cast<unsigned long>(p)); }

/// Residue of a p-integral rational modulo m = p^K.
inline std::int64_t residue(const Rational& q, int p, std::int64_t modulus) {
  if (!is_p_integral(q, p)) throw NotIntegral("residue: denominator divisible by p in " + q.get_str());
  const Integer m = modulus;
  Integer inv;
  if (modulus == 1) return 0;
  if (mpz_invert(inv.get_mpz_t(), q.get_den_mpz_t(), m.get_mpz_t()) == 0) throw NotIntegral("residue: no inverse");
  Integer r = (Integer(q.get_num()) * inv) % m;
  if (r < 0) r += m;
  return r.get_si();
}

inline Integer ipow(int p, std::int64_t e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return out;
}

/// p^e as a rational, for any integer e.
inline Rational ppow(int p, std::int64_t e) {
  if (e >= 0) return Rational(ipow(p, e));
  return Rational(Integer(1), ipow(p, -e));
}

/// Parses "a" or "a/b" with optional sign.
inline Rational parse_rational(std::string_view s, std::size_t base_pos) {
  auto digits = [&](std::string_view t, std::size_t pos, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) throw ParseError("expected digits", base_pos + pos + i);
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') throw ParseError("unexpected character in number", base_pos + pos + i);
  };
  const auto slash = s.find('/');
  const auto num = s.substr(0, slash);
  digits(num, 0, true);
  std::string num_str(num[0] == '+' ? num.substr(1) : num);
  if (slash == std::string_view::npos) return Rational(Integer(num_str));
  const auto den = s.substr(slash + 1);
  digits(den, slash + 1, false);
  const Integer d{std::string(den)};
  if (d == 0) throw ParseError("zero denominator", base_pos + slash + 1);
  Rational q(Integer(num_str), d);
  q.canonicalize();
  return q;
}

inline std::string format_rational(const Rational& q) { return q.get_str(); }

}  // namespace tdlc::linear
