#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "circ/errors.hpp"

namespace circ {

/// Exact rational number in canonical lowest terms with a positive
/// denominator. Backed by Boost.Multiprecision, so neither numerator nor
/// denominator can overflow.
class Rational {
public:
  using integer = boost::multiprecision::cpp_int;

  Rational() = default;
  Rational(std::int64_t value) : value_(value) {} // NOLINT: implicit from integer literals
  Rational(const integer& value) : value_(value) {} // NOLINT

  Rational(const integer& numerator, const integer& denominator) {
    if (denominator == 0) {
      throw input_error("rational with zero denominator");
    }
    value_ = denominator < 0 ? backend(-numerator, -denominator) : backend(numerator, denominator);
  }

  /// Parses "p" or "p/q" with an optional leading sign on p. q must be a
  /// positive integer. Returns nullopt on anything else.
  static std::optional<Rational> parse(std::string_view text) {
    auto digits = [](std::string_view s) {
      if (s.empty()) return false;
      for (char c : s) {
        if (c < '0' || c > '9') return false;
      }
      return true;
    };
    bool negative = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
      negative = text.front() == '-';
      text.remove_prefix(1);
    }
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
    if (!digits(num)) return std::nullopt;
    if (slash != std::string_view::npos && !digits(den)) return std::nullopt;
    // cpp_int reads a leading 0 as an octal prefix
    auto decimal_integer = [](std::string_view s) {
      auto first = s.find_first_not_of('0');
      return integer(first == std::string_view::npos ? std::string("0") : std::string(s.substr(first)));
    };
    integer n = decimal_integer(num);
    integer d = den.empty() ? integer(1) : decimal_integer(den);
    if (d == 0) return std::nullopt;
    if (negative) n = -n;
    return Rational(n, d);
  }

  integer numerator() const { return boost::multiprecision::numerator(value_); }
  integer denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_zero() const { return value_ == 0; }
  int sign() const { return value_.sign(); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw input_error("rational division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(backend(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = a.value_.compare(b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "p/q", or just "p" when the denominator is 1.
  std::string str() const {
    auto d = denominator();
    if (d == 1) return numerator().str();
    return numerator().str() + "/" + d.str();
  }

  /// Decimal rendering rounded (half away from zero) to `significant`
  /// digits, printf("%.*g")-style: trailing zeros dropped, exponent form
  /// outside [1e-4, 10^significant). Computed exactly; display only.
  std::string decimal(int significant = 12) const {
    if (is_zero()) return "0";
    integer n = abs(numerator());
    integer d = denominator();
    // exponent e with 10^e <= n/d < 10^(e+1)
    int e = static_cast<int>(n.str().size()) - static_cast<int>(d.str().size());
    auto pow10 = [](int k) {
      integer p = 1;
      for (int i = 0; i < k; ++i) p *= 10;
      return p;
    };
    auto ge_pow = [&](int k) { // n/d >= 10^k
      return k >= 0 ? n >= d * pow10(k) : n * pow10(-k) >= d;
    };
    while (!ge_pow(e)) --e;
    while (ge_pow(e + 1)) ++e;
    // digits = round(n/d * 10^(significant-1-e))
    int shift = significant - 1 - e;
    integer num = shift >= 0 ? n * pow10(shift) : n;
    integer den = shift >= 0 ? d : d * pow10(-shift);
    integer q = num / den;
    integer r = num % den;
    if (2 * r >= den) q += 1;
    if (q >= pow10(significant)) { // rounding carried into a new digit
      q /= 10;
      ++e;
    }
    std::string digits = q.str();
    std::string out = sign() < 0 ? "-" : "";
    auto trim = [](std::string s) {
      if (s.find('.') == std::string::npos) return s;
      while (s.back() == '0') s.pop_back();
      if (s.back() == '.') s.pop_back();
      return s;
    };
    if (e < -4 || e >= significant) {
      std::string mant = digits.substr(0, 1) + "." + digits.substr(1);
      std::string exp = std::to_string(e < 0 ? -e : e);
      if (exp.size() < 2) exp = "0" + exp;
      return out + trim(mant) + "e" + (e < 0 ? "-" : "+") + exp;
    }
    if (e >= 0) {
      return out + trim(digits.substr(0, e + 1) + "." + digits.substr(e + 1));
    }
    return out + trim("0." + std::string(-e - 1, '0') + digits);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
  using backend = boost::multiprecision::cpp_rational;
  explicit Rational(backend v) : value_(std::move(v)) {}
  backend value_{0};
};

} // namespace circ
