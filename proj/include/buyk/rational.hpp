#pragma once

#include <compare>
#include <concepts>
#include <cstddef>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

namespace buyk {

/**
 * Exact rational scalar.
 *
 * Thin value wrapper around mpq_class that keeps every value in reduced
 * canonical form (gcd(|num|, den) = 1, den > 0). Nothing in the library
 * rounds; approximate output goes through approx().
 */
class Rational {
 public:
  Rational() = default;

  template <std::signed_integral I>
  Rational(I v) : value_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)

  template <std::unsigned_integral U>
  Rational(U v) : value_(static_cast<unsigned long>(v)) {}  // NOLINT(google-explicit-constructor)

  Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }

  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  /// Parses "p/q" or a bare integer; accepts non-reduced input and
  /// canonicalizes it. Throws std::invalid_argument on anything else.
  static Rational parse(std::string_view text) {
    auto digits = [](std::string_view s) {
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    std::string_view body = text;
    if (!body.empty() && body.front() == '-') body.remove_prefix(1);
    const auto slash = body.find('/');
    const bool well_formed = slash == std::string_view::npos
                                 ? digits(body)
                                 : digits(body.substr(0, slash)) && digits(body.substr(slash + 1));
    if (!well_formed) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    mpq_class v;
    if (v.set_str(std::string(text), 10) != 0)
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    if (v.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(std::move(v));
  }

  static Rational pow(const Rational& base, unsigned long exponent) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.value_.get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.value_.get_den_mpz_t(), exponent);
    return Rational(mpq_class(num, den));
  }

  const mpq_class& raw() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  std::string numerator() const { return value_.get_num().get_str(); }
  std::string denominator() const { return value_.get_den().get_str(); }

  /// Canonical text: "p/q" with q > 1, or a bare integer.
  std::string str() const { return value_.get_str(10); }

  /// Decimal approximation to `significant` digits. Display only.
  std::string approx(int significant = 6) const {
    mpf_class f(value_, 256);
    char* out = nullptr;
    const std::string fmt = "%." + std::to_string(significant) + "Fg";
    const int len = gmp_asprintf(&out, fmt.c_str(), f.get_mpf_t());
    std::string s = len >= 0 ? std::string(out, static_cast<std::size_t>(len)) : std::string("nan");
    void (*free_fn)(void*, std::size_t) = nullptr;
    mp_get_memory_functions(nullptr, nullptr, &free_fn);
    if (out != nullptr) free_fn(out, static_cast<std::size_t>(len) + 1);
    return s;
  }

  double to_double() const { return value_.get_d(); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class value_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace buyk

template <>
struct std::hash<buyk::Rational> {
  std::size_t operator()(const buyk::Rational& r) const noexcept { return std::hash<std::string>{}(r.str()); }
};
