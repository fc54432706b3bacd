// Exact rational numbers over 64-bit integers. Intermediate products are
// formed in 128 bits; a result that does not fit throws std::overflow_error.

#ifndef AFFC_RATIONAL_HPP
#define AFFC_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace affc {

class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);

  /// "12", "-3/4", "1.25", "-2.5e-3". Throws ParseError on malformed input.
  static Rational parse(std::string_view text);
  /// Exact value of a finite double; throws if it needs a denominator beyond 2^62.
  static Rational from_double(double v);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational reduce(__int128 n, __int128 d);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational abs(const Rational& r);
std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace affc

#endif  // AFFC_RATIONAL_HPP
