#include "affc/rational.hpp"

#include "affc/core.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace affc {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational Rational::reduce(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (!fits(n) || !fits(d)) throw std::overflow_error("Rational: 64-bit overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rational::Rational(std::int64_t n, std::int64_t d) { *this = reduce(n, d); }

Rational Rational::parse(std::string_view text) {
  auto fail = [&] { return ParseError("not a rational number: '" + std::string(text) + "'"); };
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t n = 0, d = 0;
    auto a = std::from_chars(text.data(), text.data() + slash, n);
    auto b = std::from_chars(text.data() + slash + 1, text.data() + text.size(), d);
    if (a.ec != std::errc() || a.ptr != text.data() + slash || b.ec != std::errc() ||
        b.ptr != text.data() + text.size() || d == 0)
      throw fail();
    return Rational(n, d);
  }

  // Decimal: sign, digits, optional fraction, optional exponent.
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  __int128 mantissa = 0;
  int scale = 0, digits = 0;
  bool dot = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '.' && !dot) {
      dot = true;
    } else if (ch >= '0' && ch <= '9') {
      mantissa = mantissa * 10 + (ch - '0');
      if (mantissa > (static_cast<__int128>(1) << 100)) throw fail();
      if (dot) ++scale;
      ++digits;
    } else {
      break;
    }
  }
  if (digits == 0) throw fail();
  int exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw fail();
    ++i;
    auto r = std::from_chars(text.data() + i + (i < text.size() && text[i] == '+'),
                             text.data() + text.size(), exponent);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size()) throw fail();
  }
  exponent -= scale;
  if (std::abs(exponent) > 30) throw fail();
  __int128 n = negative ? -mantissa : mantissa, d = 1;
  for (int k = 0; k < std::abs(exponent); ++k) (exponent > 0 ? n : d) *= 10;
  return reduce(n, d);
}

Rational Rational::from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("Rational: non-finite value");
  int e = 0;
  const double m = std::frexp(v, &e);  // v = m·2^e, 0.5 <= |m| < 1
  const auto mant = static_cast<__int128>(std::ldexp(m, 53));
  int shift = e - 53;
  if (shift >= 0) {
    if (shift > 62) throw std::overflow_error("Rational: value too large");
    return reduce(mant << shift, 1);
  }
  __int128 n = mant, d = 1;
  // Strip common powers of two before forming the denominator.
  while (shift < 0 && n % 2 == 0 && n != 0) {
    n /= 2;
    ++shift;
  }
  if (n == 0) return Rational(0);
  if (-shift > 62) throw std::overflow_error("Rational: denominator beyond 2^62");
  d <<= -shift;
  return reduce(n, d);
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return reduce(-static_cast<__int128>(num_), den_); }

Rational& Rational::operator+=(const Rational& o) {
  return *this = reduce(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                        static_cast<__int128>(den_) * o.den_);
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  return *this = reduce(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
  return *this = reduce(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 l = static_cast<__int128>(a.num_) * b.den_;
  const __int128 r = static_cast<__int128>(b.num_) * a.den_;
  return l < r ? std::strong_ordering::less
               : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace affc
