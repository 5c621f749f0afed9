#pragma once

// Coefficients of the form (p/q)*sqrt(r), optionally complex, with a double fallback.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

#include "nilsoliton/error.hpp"
#include "nilsoliton/rational.hpp"

namespace nilsoliton {

namespace detail {

using i128 = __int128;

inline bool fits64(i128 v) {
  return v <= static_cast<i128>(INT64_MAX) && v >= -static_cast<i128>(INT64_MAX);
}

inline i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// n = s^2 * f with f square-free.
inline std::pair<std::int64_t, std::int64_t> split_square(std::int64_t n) {
  std::int64_t s = 1, f = n;
  for (std::int64_t k = 2; k <= f / k; ++k) {
    while (f % (k * k) == 0) {
      f /= k * k;
      s *= k;
    }
  }
  return {s, f};
}

// One real component num/den * sqrt(rad); rad square-free, den > 0, gcd(num, den) = 1.
struct RadicalPart {
  std::int64_t num = 0;
  std::int64_t den = 1;
  std::int64_t rad = 1;

  bool zero() const { return num == 0; }
  double value() const {
    return static_cast<double>(num) / static_cast<double>(den) * std::sqrt(static_cast<double>(rad));
  }
  Rational square() const {
    Rational q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q * q * Rational(static_cast<long>(rad));
  }
  bool operator==(const RadicalPart&) const = default;
};

// Normalizes; returns nullopt on int64 overflow.
inline std::optional<RadicalPart> make_part(i128 num, i128 den, i128 rad, bool rad_squarefree = false) {
  if (den == 0 || rad <= 0) return std::nullopt;
  if (num == 0) return RadicalPart{};
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (!fits64(rad)) return std::nullopt;
  auto [s, f] = rad_squarefree ? std::pair<std::int64_t, std::int64_t>{1, static_cast<std::int64_t>(rad)}
                               : split_square(static_cast<std::int64_t>(rad));
  num *= s;
  i128 g = gcd128(num, den);
  num /= g;
  den /= g;
  if (!fits64(num) || !fits64(den)) return std::nullopt;
  return RadicalPart{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den), f};
}

inline std::optional<RadicalPart> add(const RadicalPart& a, const RadicalPart& b) {
  if (a.zero()) return b;
  if (b.zero()) return a;
  if (a.rad != b.rad) return std::nullopt;
  i128 num = static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den;
  i128 den = static_cast<i128>(a.den) * b.den;
  if (num == 0) return RadicalPart{};
  i128 g = gcd128(num, den);
  num /= g;
  den /= g;
  if (!fits64(num) || !fits64(den)) return std::nullopt;
  return RadicalPart{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den), a.rad};
}

// sqrt(a) sqrt(b) = g sqrt((a/g)(b/g)) for square-free a, b with g = gcd(a, b).
inline std::optional<RadicalPart> mul(const RadicalPart& a, const RadicalPart& b) {
  if (a.zero() || b.zero()) return RadicalPart{};
  std::int64_t g = std::gcd(a.rad, b.rad);
  i128 rad = static_cast<i128>(a.rad / g) * (b.rad / g);
  if (!fits64(rad)) return std::nullopt;
  i128 num = static_cast<i128>(a.num) * b.num;
  i128 den = static_cast<i128>(a.den) * b.den;
  i128 c = gcd128(num, den);
  num /= c;
  den /= c;
  i128 h = gcd128(g, den);
  den /= h;
  i128 gm = g / h;
  if (!fits64(num) || !fits64(den)) return std::nullopt;
  num *= gm;
  if (!fits64(num)) return std::nullopt;
  return RadicalPart{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den), static_cast<std::int64_t>(rad)};
}

inline std::string part_string(const RadicalPart& p, bool with_sign) {
  std::string s;
  std::int64_t n = p.num;
  if (n < 0) {
    if (with_sign) s += "-";
    n = -n;
  }
  s += std::to_string(n) + "/" + std::to_string(p.den);
  if (p.rad != 1) s += "*sqrt(" + std::to_string(p.rad) + ")";
  return s;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // keep a decimal marker so the text re-parses as inexact
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

}  // namespace detail

class RadicalScalar {
 public:
  RadicalScalar() = default;

  static RadicalScalar rational(std::int64_t p, std::int64_t q = 1) { return radical(p, q, 1); }

  // (p/q) * sqrt(r)
  static RadicalScalar radical(std::int64_t p, std::int64_t q, std::int64_t r) {
    auto part = detail::make_part(p, q, r);
    if (!part) throw Error(Errc::invalid_input, "radical coefficient out of range");
    RadicalScalar s;
    s.re_ = *part;
    return s;
  }

  static RadicalScalar complex(const RadicalScalar& re, const RadicalScalar& im) {
    if (!re.is_real() || !im.is_real()) throw Error(Errc::invalid_input, "complex parts must be real");
    if (!re.exact_ || !im.exact_) return inexact({re.real_value(), im.real_value()});
    RadicalScalar s;
    s.re_ = re.re_;
    s.im_ = im.re_;
    return s;
  }

  static RadicalScalar inexact(std::complex<double> v) {
    RadicalScalar s;
    s.exact_ = false;
    s.approx_ = v;
    return s;
  }

  static RadicalScalar parse(std::string_view text);

  bool exact() const { return exact_; }
  bool is_real() const { return exact_ ? im_.zero() : approx_.imag() == 0.0; }
  bool is_zero() const { return exact_ ? (re_.zero() && im_.zero()) : approx_ == 0.0; }
  bool is_rational() const { return exact_ && im_.zero() && re_.rad == 1; }

  std::complex<double> value() const { return exact_ ? std::complex<double>(re_.value(), im_.value()) : approx_; }
  double real_value() const { return value().real(); }

  // |c|^2, exact when the scalar is.
  std::optional<Rational> exact_abs_squared() const {
    if (!exact_) return std::nullopt;
    return re_.square() + im_.square();
  }
  double abs_squared() const { return std::norm(value()); }

  // Numerator/denominator of the real part when it is rational.
  std::optional<Rational> as_rational() const {
    if (!is_rational()) return std::nullopt;
    Rational q(static_cast<long>(re_.num), static_cast<long>(re_.den));
    q.canonicalize();
    return q;
  }

  const detail::RadicalPart& real_part() const { return re_; }
  const detail::RadicalPart& imag_part() const { return im_; }

  int sign() const { return re_.num < 0 ? -1 : 1; }

  RadicalScalar operator-() const {
    RadicalScalar s = *this;
    s.re_.num = -s.re_.num;
    s.im_.num = -s.im_.num;
    s.approx_ = -s.approx_;
    return s;
  }

  RadicalScalar conj() const {
    RadicalScalar s = *this;
    s.im_.num = -s.im_.num;
    s.approx_ = std::conj(s.approx_);
    return s;
  }

  friend RadicalScalar operator+(const RadicalScalar& a, const RadicalScalar& b) {
    if (a.exact_ && b.exact_) {
      auto re = detail::add(a.re_, b.re_);
      auto im = detail::add(a.im_, b.im_);
      if (re && im) return from_parts(*re, *im);
    }
    return inexact(a.value() + b.value());
  }

  friend RadicalScalar operator-(const RadicalScalar& a, const RadicalScalar& b) { return a + (-b); }

  friend RadicalScalar operator*(const RadicalScalar& a, const RadicalScalar& b) {
    if (a.exact_ && b.exact_) {
      // (a + bi)(c + di) = (ac - bd) + (ad + bc)i
      auto ac = detail::mul(a.re_, b.re_), bd = detail::mul(a.im_, b.im_);
      auto ad = detail::mul(a.re_, b.im_), bc = detail::mul(a.im_, b.re_);
      if (ac && bd && ad && bc) {
        RadicalPart nbd = *bd;
        nbd.num = -nbd.num;
        auto re = detail::add(*ac, nbd);
        auto im = detail::add(*ad, *bc);
        if (re && im) return from_parts(*re, *im);
      }
    }
    return inexact(a.value() * b.value());
  }

  // Inverse; exact for nonzero real radicals.
  RadicalScalar inverse() const {
    if (is_zero()) throw Error(Errc::singular_map, "inverse of zero coefficient");
    if (exact_ && im_.zero()) {
      // 1 / ((p/q) sqrt(r)) = q / (p r) * sqrt(r)
      auto part = detail::make_part(re_.den, static_cast<detail::i128>(re_.num) * re_.rad, re_.rad, true);
      if (part) return from_parts(*part, {});
    }
    return inexact(1.0 / value());
  }

  bool operator==(const RadicalScalar& o) const {
    if (exact_ && o.exact_) return re_ == o.re_ && im_ == o.im_;
    return value() == o.value();
  }

  std::string to_string() const {
    if (!exact_) {
      std::string s = detail::format_double(approx_.real());
      if (approx_.imag() != 0.0) {
        double im = approx_.imag();
        s += im < 0 ? " - " : " + ";
        s += detail::format_double(std::fabs(im)) + " i";
      }
      return s;
    }
    if (im_.zero()) return detail::part_string(re_, true);
    if (re_.zero()) return detail::part_string(im_, true) + " i";
    return detail::part_string(re_, true) + (im_.num < 0 ? " - " : " + ") + detail::part_string(im_, false) + " i";
  }

 private:
  using RadicalPart = detail::RadicalPart;

  static RadicalScalar from_parts(const RadicalPart& re, const RadicalPart& im) {
    RadicalScalar s;
    s.re_ = re;
    s.im_ = im;
    return s;
  }

  RadicalPart re_;
  RadicalPart im_;
  bool exact_ = true;
  std::complex<double> approx_{};
};

namespace detail {

class CoeffParser {
 public:
  explicit CoeffParser(std::string_view text) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
  }

  RadicalScalar run() {
    if (s_.empty()) fail("empty coefficient");
    Term first = term(true);
    RadicalScalar re, im;
    (first.imaginary ? im : re) = first.value;
    if (pos_ < s_.size()) {
      if (first.imaginary) fail("imaginary part must come last");
      Term second = term(false);
      if (!second.imaginary) fail("second term must be imaginary");
      im = second.value;
    }
    if (pos_ != s_.size()) fail("trailing characters");
    if (!re.exact() || !im.exact()) return RadicalScalar::inexact({re.real_value(), im.real_value()});
    return im.is_zero() ? re : RadicalScalar::complex(re, im);
  }

 private:
  struct Term {
    RadicalScalar value;
    bool imaginary = false;
  };

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(1, static_cast<int>(pos_) + 1, msg + " in coefficient '" + s_ + "'");
  }

  bool eat(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool eat(std::string_view w) {
    if (s_.compare(pos_, w.size(), w) == 0) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  std::int64_t integer() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    if (pos_ - start > 18) fail("integer too large");
    return std::stoll(s_.substr(start, pos_ - start));
  }

  bool at_decimal() const {
    std::size_t p = pos_;
    while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
    return p < s_.size() && (s_[p] == '.' || s_[p] == 'e' || s_[p] == 'E');
  }

  Term term(bool leading) {
    bool negative = false;
    if (eat('-')) negative = true;
    else if (!eat('+') && !leading) fail("expected '+' or '-'");
    Term t;
    if (pos_ < s_.size() && s_[pos_] == 'i') {
      ++pos_;
      t.value = RadicalScalar::rational(negative ? -1 : 1);
      t.imaginary = true;
      return t;
    }
    if (at_decimal()) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad decimal");
      }
      pos_ += used;
      t.value = RadicalScalar::inexact(negative ? -v : v);
    } else {
      std::int64_t p = integer(), q = 1, r = 1;
      if (eat('/')) q = integer();
      if (eat("*sqrt(")) {
        r = integer();
        if (!eat(')')) fail("expected ')'");
        if (eat('/')) {
          std::int64_t d = integer();
          if (d == 0 || q > INT64_MAX / d) fail("bad denominator");
          q *= d;
        }
      }
      if (q == 0) fail("zero denominator");
      if (r == 0) p = 0, r = 1;
      t.value = RadicalScalar::radical(negative ? -p : p, q, r);
    }
    if (eat("*i") || eat('i')) t.imaginary = true;
    return t;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline RadicalScalar RadicalScalar::parse(std::string_view text) { return detail::CoeffParser(text).run(); }

// Closed form for a numeric real constant c: match c^2 to a rational with bounded
// denominator, then c = sign * sqrt(p/q). Falls back to an inexact scalar.
inline RadicalScalar reconstruct_radical(double c, std::int64_t max_den = 10000, double tol = 1e-9) {
  if (c == 0.0) return RadicalScalar{};
  double c2 = c * c;
  auto q = rational_approximation(c2, max_den, tol * std::max(1.0, c2));
  if (q && q->get_num().fits_slong_p() && q->get_den().fits_slong_p()) {
    long p = q->get_num().get_si(), d = q->get_den().get_si();
    // sqrt(p/d) = sqrt(p d) / d
    auto part = detail::make_part(c < 0 ? -1 : 1, d, static_cast<detail::i128>(p) * d);
    if (part) {
      RadicalScalar s = RadicalScalar::radical(part->num, part->den, part->rad);
      if (std::fabs(s.real_value() - c) <= 1e-8 * std::max(1.0, std::fabs(c))) return s;
    }
  }
  return RadicalScalar::inexact(c);
}

}  // namespace nilsoliton
