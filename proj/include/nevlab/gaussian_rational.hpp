#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nevlab {

/// Exact element of Q(i). Both parts are kept canonical (reduced, positive
/// denominator) by mpq_class after every operation.
class GaussianRational {
public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re) {}
  GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }
  GaussianRational(long re_num, long re_den, long im_num = 0, long im_den = 1)
      : re_(re_num, re_den), im_(im_num, im_den) {
    if (re_den == 0 || im_den == 0) throw std::domain_error("GaussianRational: zero denominator");
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational inverse() const {
    if (is_zero()) throw std::domain_error("GaussianRational: division by zero");
    mpq_class n = norm();
    return {re_ / n, -im_ / n};
  }

  GaussianRational operator-() const { return {-re_, -im_}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    if (o.is_real()) {
      re_ *= o.re_;
      im_ *= o.re_;
      return *this;
    }
    if (is_real()) {
      mpq_class r = re_;
      re_ = r * o.re_;
      im_ = r * o.im_;
      return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    if (o.is_real()) {
      if (sgn(o.re_) == 0) throw std::domain_error("GaussianRational: division by zero");
      re_ /= o.re_;
      im_ /= o.re_;
      return *this;
    }
    return *this *= o.inverse();
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  GaussianRational pow(unsigned e) const {
    GaussianRational result(1), base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// Canonical text form: `a/b`, `a/b+c/di` or `a/b-c/di`.
  std::string str() const {
    std::string out = re_.get_num().get_str() + "/" + re_.get_den().get_str();
    if (sgn(im_) == 0) return out;
    mpz_class num = abs(im_.get_num());
    out += sgn(im_) < 0 ? "-" : "+";
    out += num.get_str() + "/" + im_.get_den().get_str() + "i";
    return out;
  }

  static GaussianRational parse(std::string_view text);

private:
  mpq_class re_{0};
  mpq_class im_{0};
};

namespace detail {

struct GrCursor {
  std::string_view s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("gaussian rational '" + std::string(s) + "': " + what + " at offset " +
                                std::to_string(pos));
  }
  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }

  mpz_class integer(bool allow_sign) {
    std::size_t start = pos;
    if (allow_sign && (peek() == '+' || peek() == '-')) ++pos;
    std::size_t digits = pos;
    while (!done() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == digits) fail("expected digits");
    std::string tok(s.substr(start, pos - start));
    if (tok[0] == '+') tok.erase(0, 1);
    return mpz_class(tok, 10);
  }

  // [sign] digits [ '/' digits ]
  mpq_class fraction(bool allow_sign) {
    mpz_class num = integer(allow_sign);
    mpz_class den = 1;
    if (peek() == '/') {
      ++pos;
      den = integer(false);
      if (den == 0) fail("zero denominator");
    }
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
};

}  // namespace detail

/// Accepts the canonical encoding with possibly unreduced fractions. Also
/// takes bare integers (`2`, `3/1-1i`) for command-line convenience.
inline GaussianRational GaussianRational::parse(std::string_view text) {
  detail::GrCursor cur{text};
  if (text.empty()) cur.fail("empty input");
  mpq_class re = cur.fraction(true);
  mpq_class im = 0;
  if (cur.peek() == 'i') {
    // pure imaginary: `c/di`
    ++cur.pos;
    im = re;
    re = 0;
  } else if (!cur.done()) {
    char sign = cur.peek();
    if (sign != '+' && sign != '-') cur.fail("expected '+' or '-'");
    ++cur.pos;
    im = cur.fraction(false);
    if (sign == '-') im = -im;
    if (cur.peek() != 'i') cur.fail("expected 'i'");
    ++cur.pos;
  }
  if (!cur.done()) cur.fail("trailing characters");
  return {re, im};
}

}  // namespace nevlab
