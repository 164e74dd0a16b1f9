#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace weakcr {

using Rational = boost::multiprecision::cpp_rational;

/// Exact complex number a + b i with rational parts.
class GaussRational {
public:
  GaussRational() = default;
  GaussRational(std::int64_t re) : re_(re) {}  // NOLINT(implicit)
  GaussRational(Rational re, Rational im = 0)
      : re_(std::move(re)), im_(std::move(im)) {}

  static GaussRational i() { return {0, 1}; }

  const Rational& re() const noexcept { return re_; }
  const Rational& im() const noexcept { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  GaussRational conj() const { return {re_, -im_}; }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    return *this;
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) {
    return a += b;
  }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) {
    return a -= b;
  }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) {
    return a *= b;
  }
  friend GaussRational operator-(const GaussRational& a) {
    return {-a.re_, -a.im_};
  }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::complex<double> to_complex() const;
  std::complex<long double> to_complex_ld() const;

  /// "3", "-1/2", "2i", "(1/2 - 3i)". Used in diagnostics, not in the
  /// canonical polynomial rendering.
  std::string to_string() const;

private:
  Rational re_{0};
  Rational im_{0};
};

/// "3", "-3/4". Denominator 1 is omitted.
std::string rational_to_string(const Rational& q);

}  // namespace weakcr
