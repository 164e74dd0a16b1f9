#include "weakcr/exact.hpp"

namespace weakcr {

std::complex<double> GaussRational::to_complex() const {
  return {re_.convert_to<double>(), im_.convert_to<double>()};
}

std::complex<long double> GaussRational::to_complex_ld() const {
  return {re_.convert_to<long double>(), im_.convert_to<long double>()};
}

std::string rational_to_string(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string GaussRational::to_string() const {
  if (im_ == 0) return rational_to_string(re_);
  if (re_ == 0) return rational_to_string(im_) + "i";
  std::string s = "(" + rational_to_string(re_);
  s += im_ < 0 ? " - " : " + ";
  s += rational_to_string(abs(im_)) + "i)";
  return s;
}

}  // namespace weakcr
