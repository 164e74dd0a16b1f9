#include <arm_neon.h>

#include "weakcr/kernels.hpp"

namespace weakcr::kernels::neon {

namespace {
inline const double* raw(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }
}  // namespace

// One float64x2_t holds a single complex value [r, i].

cplx inner(const cplx* x, const cplx* y, std::size_t n) {
  const double* xp = raw(x);
  const double* yp = raw(y);
  float64x2_t acc_re = vdupq_n_f64(0.0);  // [xr*yr, xi*yi]
  float64x2_t acc_im = vdupq_n_f64(0.0);  // [xr*yi, xi*yr]
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t xv = vld1q_f64(xp + 2 * i);
    float64x2_t yv = vld1q_f64(yp + 2 * i);
    acc_re = vfmaq_f64(acc_re, xv, yv);
    acc_im = vfmaq_f64(acc_im, xv, vextq_f64(yv, yv, 1));
  }
  const double re = vgetq_lane_f64(acc_re, 0) + vgetq_lane_f64(acc_re, 1);
  const double im = vgetq_lane_f64(acc_im, 1) - vgetq_lane_f64(acc_im, 0);
  return {re, im};
}

double norm_sq(const cplx* x, std::size_t n) {
  const double* xp = raw(x);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t v = vld1q_f64(xp + 2 * i);
    acc = vfmaq_f64(acc, v, v);
  }
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xp = raw(x);
  double* yp = raw(y);
  const float64x2_t ar = vdupq_n_f64(a.real());
  const double ai_lanes[2] = {-a.imag(), a.imag()};
  const float64x2_t ai = vld1q_f64(ai_lanes);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t xv = vld1q_f64(xp + 2 * i);
    float64x2_t yv = vld1q_f64(yp + 2 * i);
    yv = vfmaq_f64(yv, ar, xv);
    yv = vfmaq_f64(yv, ai, vextq_f64(xv, xv, 1));
    vst1q_f64(yp + 2 * i, yv);
  }
}

}  // namespace weakcr::kernels::neon
