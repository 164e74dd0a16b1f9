// Compiled with -mavx2 -mfma. Only reached through the dispatcher after a
// runtime CPU check.

#include <immintrin.h>

#include "weakcr/kernels.hpp"

namespace weakcr::kernels::avx2 {

namespace {

// Interleaved complex layout: one __m256d holds [r0, i0, r1, i1].
inline const double* raw(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

cplx inner(const cplx* x, const cplx* y, std::size_t n) {
  const double* xp = raw(x);
  const double* yp = raw(y);
  // acc_re lanes hold xr*yr and xi*yi; acc_im lanes hold xr*yi and xi*yr.
  __m256d acc_re0 = _mm256_setzero_pd(), acc_re1 = _mm256_setzero_pd();
  __m256d acc_im0 = _mm256_setzero_pd(), acc_im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xa = _mm256_loadu_pd(xp + 2 * i);
    __m256d ya = _mm256_loadu_pd(yp + 2 * i);
    __m256d xb = _mm256_loadu_pd(xp + 2 * i + 4);
    __m256d yb = _mm256_loadu_pd(yp + 2 * i + 4);
    acc_re0 = _mm256_fmadd_pd(xa, ya, acc_re0);
    acc_re1 = _mm256_fmadd_pd(xb, yb, acc_re1);
    acc_im0 = _mm256_fmadd_pd(xa, _mm256_permute_pd(ya, 0b0101), acc_im0);
    acc_im1 = _mm256_fmadd_pd(xb, _mm256_permute_pd(yb, 0b0101), acc_im1);
  }
  for (; i + 2 <= n; i += 2) {
    __m256d xa = _mm256_loadu_pd(xp + 2 * i);
    __m256d ya = _mm256_loadu_pd(yp + 2 * i);
    acc_re0 = _mm256_fmadd_pd(xa, ya, acc_re0);
    acc_im0 = _mm256_fmadd_pd(xa, _mm256_permute_pd(ya, 0b0101), acc_im0);
  }
  const __m256d acc_re = _mm256_add_pd(acc_re0, acc_re1);
  // im = xi*yr - xr*yi: flip the sign of the even lanes before summing.
  const __m256d sign = _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0);
  const __m256d acc_im = _mm256_mul_pd(_mm256_add_pd(acc_im0, acc_im1), sign);
  double re = hsum(acc_re);
  double im = hsum(acc_im);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].imag() * y[i].real() - x[i].real() * y[i].imag();
  }
  return {re, im};
}

double norm_sq(const cplx* x, std::size_t n) {
  const double* xp = raw(x);
  const std::size_t m = 2 * n;
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= m; i += 8) {
    __m256d a = _mm256_loadu_pd(xp + i);
    __m256d b = _mm256_loadu_pd(xp + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  for (; i + 4 <= m; i += 4) {
    __m256d a = _mm256_loadu_pd(xp + i);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < m; ++i) s += xp[i] * xp[i];
  return s;
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xp = raw(x);
  double* yp = raw(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  // y_r += ar*xr - ai*xi ; y_i += ar*xi + ai*xr
  const __m256d ai = _mm256_setr_pd(-a.imag(), a.imag(), -a.imag(), a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    yv = _mm256_fmadd_pd(ar, xv, yv);
    yv = _mm256_fmadd_pd(ai, _mm256_permute_pd(xv, 0b0101), yv);
    _mm256_storeu_pd(yp + 2 * i, yv);
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + a.real() * xr - a.imag() * xi,
            y[i].imag() + a.real() * xi + a.imag() * xr};
  }
}

}  // namespace weakcr::kernels::avx2
