#pragma once

// Complex double-precision vector kernels used by the numerical modules.
//
// Every kernel has a scalar reference implementation and, where the build
// and the CPU allow it, a vectorized variant (AVX2+FMA on x86-64, NEON on
// AArch64). The public entry points dispatch through the active backend,
// picked once at startup from the CPU features and overridable with
// set_backend() so tests can compare variants against the reference.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace weakcr::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b);

/// True when the variant was compiled in and the running CPU supports it.
bool backend_supported(Backend b);

/// The best supported backend for this machine.
Backend detect_backend();

Backend active_backend();

/// Throws weakcr::Error if the backend is unsupported.
void set_backend(Backend b);

/// <x, y> = sum_i x_i * conj(y_i): linear in x, antilinear in y.
cplx inner(std::span<const cplx> x, std::span<const cplx> y);

/// sum_i |x_i|^2
double norm_sq(std::span<const cplx> x);

double norm(std::span<const cplx> x);

/// y += a * x
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);

/// y = A x for a column-major rows x cols matrix A (leading dimension rows).
void gemv(std::span<const cplx> a, std::size_t rows, std::size_t cols,
          std::span<const cplx> x, std::span<cplx> y);

// Per-backend implementations. Lengths are validated by the dispatchers.
namespace scalar {
cplx inner(const cplx* x, const cplx* y, std::size_t n);
double norm_sq(const cplx* x, std::size_t n);
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
}  // namespace scalar

#if defined(WEAKCR_HAVE_AVX2)
namespace avx2 {
cplx inner(const cplx* x, const cplx* y, std::size_t n);
double norm_sq(const cplx* x, std::size_t n);
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(WEAKCR_HAVE_NEON)
namespace neon {
cplx inner(const cplx* x, const cplx* y, std::size_t n);
double norm_sq(const cplx* x, std::size_t n);
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace weakcr::kernels
