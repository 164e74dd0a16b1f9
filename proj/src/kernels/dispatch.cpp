#include <atomic>
#include <cmath>

#include "weakcr/error.hpp"
#include "weakcr/kernels.hpp"

namespace weakcr::kernels {

namespace {

struct Table {
  cplx (*inner)(const cplx*, const cplx*, std::size_t);
  double (*norm_sq)(const cplx*, std::size_t);
  void (*axpy)(cplx, const cplx*, cplx*, std::size_t);
};

constexpr Table kScalar{&scalar::inner, &scalar::norm_sq, &scalar::axpy};
#if defined(WEAKCR_HAVE_AVX2)
constexpr Table kAvx2{&avx2::inner, &avx2::norm_sq, &avx2::axpy};
#endif
#if defined(WEAKCR_HAVE_NEON)
constexpr Table kNeon{&neon::inner, &neon::norm_sq, &neon::axpy};
#endif

const Table& table_for(Backend b) {
  switch (b) {
#if defined(WEAKCR_HAVE_AVX2)
    case Backend::Avx2:
      return kAvx2;
#endif
#if defined(WEAKCR_HAVE_NEON)
    case Backend::Neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

std::atomic<Backend>& active() {
  static std::atomic<Backend> backend{detect_backend()};
  return backend;
}

const Table& current() { return table_for(active().load(std::memory_order_relaxed)); }

void require_same_length(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw DimensionMismatch(std::string(op) + ": length " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(WEAKCR_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(WEAKCR_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend detect_backend() {
  if (backend_supported(Backend::Avx2)) return Backend::Avx2;
  if (backend_supported(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

Backend active_backend() { return active().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw Error("kernel backend '" + std::string(backend_name(b)) +
                "' is not available on this build/CPU");
  }
  active().store(b, std::memory_order_relaxed);
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  require_same_length(x.size(), y.size(), "inner");
  return current().inner(x.data(), y.data(), x.size());
}

double norm_sq(std::span<const cplx> x) {
  return current().norm_sq(x.data(), x.size());
}

double norm(std::span<const cplx> x) { return std::sqrt(norm_sq(x)); }

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  require_same_length(x.size(), y.size(), "axpy");
  current().axpy(a, x.data(), y.data(), x.size());
}

void gemv(std::span<const cplx> a, std::size_t rows, std::size_t cols,
          std::span<const cplx> x, std::span<cplx> y) {
  require_same_length(a.size(), rows * cols, "gemv(matrix)");
  require_same_length(x.size(), cols, "gemv(x)");
  require_same_length(y.size(), rows, "gemv(y)");
  const Table& t = current();
  for (auto& v : y) v = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    if (x[j] == cplx{}) continue;
    t.axpy(x[j], a.data() + j * rows, y.data(), rows);
  }
}

}  // namespace weakcr::kernels
