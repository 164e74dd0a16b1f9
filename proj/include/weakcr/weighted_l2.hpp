#pragma once

// Polynomial functions in L^2(R, w dx) with S = d/dx and T = multiplication
// by x, for the two even weights (1 + x^4)^{-alpha} and exp(-x^2/2).

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "weakcr/exact.hpp"

namespace weakcr {

using cplx_ld = std::complex<long double>;

/// sum_k c_k x^k with exact coefficients, trailing zeros trimmed.
class PolyFunc {
public:
  PolyFunc() = default;
  explicit PolyFunc(std::vector<GaussRational> coeffs);

  static PolyFunc monomial(int k, GaussRational c = 1);

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<GaussRational>& coeffs() const noexcept { return coeffs_; }
  GaussRational coeff(int k) const;

  cplx_ld operator()(long double x) const;

  PolyFunc& operator+=(const PolyFunc& o);
  PolyFunc& operator-=(const PolyFunc& o);
  friend PolyFunc operator+(PolyFunc a, const PolyFunc& b) { return a += b; }
  friend PolyFunc operator-(PolyFunc a, const PolyFunc& b) { return a -= b; }
  friend PolyFunc operator*(const GaussRational& s, const PolyFunc& p);
  friend bool operator==(const PolyFunc&, const PolyFunc&) = default;

  /// "2 + 5x^2", "0".
  std::string to_string() const;

private:
  void trim();
  std::vector<GaussRational> coeffs_;
};

/// f'
PolyFunc apply_S(const PolyFunc& f);
/// x f
PolyFunc apply_T(const PolyFunc& f);

class Weight {
public:
  enum class Kind { RationalAlpha, Gaussian };

  /// (1 + x^4)^{-alpha}; throws DomainError unless alpha > 3/4.
  static Weight rational_alpha(double alpha);
  /// exp(-x^2 / 2)
  static Weight gaussian();

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }

  long double evaluate(long double x) const;
  /// w'(x) / w(x)
  long double log_derivative(long double x) const;
  /// 4 alpha for the rational weight, +infinity for the Gaussian.
  double decay_exponent() const;

  /// Power counting: int x^k w dx < infinity.
  bool moment_finite(int k) const;

  std::string describe() const;

private:
  Weight(Kind k, double alpha) : kind_(k), alpha_(alpha) {}
  Kind kind_;
  double alpha_;
};

/// A moment value or the divergence marker.
struct Moment {
  bool finite = true;
  long double value = 0.0L;

  static Moment infinite() { return {false, 0.0L}; }
};

/// mu_k = int x^k w dx. Divergence is decided by power counting before any
/// quadrature is attempted; odd moments are exactly zero.
Moment moment(const Weight& w, int k);

/// Moments 0..max_k, computed once.
class MomentTable {
public:
  MomentTable(Weight w, int max_k);

  const Weight& weight() const noexcept { return weight_; }
  int max_k() const noexcept { return static_cast<int>(values_.size()) - 1; }
  /// Throws DomainError for k outside [0, max_k].
  const Moment& at(int k) const;

private:
  Weight weight_;
  std::vector<Moment> values_;
};

/// sum_{i,j} f_i conj(g_j) mu_{i+j}. Throws NotInL2 naming the first power
/// i + j whose moment diverges.
cplx_ld inner_product(const PolyFunc& f, const PolyFunc& g, const Weight& w);
cplx_ld inner_product(const PolyFunc& f, const PolyFunc& g, const MomentTable& table);

using RealLineFunction = std::function<cplx_ld(long double)>;

/// h(x) = -g'(x) - g(x) w'(x)/w(x), the formal adjoint of d/dx applied to g.
RealLineFunction sdagger_pair(const PolyFunc& g, const Weight& w);

/// int F(x) conj(G(x)) w(x) dx by quadrature.
cplx_ld quad_pairing(const RealLineFunction& f, const RealLineFunction& g, const Weight& w);

RealLineFunction as_function(const PolyFunc& p);

/// |<Tf, S†g> - <Sf, Tg> - <f, g>| with every pairing by quadrature. For the
/// rational weight requires deg f + deg g < 4 alpha - 1, else NotAdmissible.
double weak_cr_check(const Weight& w, const PolyFunc& f, const PolyFunc& g);

/// x^n in D = D(q) ∩ D(p): x^n, x^{n+1} and n x^{n-1} square integrable.
bool monomial_in_domain(const Weight& w, int n);

struct LadderLength {
  int n_max = 0;
  int dim_N0 = 0;
  double strict_bound = 0.0;  ///< 2 alpha - 3/2
  int closed_form_dim = 0;    ///< floor(2 alpha - 3/2) + 1
  bool discrepancy = false;   ///< closed_form_dim != dim_N0
};

/// Largest n with x^n in D for the rational weight. Throws DomainError for
/// alpha <= 3/4.
LadderLength ladder_length(double alpha);

struct GaussianEigenCheck {
  bool exact = false;
  /// max |coefficient| of T S u_k - k u_k, 0 when exact.
  double symbolic_residual = 0.0;
  /// max_{j <= k+2} |<T S u_k, x^j> - k <u_k, x^j>| / max(1, |k <u_k, x^j>|).
  double quadrature_residual = 0.0;
};

GaussianEigenCheck gaussian_eigen_check(int k);

/// member(r, k): x^{r+k} lies in D, the domain condition used for power
/// profiles of the polynomial model.
std::function<bool(int, int)> monomial_membership(const Weight& w);

}  // namespace weakcr
