#include "weakcr/weighted_l2.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "weakcr/error.hpp"
#include "weakcr/quadrature.hpp"

namespace weakcr {

// ------------------------------------------------------------------ PolyFunc

PolyFunc::PolyFunc(std::vector<GaussRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

PolyFunc PolyFunc::monomial(int k, GaussRational c) {
  if (k < 0) throw DomainError("monomial: negative power");
  std::vector<GaussRational> v(static_cast<std::size_t>(k) + 1);
  v[k] = std::move(c);
  return PolyFunc(std::move(v));
}

void PolyFunc::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

GaussRational PolyFunc::coeff(int k) const {
  if (k < 0 || k > degree()) return 0;
  return coeffs_[k];
}

cplx_ld PolyFunc::operator()(long double x) const {
  cplx_ld acc = 0.0L;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->to_complex_ld();
  return acc;
}

PolyFunc& PolyFunc::operator+=(const PolyFunc& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

PolyFunc& PolyFunc::operator-=(const PolyFunc& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

PolyFunc operator*(const GaussRational& s, const PolyFunc& p) {
  std::vector<GaussRational> v = p.coeffs_;
  for (auto& c : v) c = s * c;
  return PolyFunc(std::move(v));
}

std::string PolyFunc::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (int k = 0; k <= degree(); ++k) {
    const GaussRational& c = coeffs_[k];
    if (c.is_zero()) continue;
    std::string term;
    bool negative = c.is_real() && c.re() < 0;
    const GaussRational mag = negative ? -c : c;
    const bool unit = mag == GaussRational(1);
    if (k == 0 || !unit) term = mag.to_string();
    if (k >= 1) term += "x";
    if (k >= 2) term += "^" + std::to_string(k);
    if (out.empty()) {
      out = negative ? "-" + term : term;
    } else {
      out += negative ? " - " : " + ";
      out += term;
    }
  }
  return out;
}

PolyFunc apply_S(const PolyFunc& f) {
  if (f.degree() < 1) return {};
  std::vector<GaussRational> v(f.degree());
  for (int k = 1; k <= f.degree(); ++k) v[k - 1] = GaussRational(k) * f.coeffs()[k];
  return PolyFunc(std::move(v));
}

PolyFunc apply_T(const PolyFunc& f) {
  if (f.is_zero()) return {};
  std::vector<GaussRational> v(f.coeffs().size() + 1);
  for (int k = 0; k <= f.degree(); ++k) v[k + 1] = f.coeffs()[k];
  return PolyFunc(std::move(v));
}

// -------------------------------------------------------------------- Weight

Weight Weight::rational_alpha(double alpha) {
  if (!(alpha > 0.75)) {
    throw DomainError("rational weight needs alpha > 3/4, got " + std::to_string(alpha));
  }
  return Weight(Kind::RationalAlpha, alpha);
}

Weight Weight::gaussian() { return Weight(Kind::Gaussian, 0.0); }

long double Weight::evaluate(long double x) const {
  if (kind_ == Kind::Gaussian) return std::exp(-0.5L * x * x);
  return std::exp(-static_cast<long double>(alpha_) * std::log1p(x * x * x * x));
}

long double Weight::log_derivative(long double x) const {
  if (kind_ == Kind::Gaussian) return -x;
  const long double x3 = x * x * x;
  return -4.0L * alpha_ * x3 / (1.0L + x3 * x);
}

double Weight::decay_exponent() const {
  if (kind_ == Kind::Gaussian) return std::numeric_limits<double>::infinity();
  return 4.0 * alpha_;
}

bool Weight::moment_finite(int k) const {
  if (k < 0) throw DomainError("moment index must be >= 0");
  if (kind_ == Kind::Gaussian) return true;
  return k < 4.0 * alpha_ - 1.0;
}

std::string Weight::describe() const {
  if (kind_ == Kind::Gaussian) return "gaussian";
  std::ostringstream os;
  os << "rational_alpha(" << alpha_ << ")";
  return os.str();
}

// ------------------------------------------------------------------- moments

Moment moment(const Weight& w, int k) {
  if (!w.moment_finite(k)) return Moment::infinite();
  if (k % 2 == 1) return {true, 0.0L};
  auto integrand = [&](long double x) -> long double {
    if (x == 0.0L) return k == 0 ? w.evaluate(0.0L) : 0.0L;
    const long double lw = w.kind() == Weight::Kind::Gaussian
                               ? -0.5L * x * x
                               : -static_cast<long double>(w.alpha()) * std::log1p(x * x * x * x);
    return std::exp(k * std::log(std::fabs(x)) + lw);
  };
  const auto r = integrate_real_line<long double>(integrand);
  return {true, r.value};
}

MomentTable::MomentTable(Weight w, int max_k) : weight_(w) {
  if (max_k < 0) throw DomainError("moment table needs max_k >= 0");
  values_.reserve(static_cast<std::size_t>(max_k) + 1);
  for (int k = 0; k <= max_k; ++k) values_.push_back(moment(weight_, k));
}

const Moment& MomentTable::at(int k) const {
  if (k < 0 || k > max_k()) {
    throw DomainError("moment index " + std::to_string(k) + " outside the table");
  }
  return values_[k];
}

cplx_ld inner_product(const PolyFunc& f, const PolyFunc& g, const MomentTable& table) {
  cplx_ld acc = 0.0L;
  for (int i = 0; i <= f.degree(); ++i) {
    if (f.coeffs()[i].is_zero()) continue;
    for (int j = 0; j <= g.degree(); ++j) {
      if (g.coeffs()[j].is_zero()) continue;
      const Moment& m = table.at(i + j);
      if (!m.finite) {
        throw NotInL2("inner product needs the divergent moment of x^" +
                          std::to_string(i + j) + " under " + table.weight().describe(),
                      i + j);
      }
      acc += f.coeffs()[i].to_complex_ld() * std::conj(g.coeffs()[j].to_complex_ld()) * m.value;
    }
  }
  return acc;
}

cplx_ld inner_product(const PolyFunc& f, const PolyFunc& g, const Weight& w) {
  const int top = std::max(0, f.degree()) + std::max(0, g.degree());
  return inner_product(f, g, MomentTable(w, top));
}

// --------------------------------------------------------- quadrature pairings

RealLineFunction as_function(const PolyFunc& p) {
  return [p](long double x) { return p(x); };
}

RealLineFunction sdagger_pair(const PolyFunc& g, const Weight& w) {
  const PolyFunc dg = apply_S(g);
  return [g, dg, w](long double x) { return -dg(x) - g(x) * w.log_derivative(x); };
}

cplx_ld quad_pairing(const RealLineFunction& f, const RealLineFunction& g, const Weight& w) {
  auto integrand = [&](long double x) -> cplx_ld {
    const long double wx = w.evaluate(x);
    if (wx == 0.0L) return 0.0L;
    return f(x) * std::conj(g(x)) * wx;
  };
  return integrate_real_line<cplx_ld>(integrand).value;
}

double weak_cr_check(const Weight& w, const PolyFunc& f, const PolyFunc& g) {
  if (w.kind() == Weight::Kind::RationalAlpha) {
    const int total = f.degree() + g.degree();
    if (!(total < 4.0 * w.alpha() - 1.0)) {
      throw NotAdmissible("weak_cr_check: deg f + deg g = " + std::to_string(total) +
                          " is not below 4 alpha - 1 for " + w.describe());
    }
  }
  const cplx_ld tf_sdg = quad_pairing(as_function(apply_T(f)), sdagger_pair(g, w), w);
  const cplx_ld sf_tg = quad_pairing(as_function(apply_S(f)), as_function(apply_T(g)), w);
  const cplx_ld fg = quad_pairing(as_function(f), as_function(g), w);
  return static_cast<double>(std::abs(tf_sdg - sf_tg - fg));
}

// ------------------------------------------------------------ ladder lengths

bool monomial_in_domain(const Weight& w, int n) {
  if (n < 0) return false;
  // f = x^n, T f = x^{n+1}, S f = n x^{n-1}: squares need mu_{2n}, mu_{2n+2}, mu_{2n-2}.
  if (!w.moment_finite(2 * n) || !w.moment_finite(2 * n + 2)) return false;
  return n == 0 || w.moment_finite(2 * n - 2);
}

LadderLength ladder_length(double alpha) {
  const Weight w = Weight::rational_alpha(alpha);
  LadderLength out;
  out.strict_bound = 2.0 * alpha - 1.5;
  out.closed_form_dim = static_cast<int>(std::floor(out.strict_bound)) + 1;
  if (!monomial_in_domain(w, 0)) {
    throw DomainError("ladder_length: u_0 is not in the domain for alpha = " +
                      std::to_string(alpha));
  }
  int n = 0;
  while (monomial_in_domain(w, n + 1)) ++n;
  out.n_max = n;
  out.dim_N0 = n + 1;
  out.discrepancy = out.closed_form_dim != out.dim_N0;
  return out;
}

GaussianEigenCheck gaussian_eigen_check(int k) {
  if (k < 0) throw DomainError("gaussian_eigen_check: k must be >= 0");
  const PolyFunc u = PolyFunc::monomial(k);
  const PolyFunc tsu = apply_T(apply_S(u));
  const PolyFunc ku = GaussRational(k) * u;
  const PolyFunc diff = tsu - ku;

  GaussianEigenCheck out;
  out.exact = diff.is_zero();
  for (const auto& c : diff.coeffs()) {
    out.symbolic_residual = std::max(out.symbolic_residual, std::abs(c.to_complex()));
  }
  const Weight w = Weight::gaussian();
  for (int j = 0; j <= k + 2; ++j) {
    const RealLineFunction xj = as_function(PolyFunc::monomial(j));
    const cplx_ld lhs = quad_pairing(as_function(tsu), xj, w);
    const cplx_ld rhs = static_cast<long double>(k) * quad_pairing(as_function(u), xj, w);
    const long double rel = std::abs(lhs - rhs) / std::max(1.0L, std::abs(rhs));
    out.quadrature_residual = std::max(out.quadrature_residual, static_cast<double>(rel));
  }
  return out;
}

std::function<bool(int, int)> monomial_membership(const Weight& w) {
  return [w](int r, int k) { return monomial_in_domain(w, r + k); };
}

}  // namespace weakcr
