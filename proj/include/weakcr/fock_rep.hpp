#pragma once

// Truncated Fock-space matrix models of operator pairs (S, T) and numerical
// defect measures for the weak, quasi-strong and Weyl forms of [S,T] = 1.

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace weakcr {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class StateVector {
public:
  StateVector() = default;
  explicit StateVector(Vector components);

  int dim() const noexcept { return static_cast<int>(components_.size()); }
  const Vector& components() const noexcept { return components_; }
  cplx operator[](int i) const { return components_[i]; }

  double norm() const;
  StateVector normalized() const;
  bool is_normalized(double tol = 1e-12) const;

  /// <this, other>, linear in this, antilinear in other.
  cplx inner(const StateVector& other) const;

  StateVector operator*(cplx s) const { return StateVector(components_ * s); }

private:
  Vector components_;
};

/// e_k in a dim-dimensional truncation.
StateVector basis_state(int k, int dim);

/// Finite N x N stand-in for an unbounded operator on a dense domain.
class TruncatedOperator {
public:
  TruncatedOperator(Matrix entries, std::string label);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const noexcept { return entries_; }
  const std::string& label() const noexcept { return label_; }

  /// Matrix adjoint. The label gains (or loses) a trailing apostrophe.
  TruncatedOperator adjoint() const;

  StateVector apply(const StateVector& v) const;

private:
  Matrix entries_;
  std::string label_;
};

TruncatedOperator identity(int dim);

/// a: sqrt(j+1) at (j, j+1). Throws InvalidDimension for N < 2.
TruncatedOperator lowering(int dim);
/// a†, the adjoint of lowering(dim).
TruncatedOperator raising(int dim);

/// An operator pair together with the number of leading basis vectors on
/// which degree-1 identities are free of truncation artifacts (the full
/// dimension for genuinely finite models).
class OperatorPair {
public:
  OperatorPair(TruncatedOperator s, TruncatedOperator t, int safe_rank);

  const TruncatedOperator& S() const noexcept { return s_; }
  const TruncatedOperator& T() const noexcept { return t_; }
  int safe_rank() const noexcept { return safe_rank_; }
  int dim() const noexcept { return s_.dim(); }

  /// (T†, S†): the pair that satisfies the same relation by adjunction.
  OperatorPair dual() const;

private:
  TruncatedOperator s_;
  TruncatedOperator t_;
  int safe_rank_;
};

/// (a, a†) with safe_rank N - 1.
OperatorPair boson_pair(int dim);

/// S = cos(theta) a + i sin(theta) a†, T = cos(theta) a† + i sin(theta) a.
OperatorPair swanson_pair(double theta, int dim);

/// S = (a + i a†)/sqrt(2), T = (a† + i a)/sqrt(2).
OperatorPair rotated_boson_pair(int dim);

/// Normalized coherent state of a truncated to dim components. Throws
/// TruncationTooSmall when sum_{n >= dim} |z|^{2n}/n! >= 1e-12.
StateVector coherent_state(cplx z, int dim);

/// sum_{n >= dim} |z|^{2n}/n!
double coherent_tail_mass(cplx z, int dim);

/// exp(A) by scaling and squaring with a Pade approximant.
Matrix matrix_exp(const Matrix& a);

/// Number of indices the safe band loses for exp(alpha X): ceil(10 alpha
/// sqrt(N)).
int semigroup_margin(double alpha, int dim);

/// max over i, j < band of |<Y e_i, X† e_j> - <X e_i, Y† e_j> - c delta_ij|,
/// i.e. the entrywise weak defect of [X, Y] = c.
double weak_commutator_defect(const Matrix& x, const Matrix& y, int band,
                              cplx c);

/// Weak-form defect of [S, T] = 1 on i, j < safe_rank.
double weak_defect(const OperatorPair& pair);

/// Quasi-strong defect with V_S(alpha) = exp(alpha S), restricted to the band
/// safe_rank - semigroup_margin(alpha, N). Throws DomainError for alpha < 0
/// and TruncationError when the band is empty.
double quasi_strong_defect(const OperatorPair& pair, double alpha);

/// Weyl-form defect: spectral norm of exp(aS)exp(bT) - e^{ab} exp(bT)exp(aS) on the
/// band safe_rank - semigroup_margin(max(a, b), N).
double weyl_defect(const OperatorPair& pair, double alpha, double beta);

/// Largest singular value of a dense block.
double spectral_norm(const Matrix& m);

}  // namespace weakcr
