#include "weakcr/fock_rep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include <unsupported/Eigen/MatrixFunctions>

#include "weakcr/error.hpp"
#include "weakcr/kernels.hpp"

namespace weakcr {

namespace {

void require_dim(int dim, int min, const char* what) {
  if (dim < min) {
    throw InvalidDimension(std::string(what) + ": dimension " +
                           std::to_string(dim) + " < " + std::to_string(min));
  }
}

std::span<const cplx> view(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

// ---------------------------------------------------------------- StateVector

StateVector::StateVector(Vector components) : components_(std::move(components)) {
  if (!components_.allFinite()) throw DomainError("state vector has non-finite components");
}

double StateVector::norm() const { return kernels::norm(view(components_)); }

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  return StateVector(components_ / n);
}

bool StateVector::is_normalized(double tol) const {
  return std::abs(norm() - 1.0) <= tol;
}

cplx StateVector::inner(const StateVector& other) const {
  return kernels::inner(view(components_), view(other.components_));
}

StateVector basis_state(int k, int dim) {
  require_dim(dim, 1, "basis_state");
  if (k < 0 || k >= dim) {
    throw InvalidDimension("basis_state: index " + std::to_string(k) +
                           " outside [0, " + std::to_string(dim) + ")");
  }
  Vector v = Vector::Zero(dim);
  v[k] = 1.0;
  return StateVector(std::move(v));
}

// ---------------------------------------------------------- TruncatedOperator

TruncatedOperator::TruncatedOperator(Matrix entries, std::string label)
    : entries_(std::move(entries)), label_(std::move(label)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw InvalidDimension("operator '" + label_ + "' must be a nonempty square matrix");
  }
  if (!entries_.allFinite()) {
    throw DomainError("operator '" + label_ + "' has non-finite entries");
  }
}

TruncatedOperator TruncatedOperator::adjoint() const {
  std::string l = label_;
  if (!l.empty() && l.back() == '\'') {
    l.pop_back();
  } else {
    l.push_back('\'');
  }
  return TruncatedOperator(entries_.adjoint(), std::move(l));
}

StateVector TruncatedOperator::apply(const StateVector& v) const {
  if (v.dim() != dim()) {
    throw DimensionMismatch("apply: operator dim " + std::to_string(dim()) +
                            " vs vector dim " + std::to_string(v.dim()));
  }
  Vector out(dim());
  const auto n = static_cast<std::size_t>(dim());
  kernels::gemv({entries_.data(), n * n}, n, n, view(v.components()),
                {out.data(), n});
  return StateVector(std::move(out));
}

TruncatedOperator identity(int dim) {
  require_dim(dim, 1, "identity");
  return TruncatedOperator(Matrix::Identity(dim, dim), "I");
}

TruncatedOperator lowering(int dim) {
  require_dim(dim, 2, "lowering");
  Matrix m = Matrix::Zero(dim, dim);
  for (int j = 0; j + 1 < dim; ++j) m(j, j + 1) = std::sqrt(static_cast<double>(j + 1));
  return TruncatedOperator(std::move(m), "a");
}

TruncatedOperator raising(int dim) { return lowering(dim).adjoint(); }

// --------------------------------------------------------------- OperatorPair

OperatorPair::OperatorPair(TruncatedOperator s, TruncatedOperator t, int safe_rank)
    : s_(std::move(s)), t_(std::move(t)), safe_rank_(safe_rank) {
  if (s_.dim() != t_.dim()) {
    throw DimensionMismatch("operator pair: S has dim " + std::to_string(s_.dim()) +
                            ", T has dim " + std::to_string(t_.dim()));
  }
  if (safe_rank_ <= 0 || safe_rank_ > s_.dim()) {
    throw InvalidDimension("operator pair: safe_rank " + std::to_string(safe_rank_) +
                           " outside [1, " + std::to_string(s_.dim()) + "]");
  }
}

OperatorPair OperatorPair::dual() const {
  return OperatorPair(t_.adjoint(), s_.adjoint(), safe_rank_);
}

OperatorPair boson_pair(int dim) {
  TruncatedOperator a = lowering(dim);
  return OperatorPair(TruncatedOperator(a.entries(), "S"),
                      TruncatedOperator(a.entries().adjoint(), "T"), dim - 1);
}

OperatorPair swanson_pair(double theta, int dim) {
  const Matrix a = lowering(dim).entries();
  const Matrix ad = a.adjoint();
  const cplx c{std::cos(theta), 0.0};
  const cplx is{0.0, std::sin(theta)};
  return OperatorPair(TruncatedOperator(c * a + is * ad, "S"),
                      TruncatedOperator(c * ad + is * a, "T"), dim - 1);
}

OperatorPair rotated_boson_pair(int dim) {
  return swanson_pair(std::numbers::pi / 4.0, dim);
}

// ------------------------------------------------------------ coherent states

double coherent_tail_mass(cplx z, int dim) {
  require_dim(dim, 1, "coherent_tail_mass");
  const double r2 = std::norm(z);
  if (r2 == 0.0) return 0.0;
  // First omitted term |z|^{2N}/N!, then ratios |z|^2/(n+1).
  double term = std::exp(dim * std::log(r2) - std::lgamma(dim + 1.0));
  double sum = 0.0;
  for (int n = dim; term > 0.0; ++n) {
    sum += term;
    if (term < 1e-18 * sum && r2 < n + 1) break;
    term *= r2 / (n + 1);
  }
  return sum;
}

StateVector coherent_state(cplx z, int dim) {
  require_dim(dim, 1, "coherent_state");
  const double tail = coherent_tail_mass(z, dim);
  if (!(tail < 1e-12)) {
    throw TruncationTooSmall("coherent_state: tail mass " + std::to_string(tail) +
                                 " >= 1e-12 at dim " + std::to_string(dim),
                             tail);
  }
  Vector v(dim);
  v[0] = 1.0;
  for (int n = 1; n < dim; ++n) v[n] = v[n - 1] * z / std::sqrt(static_cast<double>(n));
  return StateVector(std::move(v)).normalized();
}

// ------------------------------------------------------------------- defects

Matrix matrix_exp(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("matrix_exp: matrix is not square");
  return a.exp();
}

int semigroup_margin(double alpha, int dim) {
  return static_cast<int>(std::ceil(10.0 * alpha * std::sqrt(static_cast<double>(dim))));
}

double weak_commutator_defect(const Matrix& x, const Matrix& y, int band, cplx c) {
  if (x.rows() != y.rows() || x.rows() != x.cols() || y.rows() != y.cols()) {
    throw DimensionMismatch("weak_commutator_defect: shape mismatch");
  }
  if (band <= 0 || band > x.rows()) {
    throw TruncationError("weak_commutator_defect: empty or oversized band " +
                          std::to_string(band));
  }
  // <Y e_i, X† e_j> = (XY)_{ji} and <X e_i, Y† e_j> = (YX)_{ji}.
  Matrix d = x.topRows(band) * y.leftCols(band) - y.topRows(band) * x.leftCols(band);
  d.diagonal().array() -= c;
  return d.cwiseAbs().maxCoeff();
}

double weak_defect(const OperatorPair& pair) {
  return weak_commutator_defect(pair.S().entries(), pair.T().entries(), pair.safe_rank(),
                                1.0);
}

namespace {

int semigroup_band(const OperatorPair& pair, double param, const char* op) {
  const int band = pair.safe_rank() - semigroup_margin(param, pair.dim());
  if (band <= 0) {
    throw TruncationError(std::string(op) + ": safe band is empty at dim " +
                          std::to_string(pair.dim()) + " (margin " +
                          std::to_string(semigroup_margin(param, pair.dim())) + ")");
  }
  return band;
}

Matrix semigroup(const Matrix& generator, double t) {
  if (t == 0.0) return Matrix::Identity(generator.rows(), generator.cols());
  return matrix_exp(t * generator);
}

}  // namespace

double quasi_strong_defect(const OperatorPair& pair, double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("quasi_strong_defect: alpha must be >= 0");
  const int band = semigroup_band(pair, alpha, "quasi_strong_defect");
  const Matrix& t = pair.T().entries();
  const Matrix v = semigroup(pair.S().entries(), alpha);
  // <V T e_i, e_j> - <V e_i, T† e_j> - alpha <V e_i, e_j> = (VT - TV - alpha V)_{ji}
  const Matrix d = v.topRows(band) * t.leftCols(band) - t.topRows(band) * v.leftCols(band) -
                   alpha * v.topLeftCorner(band, band);
  return d.cwiseAbs().maxCoeff();
}

double weyl_defect(const OperatorPair& pair, double alpha, double beta) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    throw DomainError("weyl_defect: alpha and beta must be >= 0");
  }
  const int band = semigroup_band(pair, std::max(alpha, beta), "weyl_defect");
  const Matrix vs = semigroup(pair.S().entries(), alpha);
  const Matrix vt = semigroup(pair.T().entries(), beta);
  const Matrix d = vs.topRows(band) * vt.leftCols(band) -
                   std::exp(alpha * beta) * (vt.topRows(band) * vs.leftCols(band));
  return spectral_norm(d);
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix g = m.rows() >= m.cols() ? Matrix(m.adjoint() * m) : Matrix(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace weakcr
