#include "weakcr/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "weakcr/error.hpp"

namespace weakcr {

namespace {

double relative_tail(const Vector& v, int from) {
  const double total = v.norm();
  if (total == 0.0) return 0.0;
  if (from >= v.size()) return 0.0;
  return v.tail(v.size() - from).norm() / total;
}

std::vector<double> singular_values(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double condition_of(const std::vector<double>& sv) {
  if (sv.empty()) return 0.0;
  if (sv.back() == 0.0) return std::numeric_limits<double>::infinity();
  return sv.front() / sv.back();
}

}  // namespace

Matrix LadderFamily::as_matrix() const {
  if (vectors.empty()) return Matrix();
  Matrix m(vectors.front().dim(), length());
  for (int k = 0; k < length(); ++k) m.col(k) = vectors[k].components();
  return m;
}

Membership tail_membership(int safe_rank, double tol) {
  return [safe_rank, tol](const StateVector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) return false;
    return relative_tail(v.components(), safe_rank) < tol;
  };
}

double smallest_singular_value(const TruncatedOperator& a) {
  Eigen::BDCSVD<Matrix> svd(a.entries());
  return svd.singularValues()(a.dim() - 1);
}

StateVector kernel_vector(const TruncatedOperator& a, double tol) {
  Eigen::BDCSVD<Matrix> svd(a.entries(), Eigen::ComputeFullV);
  const int n = a.dim();
  const double sigma_min = svd.singularValues()(n - 1);
  if (sigma_min > tol) {
    throw NoKernel("kernel_vector: smallest singular value of '" + a.label() + "' is " +
                       std::to_string(sigma_min) + " > tol",
                   sigma_min);
  }
  Vector v = svd.matrixV().col(n - 1);
  v.normalize();
  for (int i = 0; i < n; ++i) {
    if (std::abs(v[i]) > 1e-12) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = std::abs(v[i]);
      break;
    }
  }
  return StateVector(std::move(v));
}

LadderFamily build_ladder(const TruncatedOperator& ladder, const StateVector& base,
                          int n_max, const Membership& member) {
  if (base.dim() != ladder.dim()) {
    throw DimensionMismatch("build_ladder: base has dim " + std::to_string(base.dim()) +
                            ", operator has dim " + std::to_string(ladder.dim()));
  }
  if (!(base.norm() > 0.0)) throw DomainError("build_ladder: base vector is zero");

  LadderFamily fam;
  fam.base = base;
  fam.ladder_op_label = ladder.label();
  fam.vectors.push_back(base);
  fam.stop_reason = "reached n_max";
  for (int k = 1; k <= n_max; ++k) {
    StateVector next =
        ladder.apply(fam.vectors.back()) * cplx(1.0 / std::sqrt(static_cast<double>(k)));
    if (!member(next)) {
      fam.stop_reason = "membership failed at k=" + std::to_string(k);
      break;
    }
    fam.vectors.push_back(std::move(next));
  }
  return fam;
}

double EigenCheck::max_residual() const {
  double m = 0.0;
  for (double r : number_residuals) m = std::max(m, r);
  for (double r : lowering_residuals) m = std::max(m, r);
  return m;
}

EigenCheck eigen_check(const OperatorPair& pair, const LadderFamily& fam) {
  EigenCheck out;
  const Matrix& s = pair.S().entries();
  const Matrix& t = pair.T().entries();
  for (int k = 0; k < fam.length(); ++k) {
    const Vector& psi = fam.vectors[k].components();
    if (psi.size() != s.rows()) {
      throw DimensionMismatch("eigen_check: family vector dim does not match the pair");
    }
    const double n = psi.norm();
    const Vector s_psi = s * psi;
    out.number_residuals.push_back((t * s_psi - double(k) * psi).norm() / n);
    if (k == 0) {
      out.lowering_residuals.push_back(s_psi.norm() / n);
    } else {
      const Vector& prev = fam.vectors[k - 1].components();
      out.lowering_residuals.push_back(
          (s_psi - std::sqrt(static_cast<double>(k)) * prev).norm() / n);
    }
  }
  return out;
}

double commutation_power_check(const OperatorPair& pair, const StateVector& xi, int k) {
  if (k < 1) throw DomainError("commutation_power_check: k must be >= 1");
  if (xi.dim() != pair.dim()) {
    throw DimensionMismatch("commutation_power_check: vector dim does not match the pair");
  }
  const Matrix& s = pair.S().entries();
  const Matrix& t = pair.T().entries();
  const int band = pair.safe_rank();

  // powers[j] = T^j xi
  std::vector<Vector> powers{xi.components()};
  for (int j = 1; j <= k; ++j) powers.push_back(t * powers.back());
  for (int j = 0; j <= k; ++j) {
    if (relative_tail(powers[j], band) > 1e-8) {
      throw TruncationError("commutation_power_check: T^" + std::to_string(j) +
                            " xi leaves the safe band");
    }
  }
  Vector tk_s = s * xi.components();
  for (int j = 0; j < k; ++j) tk_s = t * tk_s;
  const Vector r = s * powers[k] - tk_s - double(k) * powers[k - 1];
  return r.norm();
}

double GramResult::identity_deviation() const {
  Matrix d = gram;
  for (int i = 0; i < std::min<int>(d.rows(), d.cols()); ++i) d(i, i) -= 1.0;
  return d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
}

GramResult biorthogonality_gram(const LadderFamily& fam_xi, const LadderFamily& fam_eta) {
  if (fam_xi.vectors.empty() || fam_eta.vectors.empty()) {
    throw DomainError("biorthogonality_gram: empty family");
  }
  GramResult out;
  out.normalization = fam_xi.vectors[0].inner(fam_eta.vectors[0]);
  if (std::abs(out.normalization) < 1e-14) {
    throw NonNormalizable("biorthogonality_gram: <xi_0, eta_0> vanishes");
  }
  const cplx scale = 1.0 / std::conj(out.normalization);
  out.eta_scaled = fam_eta;
  out.eta_scaled.base = fam_eta.base * scale;
  for (auto& v : out.eta_scaled.vectors) v = v * scale;

  out.gram.resize(fam_xi.length(), out.eta_scaled.length());
  for (int i = 0; i < fam_xi.length(); ++i) {
    for (int j = 0; j < out.eta_scaled.length(); ++j) {
      out.gram(i, j) = fam_xi.vectors[i].inner(out.eta_scaled.vectors[j]);
    }
  }
  return out;
}

SpectrumReport restricted_spectrum(const OperatorPair& pair, const LadderFamily& fam) {
  SpectrumReport out;
  const Matrix xi = fam.as_matrix();
  if (xi.size() == 0) return out;
  const Matrix ts_xi = pair.T().entries() * (pair.S().entries() * xi);
  const Matrix m = xi.colPivHouseholderQr().solve(ts_xi);
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  const auto& ev = es.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](cplx a, cplx b) { return a.real() < b.real(); });
  out.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < out.eigenvalues.size(); ++k) {
    out.max_deviation =
        std::max(out.max_deviation, std::abs(out.eigenvalues[k] - double(k)));
    for (std::size_t l = k + 1; l < out.eigenvalues.size(); ++l) {
      out.min_separation =
          std::min(out.min_separation, std::abs(out.eigenvalues[k] - out.eigenvalues[l]));
    }
  }
  if (out.eigenvalues.size() < 2) out.min_separation = 0.0;
  return out;
}

IntertwinerPair intertwiners(const OperatorPair& pair, const LadderFamily& fam_xi,
                             const LadderFamily& fam_eta) {
  const Matrix xi = fam_xi.as_matrix();
  const Matrix eta = fam_eta.as_matrix();
  if (xi.size() == 0 || eta.size() == 0) throw DomainError("intertwiners: empty family");
  if (xi.rows() != pair.dim() || eta.rows() != pair.dim()) {
    throw DimensionMismatch("intertwiners: family dim does not match the pair");
  }

  IntertwinerPair out;
  out.riesz.singular_values_xi = singular_values(xi);
  out.riesz.singular_values_eta = singular_values(eta);
  out.condition_xi = condition_of(out.riesz.singular_values_xi);
  out.condition_eta = condition_of(out.riesz.singular_values_eta);
  for (double c : {out.condition_xi, out.condition_eta}) {
    if (!(c <= 1e12)) {
      throw ConditioningError("intertwiners: family span is numerically singular", c);
    }
  }

  out.K_xi = xi * xi.adjoint();
  out.K_eta = eta * eta.adjoint();

  for (int k = 0; k < eta.cols(); ++k) {
    const Vector e = eta.col(k);
    out.inverse_defect =
        std::max(out.inverse_defect, (out.K_eta * (out.K_xi * e) - e).norm() / e.norm());
  }
  for (int k = 0; k < xi.cols(); ++k) {
    const Vector x = xi.col(k);
    out.inverse_defect =
        std::max(out.inverse_defect, (out.K_xi * (out.K_eta * x) - x).norm() / x.norm());
  }

  const Matrix& s = pair.S().entries();
  const Matrix& t = pair.T().entries();
  for (int j = 0; j < xi.cols(); ++j) {
    const Vector x = xi.col(j);
    const Vector lhs = out.K_eta * (t * (s * x));
    const Vector kx = out.K_eta * x;
    const Vector rhs = s.adjoint() * (t.adjoint() * kx);
    out.intertwining_defect = std::max(out.intertwining_defect, (lhs - rhs).norm());
  }

  // Positivity of K_eta on span(xi), then e_j = K_eta^{1/2} xi_j.
  const Matrix q = xi.householderQr().householderQ() * Matrix::Identity(xi.rows(), xi.cols());
  Matrix restricted = q.adjoint() * out.K_eta * q;
  restricted = 0.5 * (restricted + restricted.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> rs(restricted, Eigen::EigenvaluesOnly);
  out.riesz.min_restricted_eigenvalue = rs.eigenvalues().minCoeff();
  out.riesz.positive = out.riesz.min_restricted_eigenvalue >= -1e-10;
  if (out.riesz.positive) {
    const Matrix k_sym = 0.5 * (out.K_eta + out.K_eta.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(k_sym);
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix k_half = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
    const Matrix e = k_half * xi;
    Matrix d = e.adjoint() * e;
    d -= Matrix::Identity(d.rows(), d.cols());
    out.riesz.orthonormality_defect = d.cwiseAbs().maxCoeff();
  }
  return out;
}

LadderAnalysis analyze_ladders(const OperatorPair& pair, int n, double kernel_tol) {
  LadderAnalysis out;
  const OperatorPair dual = pair.dual();
  out.sigma_min_S = smallest_singular_value(pair.S());
  out.sigma_min_Td = smallest_singular_value(dual.S());
  const StateVector xi0 = kernel_vector(pair.S(), kernel_tol);
  const StateVector eta0 = kernel_vector(dual.S(), kernel_tol);
  const Membership member = tail_membership(pair.safe_rank());
  out.xi = build_ladder(pair.T(), xi0, n, member);
  out.eta = build_ladder(dual.T(), eta0, n, member);

  out.gram = biorthogonality_gram(out.xi, out.eta);
  out.eta = out.gram.eta_scaled;
  out.xi_check = eigen_check(pair, out.xi);
  out.eta_check = eigen_check(dual, out.eta);
  out.xi.eigen_residuals = out.xi_check.number_residuals;
  out.eta.eigen_residuals = out.eta_check.number_residuals;
  out.gram.eta_scaled.eigen_residuals = out.eta.eigen_residuals;
  out.spectrum = restricted_spectrum(pair, out.xi);
  out.intertwiner = intertwiners(pair, out.xi, out.eta);
  return out;
}

}  // namespace weakcr
