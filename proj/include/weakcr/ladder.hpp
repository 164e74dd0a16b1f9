#pragma once

// Eigenvector ladders xi_k = T^k xi_0 / sqrt(k!) built on a kernel vector of
// S, their biorthogonal partners eta_r = (S†)^r eta_0 / sqrt(r!), and the
// intertwining operators between the two families.

#include <functional>
#include <string>
#include <vector>

#include "weakcr/fock_rep.hpp"

namespace weakcr {

struct LadderFamily {
  StateVector base;
  std::vector<StateVector> vectors;
  std::string ladder_op_label;
  std::vector<double> eigen_residuals;
  std::string stop_reason;

  int length() const noexcept { return static_cast<int>(vectors.size()); }
  /// Columns are the family vectors.
  Matrix as_matrix() const;
};

using Membership = std::function<bool(const StateVector&)>;

/// Accepts v when its mass on indices >= safe_rank is below tol * ||v||.
Membership tail_membership(int safe_rank, double tol = 1e-8);

/// Unit right singular vector of the smallest singular value. The phase is
/// fixed so that the first component of magnitude above 1e-12 is real and
/// positive. Throws NoKernel when sigma_min > tol.
StateVector kernel_vector(const TruncatedOperator& a, double tol);

double smallest_singular_value(const TruncatedOperator& a);

/// Applies ladder repeatedly to base, dividing by sqrt(k). Stops after n_max
/// steps or just before the first vector rejected by member.
LadderFamily build_ladder(const TruncatedOperator& ladder, const StateVector& base,
                          int n_max, const Membership& member);

struct EigenCheck {
  /// ||(T S) psi_k - k psi_k|| / ||psi_k||
  std::vector<double> number_residuals;
  /// ||S psi_k - sqrt(k) psi_{k-1}|| / ||psi_k||, zero entry for k = 0.
  std::vector<double> lowering_residuals;
  double max_residual() const;
};

/// Residuals for a family built from pair.T() on a kernel vector of pair.S().
/// For the eta family pass pair.dual().
EigenCheck eigen_check(const OperatorPair& pair, const LadderFamily& fam);

/// ||S T^k xi - T^k S xi - k T^{k-1} xi||. Throws TruncationError when some
/// T^j xi, j <= k, leaks out of the safe band.
double commutation_power_check(const OperatorPair& pair, const StateVector& xi, int k);

struct GramResult {
  Matrix gram;              ///< G_ij = <xi_i, eta_j>
  cplx normalization;       ///< <xi_0, eta_0> before rescaling
  LadderFamily eta_scaled;  ///< eta family with <xi_0, eta_0> = 1
  double identity_deviation() const;
};

/// Rescales the eta family so <xi_0, eta_0> = 1 and returns the Gram matrix.
/// Throws NonNormalizable when |<xi_0, eta_0>| < 1e-14.
GramResult biorthogonality_gram(const LadderFamily& fam_xi, const LadderFamily& fam_eta);

struct SpectrumReport {
  std::vector<cplx> eigenvalues;  ///< sorted by real part
  double max_deviation = 0.0;     ///< max_k |lambda_k - k|
  double min_separation = 0.0;    ///< smallest pairwise distance
};

/// Eigenvalues of T S restricted to span(fam.vectors), expressed in the
/// family basis.
SpectrumReport restricted_spectrum(const OperatorPair& pair, const LadderFamily& fam);

struct RieszDiagnostics {
  std::vector<double> singular_values_xi;
  std::vector<double> singular_values_eta;
  bool positive = false;
  double min_restricted_eigenvalue = 0.0;
  /// max |<e_i, e_j> - delta_ij| for e_j = K_eta^{1/2} xi_j; only meaningful
  /// when positive.
  double orthonormality_defect = 0.0;
};

struct IntertwinerPair {
  Matrix K_xi;   ///< sum_j xi_j xi_j^H, maps eta_j to xi_j
  Matrix K_eta;  ///< sum_j eta_j eta_j^H, maps xi_j to eta_j
  double condition_xi = 0.0;
  double condition_eta = 0.0;
  /// max_k of ||K_eta K_xi eta_k - eta_k|| / ||eta_k|| and the mirrored term.
  double inverse_defect = 0.0;
  /// max_j ||K_eta (T S) xi_j - (S† T†) K_eta xi_j||
  double intertwining_defect = 0.0;
  RieszDiagnostics riesz;
};

/// Expects fam_eta already normalized against fam_xi (see
/// biorthogonality_gram). Throws ConditioningError when either family matrix
/// has condition number above 1e12.
IntertwinerPair intertwiners(const OperatorPair& pair, const LadderFamily& fam_xi,
                             const LadderFamily& fam_eta);

/// Everything above for one pair: kernels of S and T†, both ladders of
/// length up to n, the Gram matrix, spectrum and intertwiners.
struct LadderAnalysis {
  LadderFamily xi;
  LadderFamily eta;
  EigenCheck xi_check;
  EigenCheck eta_check;
  GramResult gram;
  SpectrumReport spectrum;
  IntertwinerPair intertwiner;
  double sigma_min_S = 0.0;
  double sigma_min_Td = 0.0;
};

LadderAnalysis analyze_ladders(const OperatorPair& pair, int n, double kernel_tol = 1e-8);

}  // namespace weakcr
