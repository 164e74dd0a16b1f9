#pragma once

// Uncertainties (Delta A)_xi(z) = ||(A - z) xi|| for non-self-adjoint pairs and
// the two uncertainty relations built from them:
//
//   UR1: 2 max{dS, dS'} max{dT, dT'} >= |<xi, C xi>|
//   UR2: (dS + dS')(dT + dT') >= |Re <xi, C xi>|
//
// with C = 1 unless a polynomial is supplied.

#include <optional>
#include <string>
#include <vector>

#include "weakcr/fock_rep.hpp"
#include "weakcr/ncpoly.hpp"

namespace weakcr {

inline constexpr double kSaturationTol = 1e-6;
inline constexpr double kCrossConditionTol = 1e-8;

/// <A xi, xi>
cplx expectation(const TruncatedOperator& a, const StateVector& xi);

/// ||(A - z) xi||. Throws PreconditionError unless ||xi|| = 1 within 1e-10.
double delta(const TruncatedOperator& a, const StateVector& xi, cplx z);

struct DeltaReport {
  double dS = 0.0;
  double dSd = 0.0;
  double dT = 0.0;
  double dTd = 0.0;
  cplx z;  ///< center for S (S' uses conj(z))
  cplx w;  ///< center for T (T' uses conj(w))
  double state_norm = 1.0;

  double max_abs_difference(const DeltaReport& o) const;
};

/// Centers default to the expectations <S xi, xi> and <T xi, xi>.
DeltaReport deltas(const OperatorPair& pair, const StateVector& xi,
                   std::optional<cplx> z = std::nullopt, std::optional<cplx> w = std::nullopt);

enum class URKind { UR1, UR2 };
std::string to_string(URKind k);

struct URResult {
  URKind kind = URKind::UR1;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  ///< rhs - lhs; nonnegative when the inequality holds
  bool saturated = false;
  double cross_condition_defect = 0.0;  ///< UR2 only
  bool hypothesis_violated = false;     ///< UR2 only
  cplx c_expectation{1.0, 0.0};
  DeltaReport deltas;
};

URResult ur1_check(const OperatorPair& pair, const StateVector& xi,
                   std::optional<cplx> z = std::nullopt, std::optional<cplx> w = std::nullopt,
                   const std::optional<NCPoly>& c = std::nullopt, double tol = kSaturationTol);

/// alpha_s and alpha_t scale the self-adjoint combinations D = alpha_s (S + S')
/// and E = i alpha_t (T - T') through which the cross condition
/// [S', T] - [S, T'] = 0 is measured; the reported inequality does not depend
/// on them. Throws PreconditionError if either is zero.
URResult ur2_check(const OperatorPair& pair, const StateVector& xi, double alpha_s = 1.0,
                   double alpha_t = 1.0, const std::optional<NCPoly>& c = std::nullopt,
                   double tol = kSaturationTol);

/// Max-abs entry of [S', T] - [S, T'] on the leading safe_rank block.
double cross_condition_defect(const OperatorPair& pair);

// ------------------------------------------------------------- Swanson model

struct SwansonMoments {
  double C_phi = 0.0;  ///< <a'a> - |<a>|^2
  double E_phi = 0.0;  ///< Im(<a'^2> - <a'>^2)
};

SwansonMoments swanson_moments(const StateVector& phi);

struct SwansonReport {
  double theta = 0.0;
  SwansonMoments moments;
  DeltaReport closed_form;
  DeltaReport matrix;
  double max_discrepancy = 0.0;
};

/// Deltas of swanson_pair(theta) from C_phi and E_phi, cross-checked against
/// the matrices. Throws InconsistencyError if a squared delta is below -1e-12.
SwansonReport swanson_closed_form(double theta, const StateVector& phi);

// ------------------------------------------------------------------ 2 x 2 model

/// S = [[0, s], [0, 0]], T = [[0, 0], [q, 0]], [S, T] = s q diag(1, -1).
OperatorPair matrix2x2_pair(double s, double q);

struct Matrix2x2Report {
  double s = 0.0;
  double q = 0.0;
  DeltaReport closed_form;  ///< dS = |s||phi2|^2, dS' = |s||phi1|^2, ...
  DeltaReport matrix;
  double max_discrepancy = 0.0;
  URResult ur1;  ///< with C = [S, T]
  URResult ur2;
  /// The stated saturation conditions: 1 = ||phi1|^2 - |phi2|^2| for UR1 and
  /// max(|phi1|^2, |phi2|^2) = sqrt(||phi1|^2 - |phi2|^2| / 2) for UR2.
  bool stated_ur1_condition = false;
  bool stated_ur2_condition = false;
};

/// Throws PreconditionError unless |phi1|^2 + |phi2|^2 = 1 within 1e-10.
Matrix2x2Report matrix2x2_report(double s, double q, cplx phi1, cplx phi2,
                                 double tol = kSaturationTol);

// ---------------------------------------------------------------------- scans

struct ScanModel {
  enum class Kind { Swanson, Matrix2x2, BosonRotation };
  Kind kind = Kind::Swanson;
  double theta = 0.0;
  double s = 1.0;
  double q = 1.0;

  static ScanModel swanson(double theta) { return {Kind::Swanson, theta, 1.0, 1.0}; }
  static ScanModel matrix2x2(double s, double q) { return {Kind::Matrix2x2, 0.0, s, q}; }
  static ScanModel boson_rotation() { return {Kind::BosonRotation, 0.0, 1.0, 1.0}; }
  std::string to_string() const;
};

/// Fock models: coherent states on a re_points x im_points grid over
/// [-half_width, half_width]^2 plus e_0 .. e_{basis_states - 1} at dimension
/// dim. 2 x 2 model: |phi1|^2 = t for circle_points equally spaced t in [0, 1].
struct ScanGrid {
  int re_points = 5;
  int im_points = 5;
  double half_width = 0.70710678118654752440;
  int basis_states = 5;
  int dim = 64;
  int circle_points = 11;
};

struct ScanRow {
  std::string label;
  cplx z;          ///< coherent-state label (Fock models)
  double t = 0.0;  ///< |phi1|^2 (2 x 2 model)
  DeltaReport deltas;
  double ur1_gap = 0.0;
  double ur2_gap = 0.0;
  bool ur1_saturated = false;
  bool ur2_saturated = false;
  std::optional<SwansonMoments> moments;
  /// Saturation functionals at theta = pi/4: sqrt((C + 1/2)^2 - E^2) and
  /// sqrt(C + 1/2 - E^2); nullopt when the radicand is negative.
  std::optional<double> reading_square;
  std::optional<double> reading_linear;
  std::optional<bool> stated_ur1_condition;
  std::optional<bool> stated_ur2_condition;
};

struct ScanTable {
  ScanModel model;
  ScanGrid grid;
  std::vector<ScanRow> rows;
  double min_ur1_gap = 0.0;
  double min_ur2_gap = 0.0;
  int ur1_saturated_count = 0;
  int ur2_saturated_count = 0;
  std::optional<double> min_reading_square;
  std::optional<double> min_reading_linear;
};

ScanTable saturation_scan(const ScanModel& model, const ScanGrid& grid = {},
                          double tol = kSaturationTol);

}  // namespace weakcr
