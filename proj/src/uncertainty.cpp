#include "weakcr/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weakcr/error.hpp"

namespace weakcr {

namespace {

constexpr double kNormTol = 1e-10;

void require_unit(const StateVector& xi, const char* where) {
  if (std::abs(xi.norm() - 1.0) > kNormTol) {
    throw PreconditionError(std::string(where) + ": state must have unit norm (got " +
                            std::to_string(xi.norm()) + ")");
  }
}

void require_dim(const OperatorPair& pair, const StateVector& xi, const char* where) {
  if (pair.dim() != xi.dim()) {
    throw DimensionMismatch(std::string(where) + ": pair dimension " +
                            std::to_string(pair.dim()) + " vs state dimension " +
                            std::to_string(xi.dim()));
  }
}

// <xi, C xi> with C = 1 when absent.
cplx c_expectation(const OperatorPair& pair, const StateVector& xi,
                   const std::optional<NCPoly>& c) {
  if (!c) return {1.0, 0.0};
  return expectation(fock_eval(*c, pair), xi);
}

bool is_quarter_pi(double theta) { return std::abs(theta - std::numbers::pi / 4) < 1e-12; }

std::optional<double> sqrt_or_none(double x) {
  if (x < 0.0) return std::nullopt;
  return std::sqrt(x);
}

void fold_min(std::optional<double>& acc, const std::optional<double>& v) {
  if (v && (!acc || *v < *acc)) acc = v;
}

}  // namespace

cplx expectation(const TruncatedOperator& a, const StateVector& xi) {
  return a.apply(xi).inner(xi);
}

double delta(const TruncatedOperator& a, const StateVector& xi, cplx z) {
  require_unit(xi, "delta");
  if (a.dim() != xi.dim()) throw DimensionMismatch("delta: operator and state dimensions differ");
  const StateVector ax = a.apply(xi);
  return StateVector(ax.components() - z * xi.components()).norm();
}

double DeltaReport::max_abs_difference(const DeltaReport& o) const {
  return std::max({std::abs(dS - o.dS), std::abs(dSd - o.dSd), std::abs(dT - o.dT),
                   std::abs(dTd - o.dTd)});
}

DeltaReport deltas(const OperatorPair& pair, const StateVector& xi, std::optional<cplx> z,
                   std::optional<cplx> w) {
  require_unit(xi, "deltas");
  require_dim(pair, xi, "deltas");
  DeltaReport r;
  r.z = z.value_or(expectation(pair.S(), xi));
  r.w = w.value_or(expectation(pair.T(), xi));
  r.dS = delta(pair.S(), xi, r.z);
  r.dSd = delta(pair.S().adjoint(), xi, std::conj(r.z));
  r.dT = delta(pair.T(), xi, r.w);
  r.dTd = delta(pair.T().adjoint(), xi, std::conj(r.w));
  r.state_norm = xi.norm();
  return r;
}

std::string to_string(URKind k) { return k == URKind::UR1 ? "UR1" : "UR2"; }

URResult ur1_check(const OperatorPair& pair, const StateVector& xi, std::optional<cplx> z,
                   std::optional<cplx> w, const std::optional<NCPoly>& c, double tol) {
  URResult r;
  r.kind = URKind::UR1;
  r.deltas = deltas(pair, xi, z, w);
  r.c_expectation = c_expectation(pair, xi, c);
  r.lhs = std::abs(r.c_expectation);
  r.rhs = 2.0 * std::max(r.deltas.dS, r.deltas.dSd) * std::max(r.deltas.dT, r.deltas.dTd);
  r.gap = r.rhs - r.lhs;
  r.saturated = std::abs(r.gap) <= tol;
  return r;
}

double cross_condition_defect(const OperatorPair& pair) {
  const Matrix& s = pair.S().entries();
  const Matrix& t = pair.T().entries();
  const Matrix sd = s.adjoint(), td = t.adjoint();
  const Matrix m = (sd * t - t * sd) - (s * td - td * s);
  const int b = pair.safe_rank();
  return b > 0 ? m.topLeftCorner(b, b).cwiseAbs().maxCoeff() : 0.0;
}

URResult ur2_check(const OperatorPair& pair, const StateVector& xi, double alpha_s,
                   double alpha_t, const std::optional<NCPoly>& c, double tol) {
  if (alpha_s == 0.0 || alpha_t == 0.0 || !std::isfinite(alpha_s) || !std::isfinite(alpha_t)) {
    throw PreconditionError("ur2_check: alpha_s and alpha_t must be finite and nonzero");
  }
  URResult r;
  r.kind = URKind::UR2;
  r.deltas = deltas(pair, xi);
  r.c_expectation = c_expectation(pair, xi, c);

  // [D, E] = i a_s a_t (K + K' + [S', T] - [S, T']) with K = [S, T].
  const Matrix& s = pair.S().entries();
  const Matrix& t = pair.T().entries();
  const Matrix d = alpha_s * (s + s.adjoint());
  const Matrix e = cplx(0.0, alpha_t) * (t - t.adjoint());
  const Matrix k = s * t - t * s;
  const Matrix rest = (d * e - e * d) - cplx(0.0, alpha_s * alpha_t) * (k + k.adjoint());
  const int b = pair.safe_rank();
  r.cross_condition_defect =
      b > 0 ? rest.topLeftCorner(b, b).cwiseAbs().maxCoeff() / std::abs(alpha_s * alpha_t) : 0.0;
  r.hypothesis_violated = r.cross_condition_defect > kCrossConditionTol;

  r.lhs = std::abs(r.c_expectation.real());
  r.rhs = (r.deltas.dS + r.deltas.dSd) * (r.deltas.dT + r.deltas.dTd);
  r.gap = r.rhs - r.lhs;
  r.saturated = std::abs(r.gap) <= tol;
  return r;
}

// ------------------------------------------------------------- Swanson model

SwansonMoments swanson_moments(const StateVector& phi) {
  require_unit(phi, "swanson_moments");
  const int n = phi.dim();
  const TruncatedOperator a = lowering(n);
  const TruncatedOperator ad = raising(n);
  const StateVector a_phi = a.apply(phi);
  const cplx ea = a_phi.inner(phi);
  const cplx ead = ad.apply(phi).inner(phi);
  const cplx ead2 = ad.apply(ad.apply(phi)).inner(phi);
  SwansonMoments m;
  // <phi, a'a phi> = ||a phi||^2 avoids the truncated a a' corner.
  m.C_phi = a_phi.inner(a_phi).real() - std::norm(ea);
  m.E_phi = (ead2 - ead * ead).imag();
  return m;
}

SwansonReport swanson_closed_form(double theta, const StateVector& phi) {
  require_unit(phi, "swanson_closed_form");
  SwansonReport r;
  r.theta = theta;
  r.moments = swanson_moments(phi);
  const double c = r.moments.C_phi, e = r.moments.E_phi;
  const double s2 = std::sin(theta) * std::sin(theta);
  const double c2 = std::cos(theta) * std::cos(theta);
  const double x = std::sin(2.0 * theta) * e;
  const double sq[4] = {c + s2 - x, c + c2 - x, c + c2 + x, c + s2 + x};
  for (double v : sq) {
    if (v < -1e-12) {
      throw InconsistencyError("swanson_closed_form: squared delta " + std::to_string(v) +
                               " is negative (truncation too small?)");
    }
  }
  auto root = [](double v) { return std::sqrt(std::max(v, 0.0)); };
  const OperatorPair pair = swanson_pair(theta, phi.dim());
  r.matrix = deltas(pair, phi);
  r.closed_form = r.matrix;
  r.closed_form.dS = root(sq[0]);
  r.closed_form.dSd = root(sq[1]);
  r.closed_form.dT = root(sq[2]);
  r.closed_form.dTd = root(sq[3]);
  r.max_discrepancy = r.closed_form.max_abs_difference(r.matrix);
  return r;
}

// ------------------------------------------------------------------ 2 x 2 model

OperatorPair matrix2x2_pair(double s, double q) {
  Matrix ms = Matrix::Zero(2, 2), mt = Matrix::Zero(2, 2);
  ms(0, 1) = s;
  mt(1, 0) = q;
  return OperatorPair(TruncatedOperator(ms, "S"), TruncatedOperator(mt, "T"), 2);
}

Matrix2x2Report matrix2x2_report(double s, double q, cplx phi1, cplx phi2, double tol) {
  const double p1 = std::norm(phi1), p2 = std::norm(phi2);
  if (std::abs(p1 + p2 - 1.0) > kNormTol) {
    throw PreconditionError("matrix2x2_report: |phi1|^2 + |phi2|^2 must be 1");
  }
  Vector v(2);
  v << phi1, phi2;
  const StateVector phi(v);
  const OperatorPair pair = matrix2x2_pair(s, q);

  Matrix2x2Report r;
  r.s = s;
  r.q = q;
  r.matrix = deltas(pair, phi);
  r.closed_form = r.matrix;
  r.closed_form.dS = std::abs(s) * p2;
  r.closed_form.dSd = std::abs(s) * p1;
  r.closed_form.dT = std::abs(q) * p1;
  r.closed_form.dTd = std::abs(q) * p2;
  r.max_discrepancy = r.closed_form.max_abs_difference(r.matrix);

  const NCPoly comm = NCPoly::generator(Gen::S) * NCPoly::generator(Gen::T) -
                      NCPoly::generator(Gen::T) * NCPoly::generator(Gen::S);
  r.ur1 = ur1_check(pair, phi, std::nullopt, std::nullopt, comm, tol);
  r.ur2 = ur2_check(pair, phi, 1.0, 1.0, comm, tol);
  r.stated_ur1_condition = std::abs(1.0 - std::abs(p1 - p2)) <= tol;
  r.stated_ur2_condition = std::abs(std::max(p1, p2) - std::sqrt(0.5 * std::abs(p1 - p2))) <= tol;
  return r;
}

// ---------------------------------------------------------------------- scans

std::string ScanModel::to_string() const {
  switch (kind) {
    case Kind::Swanson: return "swanson:" + std::to_string(theta);
    case Kind::Matrix2x2: return "matrix2x2:" + std::to_string(s) + "," + std::to_string(q);
    case Kind::BosonRotation: return "boson_rotation";
  }
  return "?";
}

namespace {

std::vector<std::pair<std::string, std::pair<cplx, StateVector>>> fock_states(
    const ScanGrid& g) {
  std::vector<std::pair<std::string, std::pair<cplx, StateVector>>> out;
  auto axis = [&](int i, int n) {
    return n == 1 ? 0.0 : -g.half_width + 2.0 * g.half_width * i / (n - 1);
  };
  for (int i = 0; i < g.re_points; ++i) {
    for (int j = 0; j < g.im_points; ++j) {
      const cplx z(axis(i, g.re_points), axis(j, g.im_points));
      out.push_back({"coherent", {z, coherent_state(z, g.dim)}});
    }
  }
  for (int k = 0; k < g.basis_states; ++k) {
    out.push_back({"e" + std::to_string(k), {cplx{}, basis_state(k, g.dim)}});
  }
  return out;
}

}  // namespace

ScanTable saturation_scan(const ScanModel& model, const ScanGrid& grid, double tol) {
  ScanTable table;
  table.model = model;
  table.grid = grid;

  if (model.kind == ScanModel::Kind::Matrix2x2) {
    if (grid.circle_points < 2) throw DomainError("saturation_scan: need >= 2 circle points");
    for (int i = 0; i < grid.circle_points; ++i) {
      const double t = static_cast<double>(i) / (grid.circle_points - 1);
      const Matrix2x2Report rep =
          matrix2x2_report(model.s, model.q, std::sqrt(t), std::sqrt(1.0 - t), tol);
      ScanRow row;
      row.label = "circle";
      row.t = t;
      row.deltas = rep.matrix;
      row.ur1_gap = rep.ur1.gap;
      row.ur2_gap = rep.ur2.gap;
      row.ur1_saturated = rep.ur1.saturated;
      row.ur2_saturated = rep.ur2.saturated;
      row.stated_ur1_condition = rep.stated_ur1_condition;
      row.stated_ur2_condition = rep.stated_ur2_condition;
      table.rows.push_back(std::move(row));
    }
  } else {
    if (grid.re_points < 1 || grid.im_points < 1 || grid.basis_states < 0 || grid.dim < 2) {
      throw DomainError("saturation_scan: empty grid");
    }
    const double theta = model.kind == ScanModel::Kind::BosonRotation ? std::numbers::pi / 4
                                                                       : model.theta;
    const OperatorPair pair = swanson_pair(theta, grid.dim);
    const bool quarter = is_quarter_pi(theta);
    for (auto& [label, zs] : fock_states(grid)) {
      const StateVector& phi = zs.second;
      const URResult u1 = ur1_check(pair, phi, std::nullopt, std::nullopt, std::nullopt, tol);
      const URResult u2 = ur2_check(pair, phi, 1.0, 1.0, std::nullopt, tol);
      ScanRow row;
      row.label = label;
      row.z = zs.first;
      row.deltas = u1.deltas;
      row.ur1_gap = u1.gap;
      row.ur2_gap = u2.gap;
      row.ur1_saturated = u1.saturated;
      row.ur2_saturated = u2.saturated;
      row.moments = swanson_moments(phi);
      if (quarter) {
        const double c = row.moments->C_phi, e = row.moments->E_phi;
        row.reading_square = sqrt_or_none((c + 0.5) * (c + 0.5) - e * e);
        row.reading_linear = sqrt_or_none(c + 0.5 - e * e);
        fold_min(table.min_reading_square, row.reading_square);
        fold_min(table.min_reading_linear, row.reading_linear);
      }
      table.rows.push_back(std::move(row));
    }
  }

  table.min_ur1_gap = table.rows.front().ur1_gap;
  table.min_ur2_gap = table.rows.front().ur2_gap;
  for (const auto& row : table.rows) {
    table.min_ur1_gap = std::min(table.min_ur1_gap, row.ur1_gap);
    table.min_ur2_gap = std::min(table.min_ur2_gap, row.ur2_gap);
    table.ur1_saturated_count += row.ur1_saturated ? 1 : 0;
    table.ur2_saturated_count += row.ur2_saturated ? 1 : 0;
  }
  return table;
}

}  // namespace weakcr
