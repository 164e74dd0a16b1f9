#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "weakcr/error.hpp"
#include "weakcr/uncertainty.hpp"

using namespace weakcr;

namespace {

constexpr int kDim = 64;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<cplx> coherent_labels() {
  return {cplx(0, 0), cplx(0.5, 0), cplx(0, -0.7), cplx(0.6, 0.6), cplx(-1, 0)};
}

StateVector random_state(std::mt19937_64& rng, int dim, int support) {
  std::normal_distribution<double> g;
  Vector v = Vector::Zero(dim);
  for (int i = 0; i < support; ++i) v[i] = cplx(g(rng), g(rng));
  return StateVector(v).normalized();
}

// (Delta A)^2 = <A xi, A xi> - |<A xi, xi>|^2, from plain Eigen products.
double delta_oracle(const Matrix& a, const Vector& xi) {
  const Vector ax = a * xi;
  const cplx e = xi.dot(ax);
  return std::sqrt(std::max(0.0, ax.squaredNorm() - std::norm(e)));
}

}  // namespace

TEST_SUITE("uncertainty") {
  TEST_CASE("delta basics") {
    const StateVector e0 = basis_state(0, kDim);
    CHECK(delta(identity(kDim), e0, 1.0) == doctest::Approx(0.0));
    CHECK(delta(raising(kDim), e0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    for (cplx z : coherent_labels()) {
      CHECK(delta(lowering(kDim), coherent_state(z, kDim), z) < 1e-8);
    }
    CHECK_THROWS_AS(delta(identity(3), StateVector(Vector::Ones(3)), 0.0), PreconditionError);
    CHECK_THROWS_AS(delta(identity(3), basis_state(0, 4), 0.0), DimensionMismatch);
  }

  TEST_CASE("expectation centers minimize the uncertainty") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    const OperatorPair pair = swanson_pair(0.3, 24);
    for (int trial = 0; trial < 5; ++trial) {
      const StateVector xi = random_state(rng, 24, 20);
      for (const TruncatedOperator& a : {pair.S(), pair.T(), pair.S().adjoint()}) {
        const double best = delta(a, xi, expectation(a, xi));
        CHECK(std::abs(best - delta_oracle(a.entries(), xi.components())) < 1e-12);
        for (int k = 0; k < 20; ++k) {
          CHECK(delta(a, xi, cplx(g(rng), g(rng))) >= best - 1e-12);
        }
      }
    }
  }

  TEST_CASE("rotated boson pair on coherent states") {
    const OperatorPair pair = rotated_boson_pair(kDim);
    for (cplx z : coherent_labels()) {
      CAPTURE(z);
      const StateVector phi = coherent_state(z, kDim);
      const URResult u1 = ur1_check(pair, phi);
      CHECK(std::abs(u1.deltas.dS - kInvSqrt2) < 1e-6);
      CHECK(std::abs(u1.deltas.dSd - kInvSqrt2) < 1e-6);
      CHECK(std::abs(u1.deltas.dT - kInvSqrt2) < 1e-6);
      CHECK(std::abs(u1.deltas.dTd - kInvSqrt2) < 1e-6);
      CHECK(std::abs(u1.rhs - 1.0) < 1e-6);
      CHECK(u1.saturated);
      const URResult u2 = ur2_check(pair, phi);
      CHECK(std::abs(u2.rhs - 2.0) < 1e-6);
      CHECK_FALSE(u2.saturated);
      CHECK_FALSE(u2.hypothesis_violated);
    }
  }

  TEST_CASE("boson pair on coherent states") {
    const OperatorPair pair = boson_pair(kDim);
    for (cplx z : coherent_labels()) {
      CAPTURE(z);
      const StateVector phi = coherent_state(z, kDim);
      const URResult u1 = ur1_check(pair, phi);
      CHECK(u1.deltas.dS < 1e-6);
      CHECK(std::abs(u1.deltas.dSd - 1.0) < 1e-6);
      CHECK(std::abs(u1.deltas.dT - 1.0) < 1e-6);
      CHECK(u1.deltas.dTd < 1e-6);
      CHECK(std::abs(u1.rhs - 2.0) < 1e-6);
      CHECK(std::abs(u1.gap - 1.0) < 1e-6);
      CHECK_FALSE(u1.saturated);
      const URResult u2 = ur2_check(pair, phi);
      CHECK(std::abs(u2.rhs - 1.0) < 1e-6);
      CHECK(u2.saturated);
    }
  }

  TEST_CASE("cross condition") {
    CHECK(cross_condition_defect(boson_pair(16)) < 1e-14);
    CHECK(cross_condition_defect(swanson_pair(0.4, 16)) < 1e-13);

    // T = a' + eps a^2 breaks [S', T] = [S, T'].
    const int n = 16;
    const double eps = 0.05;
    const Matrix a = lowering(n).entries();
    const Matrix t = raising(n).entries() + eps * a * a;
    const OperatorPair bent(lowering(n), TruncatedOperator(t, "T"), n - 2);
    const double want = [&] {
      const Matrix s = a, sd = a.adjoint(), td = t.adjoint();
      const Matrix m = (sd * t - t * sd) - (s * td - td * s);
      return m.topLeftCorner(n - 2, n - 2).cwiseAbs().maxCoeff();
    }();
    CHECK(want > 1e-3);
    const URResult u2 = ur2_check(bent, basis_state(1, n));
    CHECK(u2.hypothesis_violated);
    CHECK(std::abs(u2.cross_condition_defect - want) < 1e-12);
    CHECK(std::abs(cross_condition_defect(bent) - want) < 1e-12);
    // alpha scaling cancels.
    CHECK(std::abs(ur2_check(bent, basis_state(1, n), 3.0, -0.25).cross_condition_defect - want) <
          1e-12);
    CHECK_THROWS_AS(ur2_check(bent, basis_state(1, n), 0.0, 1.0), PreconditionError);
  }

  TEST_CASE("validity of both relations on random states") {
    std::mt19937_64 rng(8);
    for (double theta : {0.0, 0.2, 0.5, std::numbers::pi / 4, 1.1}) {
      const OperatorPair pair = swanson_pair(theta, 40);
      REQUIRE(weak_defect(pair) < 1e-10);
      for (int trial = 0; trial < 10; ++trial) {
        const StateVector xi = random_state(rng, 40, 30);
        CHECK(ur1_check(pair, xi).gap >= -1e-8);
        const URResult u2 = ur2_check(pair, xi);
        REQUIRE(u2.cross_condition_defect < 1e-10);
        CHECK(u2.gap >= -1e-8);
      }
    }
  }

  TEST_CASE("phase invariance") {
    std::mt19937_64 rng(9);
    const OperatorPair pair = swanson_pair(0.3, 32);
    for (int trial = 0; trial < 5; ++trial) {
      const StateVector xi = random_state(rng, 32, 25);
      const StateVector rot = xi * std::polar(1.0, 0.77 + trial);
      const URResult a1 = ur1_check(pair, xi), b1 = ur1_check(pair, rot);
      const URResult a2 = ur2_check(pair, xi), b2 = ur2_check(pair, rot);
      CHECK(a1.deltas.max_abs_difference(b1.deltas) < 1e-12);
      CHECK(std::abs(a1.gap - b1.gap) < 1e-12);
      CHECK(std::abs(a2.gap - b2.gap) < 1e-12);
    }
  }

  TEST_CASE("generalized C") {
    const OperatorPair pair = boson_pair(kDim);
    const StateVector phi = coherent_state(cplx(0.3, 0.1), kDim);
    const NCPoly comm = NCPoly::generator(Gen::S) * NCPoly::generator(Gen::T) -
                        NCPoly::generator(Gen::T) * NCPoly::generator(Gen::S);
    const URResult with_c = ur1_check(pair, phi, std::nullopt, std::nullopt, comm);
    CHECK(std::abs(with_c.c_expectation - cplx(1.0)) < 1e-10);
    const NCPoly two_i = NCPoly::scalar(GaussRational(0, 2));
    const URResult u2 = ur2_check(pair, phi, 1.0, 1.0, two_i);
    CHECK(u2.lhs == doctest::Approx(0.0));
    const URResult u1 = ur1_check(pair, phi, std::nullopt, std::nullopt, two_i);
    CHECK(u1.lhs == doctest::Approx(2.0));
  }

  TEST_CASE("swanson closed forms") {
    const std::vector<StateVector> states = {coherent_state(0.0, kDim), coherent_state(1.0, kDim),
                                             basis_state(2, kDim),
                                             coherent_state(cplx(0.4, -0.8), kDim)};
    for (double theta : {0.0, 0.2, std::numbers::pi / 4, -0.6, 1.3}) {
      for (const auto& phi : states) {
        CAPTURE(theta);
        const SwansonReport r = swanson_closed_form(theta, phi);
        CHECK(r.max_discrepancy < 1e-6);
        CHECK(r.moments.C_phi >= -1e-12);
      }
    }
    const SwansonReport z0 = swanson_closed_form(0.0, coherent_state(cplx(0.5, 0.2), kDim));
    CHECK(std::abs(z0.moments.C_phi) < 1e-10);
    CHECK(std::abs(z0.moments.E_phi) < 1e-10);
    CHECK(z0.closed_form.dS < 1e-5);
    CHECK(std::abs(z0.closed_form.dSd - 1.0) < 1e-10);
    CHECK(std::abs(z0.closed_form.dT - 1.0) < 1e-10);
    CHECK(z0.closed_form.dTd < 1e-5);
    const SwansonReport q = swanson_closed_form(std::numbers::pi / 4, coherent_state(0.7, kDim));
    for (double d : {q.closed_form.dS, q.closed_form.dSd, q.closed_form.dT, q.closed_form.dTd}) {
      CHECK(std::abs(d - kInvSqrt2) < 1e-6);
    }
    // e_2: C = 2, E = 0.
    const SwansonMoments m2 = swanson_moments(basis_state(2, kDim));
    CHECK(m2.C_phi == doctest::Approx(2.0));
    CHECK(m2.E_phi == doctest::Approx(0.0));
  }

  TEST_CASE("swanson closed forms flag a truncation that is too small") {
    // The top basis vector sees a truncated a a', so the closed forms and the
    // matrices disagree there.
    const SwansonReport r = swanson_closed_form(0.3, basis_state(7, 8));
    CHECK(r.max_discrepancy > 1e-2);
  }

  TEST_CASE("2x2 model") {
    const Matrix2x2Report a = matrix2x2_report(1.0, 1.0, 1.0, 0.0);
    CHECK(a.matrix.dS == doctest::Approx(0.0));
    CHECK(a.matrix.dSd == doctest::Approx(1.0));
    CHECK(a.matrix.dT == doctest::Approx(1.0));
    CHECK(a.matrix.dTd == doctest::Approx(0.0));
    CHECK(a.stated_ur1_condition);
    CHECK(std::abs(a.ur1.c_expectation - cplx(1.0)) < 1e-15);

    const Matrix2x2Report b = matrix2x2_report(1.0, 1.0, kInvSqrt2, kInvSqrt2);
    CHECK_FALSE(b.stated_ur2_condition);
    CHECK_FALSE(b.ur2.saturated);

    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
      const double s = u(rng), q = u(rng);
      const cplx p1(u(rng), u(rng)), p2(u(rng), u(rng));
      const double n = std::sqrt(std::norm(p1) + std::norm(p2));
      const Matrix2x2Report r = matrix2x2_report(s, q, p1 / n, p2 / n);
      CHECK(r.max_discrepancy < 1e-14);
      CHECK(r.ur1.gap >= -1e-12);
      CHECK(r.ur2.gap >= -1e-12);
      CHECK(r.ur2.cross_condition_defect == 0.0);
    }
    CHECK_THROWS_AS(matrix2x2_report(1.0, 1.0, 1.0, 1.0), PreconditionError);
  }

  TEST_CASE("2x2 model: computed saturation pattern") {
    // With C = [S, T] = s q diag(1, -1) and t = |phi1|^2 the relations reduce to
    //   UR1: 2 max(t, 1 - t)^2 >= |2t - 1|   (never tight)
    //   UR2: 1 >= |2t - 1|                    (tight at t = 0, 1)
    for (int i = 0; i <= 10; ++i) {
      const double t = i / 10.0;
      const Matrix2x2Report r = matrix2x2_report(1.0, 1.0, std::sqrt(t), std::sqrt(1.0 - t));
      const double m = std::max(t, 1.0 - t);
      CHECK(std::abs(r.ur1.gap - (2.0 * m * m - std::abs(2.0 * t - 1.0))) < 1e-12);
      CHECK(std::abs(r.ur2.gap - (1.0 - std::abs(2.0 * t - 1.0))) < 1e-12);
      CHECK_FALSE(r.ur1.saturated);
      CHECK(r.ur2.saturated == (i == 0 || i == 10));
      CHECK(r.stated_ur1_condition == (i == 0 || i == 10));
      CHECK_FALSE(r.stated_ur2_condition);
    }
  }

  TEST_CASE("saturation scans") {
    const ScanTable s0 = saturation_scan(ScanModel::swanson(0.0));
    CHECK(s0.rows.size() == 30);
    CHECK(s0.min_ur1_gap > 0.4);
    CHECK(s0.ur1_saturated_count == 0);
    // Coherent states and e_0 saturate UR2 at theta = 0 (C_phi = 0).
    CHECK(s0.ur2_saturated_count == 26);
    CHECK_FALSE(s0.min_reading_square.has_value());

    const ScanTable q = saturation_scan(ScanModel::swanson(std::numbers::pi / 4));
    REQUIRE(q.min_reading_square.has_value());
    REQUIRE(q.min_reading_linear.has_value());
    CHECK(*q.min_reading_square >= 0.5 - 1e-8);
    CHECK(q.ur2_saturated_count == 0);
    CHECK(q.ur1_saturated_count == 26);
    for (const auto& row : q.rows) {
      if (!row.reading_square) continue;
      // UR1 rhs = 2 sqrt((C + 1/2)^2 - E^2) at theta = pi/4.
      CHECK(std::abs(row.ur1_gap - (2.0 * *row.reading_square - 1.0)) < 1e-8);
    }
    const ScanTable rot = saturation_scan(ScanModel::boson_rotation());
    CHECK(rot.min_ur1_gap == doctest::Approx(q.min_ur1_gap));

    const ScanTable m = saturation_scan(ScanModel::matrix2x2(1.0, 1.0));
    CHECK(m.rows.size() == 11);
    CHECK(m.ur1_saturated_count == 0);
    CHECK(m.ur2_saturated_count == 2);
  }
}
