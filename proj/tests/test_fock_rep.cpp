#include <doctest.h>

#include <cmath>
#include <numbers>

#include "weakcr/error.hpp"
#include "weakcr/fock_rep.hpp"

using namespace weakcr;

namespace {

// Independent exponential: Taylor series summed to convergence. Only used for
// small-norm generators in tests.
Matrix taylor_exp(const Matrix& a) {
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k < 200; ++k) {
    term = term * a / double(k);
    sum += term;
    if (term.norm() < 1e-18 * sum.norm()) break;
  }
  return sum;
}

}  // namespace

TEST_SUITE("fock_rep") {
  TEST_CASE("ladder matrices") {
    const Matrix a2 = lowering(2).entries();
    CHECK(a2(0, 1) == cplx(1.0));
    CHECK(a2(0, 0) == cplx(0.0));
    CHECK(a2(1, 0) == cplx(0.0));
    CHECK(a2(1, 1) == cplx(0.0));

    const Matrix a3 = lowering(3).entries();
    CHECK(a3(0, 1) == cplx(1.0));
    CHECK(a3(1, 2) == cplx(std::sqrt(2.0)));
    CHECK(a3.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));

    CHECK_THROWS_AS(lowering(1), InvalidDimension);
    CHECK_THROWS_AS(raising(0), InvalidDimension);
  }

  TEST_CASE("commutator of truncated ladder operators") {
    const Matrix a = lowering(8).entries();
    const Matrix ad = raising(8).entries();
    const Matrix c = a * ad - ad * a;
    CHECK((c.topLeftCorner(7, 7) - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(c(7, 7) + 7.0) < 1e-14);
  }

  TEST_CASE("adjoint is an involution and flips labels") {
    Matrix m = Matrix::Random(5, 5);
    TruncatedOperator op(m, "S");
    CHECK(op.adjoint().label() == "S'");
    CHECK(op.adjoint().adjoint().label() == "S");
    CHECK(op.adjoint().adjoint().entries() == m);
  }

  TEST_CASE("operator construction validates shapes and values") {
    CHECK_THROWS_AS(TruncatedOperator(Matrix::Zero(2, 3), "X"), InvalidDimension);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(TruncatedOperator(bad, "X"), DomainError);
    CHECK_THROWS_AS(OperatorPair(lowering(4), raising(5), 3), DimensionMismatch);
    CHECK_THROWS_AS(OperatorPair(lowering(4), raising(4), 5), InvalidDimension);
    CHECK_THROWS_AS(OperatorPair(lowering(4), raising(4), 0), InvalidDimension);
  }

  TEST_CASE("coherent states") {
    const StateVector e0 = coherent_state(0.0, 10);
    CHECK(e0[0] == cplx(1.0));
    CHECK(e0.norm() == doctest::Approx(1.0).epsilon(1e-15));

    const int n = 40;
    const StateVector phi = coherent_state(1.0, n);
    CHECK(phi.is_normalized());
    const StateVector aphi = lowering(n).apply(phi);
    CHECK((aphi.components() - phi.components()).norm() < 1e-8);

    // <phi, a† a phi> as a direct sum over |c_n|^2 n.
    double number = 0.0;
    for (int k = 0; k < n; ++k) number += std::norm(phi[k]) * k;
    CHECK(number == doctest::Approx(1.0).epsilon(1e-8));
    const StateVector nphi = raising(n).apply(aphi);
    CHECK(std::abs(phi.inner(nphi) - 1.0) < 1e-8);
  }

  TEST_CASE("coherent state tail check") {
    // |z|^2 = 4 at N = 10 leaves a large tail.
    try {
      coherent_state(cplx(2.0, 0.0), 10);
      FAIL("expected TruncationTooSmall");
    } catch (const TruncationTooSmall& e) {
      double tail = 0.0;
      double term = 1.0;
      for (int k = 1; k < 200; ++k) {
        term *= 4.0 / k;
        if (k >= 10) tail += term;
      }
      CHECK(e.tail_mass() == doctest::Approx(tail).epsilon(1e-10));
    }
    CHECK(coherent_tail_mass(cplx(0.6, 0.7), 64) < 1e-40);
  }

  TEST_CASE("swanson pair") {
    const auto p0 = swanson_pair(0.0, 6);
    CHECK(p0.S().entries() == lowering(6).entries());
    CHECK(p0.T().entries() == raising(6).entries());
    CHECK(p0.safe_rank() == 5);

    const auto p = swanson_pair(std::numbers::pi / 4, 6);
    const Matrix a = lowering(6).entries();
    const Matrix want = (a + cplx(0, 1) * a.adjoint()) / std::sqrt(2.0);
    CHECK((p.S().entries() - want).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((rotated_boson_pair(6).T().entries() -
           (a.adjoint() + cplx(0, 1) * a) / std::sqrt(2.0))
              .cwiseAbs()
              .maxCoeff() < 1e-15);

    for (double th : {0.0, 0.3, std::numbers::pi / 4}) {
      CHECK(weak_defect(swanson_pair(th, 64)) < 1e-12);
    }
    for (int n : {4, 5, 9, 33}) {
      for (double th : {-1.0, 0.1, 1.3, 2.9}) CHECK(weak_defect(swanson_pair(th, n)) < 1e-12);
    }
  }

  TEST_CASE("weak defect") {
    CHECK(weak_defect(boson_pair(16)) < 1e-14);
    const auto aa = OperatorPair(lowering(16), lowering(16), 15);
    CHECK(weak_defect(aa) >= 1.0);
    CHECK(weak_defect(swanson_pair(0.3, 64)) < 1e-12);
  }

  TEST_CASE("weak defect agrees with the inner-product definition") {
    const auto p = swanson_pair(0.7, 12);
    const Matrix& s = p.S().entries();
    const Matrix& t = p.T().entries();
    double worst = 0.0;
    for (int i = 0; i < p.safe_rank(); ++i) {
      for (int j = 0; j < p.safe_rank(); ++j) {
        const StateVector ei = basis_state(i, 12), ej = basis_state(j, 12);
        const StateVector te(t * ei.components()), sde(s.adjoint() * ej.components());
        const StateVector se(s * ei.components()), tde(t.adjoint() * ej.components());
        const cplx v = te.inner(sde) - se.inner(tde) - (i == j ? 1.0 : 0.0);
        worst = std::max(worst, std::abs(v));
      }
    }
    CHECK(worst == doctest::Approx(weak_defect(p)).epsilon(1e-12));
  }

  TEST_CASE("adjoint pair has the same weak defect") {
    for (double th : {0.0, 0.4, 1.1}) {
      const auto p = swanson_pair(th, 20);
      CHECK(std::abs(weak_defect(p) - weak_defect(p.dual())) < 1e-12);
    }
    const auto aa = OperatorPair(lowering(10), lowering(10), 9);
    CHECK(std::abs(weak_defect(aa) - weak_defect(aa.dual())) < 1e-12);
  }

  TEST_CASE("matrix exponential matches a Taylor oracle") {
    const Matrix a = 0.1 * lowering(24).entries();
    CHECK((matrix_exp(a) - taylor_exp(a)).cwiseAbs().maxCoeff() < 1e-14);
    const Matrix b = 0.2 * swanson_pair(0.3, 16).T().entries();
    CHECK((matrix_exp(b) - taylor_exp(b)).norm() < 1e-12 * taylor_exp(b).norm());
  }

  TEST_CASE("quasi-strong defect") {
    CHECK(quasi_strong_defect(boson_pair(16), 0.0) == 0.0);
    const auto aa = OperatorPair(lowering(32), lowering(32), 31);
    CHECK(quasi_strong_defect(aa, 0.0) == 0.0);
    CHECK(quasi_strong_defect(swanson_pair(0.5, 20), 0.0) == 0.0);

    CHECK(quasi_strong_defect(boson_pair(128), 0.1) < 1e-8);
    CHECK(quasi_strong_defect(aa, 0.1) > 1e-3);
    CHECK_THROWS_AS(quasi_strong_defect(boson_pair(16), -0.1), DomainError);
    CHECK_THROWS_AS(quasi_strong_defect(boson_pair(16), 10.0), TruncationError);
  }

  TEST_CASE("quasi-strong defect agrees with an entrywise oracle") {
    const auto p = boson_pair(40);
    const double alpha = 0.1;
    const Matrix v = taylor_exp(alpha * p.S().entries());
    const Matrix& t = p.T().entries();
    const int band = p.safe_rank() - semigroup_margin(alpha, 40);
    CHECK(band == 39 - 7);
    double worst = 0.0;
    for (int i = 0; i < band; ++i) {
      for (int j = 0; j < band; ++j) {
        const cplx lhs = (v * t)(j, i);
        const cplx mid = (t.adjoint().col(j)).dot(v.col(i));  // <V e_i, T† e_j>
        worst = std::max(worst, std::abs(lhs - mid - alpha * v(j, i)));
      }
    }
    CHECK(worst < 1e-13);
    CHECK(quasi_strong_defect(p, alpha) < 1e-13);
  }

  TEST_CASE("weyl defect") {
    CHECK(weyl_defect(boson_pair(32), 0.0, 0.3) == 0.0);
    CHECK(weyl_defect(boson_pair(32), 0.3, 0.0) == 0.0);
    CHECK(weyl_defect(boson_pair(256), 0.1, 0.1) < 1e-6);
    const auto aa = OperatorPair(lowering(64), lowering(64), 63);
    CHECK(weyl_defect(aa, 0.5, 0.5) > 1e-2);
    CHECK_THROWS_AS(weyl_defect(boson_pair(16), -1.0, 0.1), DomainError);
  }

  TEST_CASE("weyl defect under truncation growth") {
    // Truncation error dominates at N = 32; from N = 64 on the defect sits at
    // the double-precision floor and no longer decreases.
    const double d32 = weyl_defect(boson_pair(32), 0.1, 0.1);
    const double d64 = weyl_defect(boson_pair(64), 0.1, 0.1);
    CHECK(d32 > d64);
    for (int n : {64, 128, 256}) CHECK(weyl_defect(boson_pair(n), 0.1, 0.1) < 1e-13);
  }

  TEST_CASE("implication chain in the boson model") {
    const auto p = boson_pair(256);
    CHECK(weak_defect(p) < 1e-6);
    CHECK(quasi_strong_defect(p, 0.1) < 1e-6);
    CHECK(weyl_defect(p, 0.1, 0.1) < 1e-6);
  }

  TEST_CASE("spectral norm matches the largest singular value") {
    std::srand(5);
    const Matrix m = Matrix::Random(9, 6);
    Eigen::JacobiSVD<Matrix> svd(m);
    CHECK(spectral_norm(m) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
    CHECK(spectral_norm(m.adjoint()) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
  }

  TEST_CASE("apply agrees with Eigen products") {
    const auto p = swanson_pair(0.3, 30);
    const StateVector v = coherent_state(cplx(0.4, -0.2), 30);
    const StateVector w = p.T().apply(v);
    CHECK((w.components() - p.T().entries() * v.components()).norm() < 1e-14);
    CHECK_THROWS_AS(p.T().apply(basis_state(0, 5)), DimensionMismatch);
  }
}
