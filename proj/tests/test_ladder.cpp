#include <doctest.h>

#include <cmath>

#include "weakcr/error.hpp"
#include "weakcr/ladder.hpp"

using namespace weakcr;

namespace {

// Kernel of cos(t) a + i sin(t) a† from the two-term recursion
// c_{n+1} = -i tan(t) sqrt(n)/sqrt(n+1) c_{n-1}, c_1 = 0.
Vector squeezed_oracle(double theta, int dim) {
  Vector c = Vector::Zero(dim);
  c[0] = 1.0;
  for (int n = 1; n + 1 < dim; ++n) {
    c[n + 1] = cplx(0, -std::tan(theta)) * std::sqrt(double(n) / double(n + 1)) * c[n - 1];
  }
  return c / c.norm();
}

Membership always(bool v) {
  return [v](const StateVector&) { return v; };
}

}  // namespace

TEST_SUITE("ladder") {
  TEST_CASE("kernel vector of the lowering operator is the vacuum") {
    const StateVector v = kernel_vector(lowering(16), 1e-10);
    CHECK((v.components() - basis_state(0, 16).components()).norm() < 1e-14);
    CHECK(v[0].imag() == 0.0);
    CHECK(v[0].real() > 0.0);
  }

  TEST_CASE("kernel vector of the swanson S") {
    const auto p = swanson_pair(0.3, 64);
    const StateVector v = kernel_vector(p.S(), 1e-8);
    const cplx ratio = v[2] / v[0];
    const cplx want{0.0, -std::tan(0.3) / std::sqrt(2.0)};
    CHECK(std::abs(ratio - want) < 1e-8);
    CHECK((v.components() - squeezed_oracle(0.3, 64)).norm() < 1e-10);
  }

  TEST_CASE("no kernel") {
    try {
      kernel_vector(identity(8), 1e-10);
      FAIL("expected NoKernel");
    } catch (const NoKernel& e) {
      CHECK(e.sigma_min() == doctest::Approx(1.0));
    }
  }

  TEST_CASE("raising ladder on the vacuum gives the number basis") {
    const auto fam = build_ladder(raising(32), basis_state(0, 32), 8, tail_membership(31));
    REQUIRE(fam.length() == 9);
    for (int k = 0; k <= 8; ++k) {
      CHECK((fam.vectors[k].components() - basis_state(k, 32).components()).norm() < 1e-13);
    }
    CHECK(fam.ladder_op_label == "a'");
  }

  TEST_CASE("membership decides the ladder length") {
    const auto fam = build_ladder(raising(8), basis_state(0, 8), 5, always(false));
    CHECK(fam.length() == 1);
    CHECK(fam.stop_reason.find("k=1") != std::string::npos);

    // The tail predicate stops the ladder once it reaches index safe_rank.
    const auto tail = build_ladder(raising(8), basis_state(0, 8), 20, tail_membership(7));
    CHECK(tail.length() == 7);
  }

  TEST_CASE("eigen check in the boson model") {
    const auto p = boson_pair(40);
    const auto fam = build_ladder(p.T(), basis_state(0, 40), 30, tail_membership(39));
    const auto chk = eigen_check(p, fam);
    REQUIRE(chk.number_residuals.size() == 31u);
    for (double r : chk.number_residuals) CHECK(r < 1e-12);
    for (double r : chk.lowering_residuals) CHECK(r < 1e-12);
  }

  TEST_CASE("eigen check on the swanson ladder") {
    const auto p = swanson_pair(0.3, 96);
    const StateVector xi0 = kernel_vector(p.S(), 1e-8);
    const auto fam = build_ladder(p.T(), xi0, 6, tail_membership(p.safe_rank()));
    REQUIRE(fam.length() == 7);
    const auto chk = eigen_check(p, fam);
    for (double r : chk.number_residuals) CHECK(r < 1e-8);
    for (double r : chk.lowering_residuals) CHECK(r < 1e-8);
  }

  TEST_CASE("a ladder on the wrong base fails the eigen check") {
    const auto p = boson_pair(32);
    const auto fam = build_ladder(p.T(), basis_state(1, 32), 4, tail_membership(31));
    const auto chk = eigen_check(p, fam);
    CHECK(chk.number_residuals[0] >= 1.0);
  }

  TEST_CASE("commutation with powers of T") {
    const auto p = boson_pair(32);
    CHECK(commutation_power_check(p, basis_state(5, 32), 1) < 1e-12);
    CHECK(commutation_power_check(p, basis_state(2, 32), 3) < 1e-10);
    CHECK(commutation_power_check(p, coherent_state(cplx(0.3, 0.2), 32), 2) < 1e-10);

    const auto sw = swanson_pair(0.3, 64);
    const StateVector xi0 = kernel_vector(sw.S(), 1e-8);
    // S xi_0 = 0, so S T^k xi_0 = k T^{k-1} xi_0 directly.
    for (int k = 1; k <= 4; ++k) {
      Vector tk = xi0.components();
      for (int j = 0; j < k - 1; ++j) tk = sw.T().entries() * tk;
      const Vector lhs = sw.S().entries() * (sw.T().entries() * tk);
      CHECK((lhs - double(k) * tk).norm() < 1e-10);
      CHECK(commutation_power_check(sw, xi0, k) < 1e-10);
    }
    CHECK_THROWS_AS(commutation_power_check(p, basis_state(29, 32), 3), TruncationError);
    CHECK_THROWS_AS(commutation_power_check(p, basis_state(0, 32), 0), DomainError);
  }

  TEST_CASE("biorthogonality in the boson model is exact") {
    const auto p = boson_pair(24);
    const auto a = analyze_ladders(p, 6);
    CHECK(a.gram.identity_deviation() == 0.0);
    CHECK(a.intertwiner.intertwining_defect < 1e-10);
    CHECK((a.intertwiner.K_xi.topLeftCorner(7, 7) - Matrix::Identity(7, 7)).norm() == 0.0);
    CHECK((a.intertwiner.K_eta.topLeftCorner(7, 7) - Matrix::Identity(7, 7)).norm() == 0.0);
  }

  TEST_CASE("swanson ladders") {
    const auto p = swanson_pair(0.3, 96);
    const auto a = analyze_ladders(p, 6);
    REQUIRE(a.xi.length() == 7);
    REQUIRE(a.eta.length() == 7);
    CHECK(a.xi_check.max_residual() < 1e-8);
    CHECK(a.eta_check.max_residual() < 1e-8);
    CHECK(a.gram.identity_deviation() < 1e-7);
    CHECK(a.spectrum.max_deviation < 1e-6);
    CHECK(a.spectrum.min_separation > 0.5);
    CHECK(a.intertwiner.inverse_defect < 1e-6);
    CHECK(a.intertwiner.intertwining_defect < 1e-6);
    CHECK(a.intertwiner.riesz.positive);
    CHECK(a.intertwiner.condition_xi < 100.0);
  }

  TEST_CASE("orthonormalized ladder on a length-5 family") {
    const auto a = analyze_ladders(swanson_pair(0.3, 96), 4);
    REQUIRE(a.xi.length() == 5);
    CHECK(a.intertwiner.riesz.orthonormality_defect < 1e-5);
  }

  TEST_CASE("mismatched families are not biorthogonal") {
    const auto p3 = swanson_pair(0.3, 64);
    const auto p0 = swanson_pair(0.0, 64);
    const auto xi = build_ladder(p3.T(), kernel_vector(p3.S(), 1e-8), 4, always(true));
    const auto d0 = p0.dual();
    const auto eta = build_ladder(d0.T(), kernel_vector(d0.S(), 1e-8), 4, always(true));
    const auto g = biorthogonality_gram(xi, eta);
    double off = 0.0;
    for (int i = 0; i < g.gram.rows(); ++i) {
      for (int j = 0; j < g.gram.cols(); ++j) {
        if (i != j) off = std::max(off, std::abs(g.gram(i, j)));
      }
    }
    CHECK(off > 1e-3);
  }

  TEST_CASE("gram is adjoint-symmetric under swapping the families") {
    const auto p = swanson_pair(0.5, 64);
    const auto d = p.dual();
    const auto xi = build_ladder(p.T(), kernel_vector(p.S(), 1e-8), 5, always(true));
    const auto eta = build_ladder(d.T(), kernel_vector(d.S(), 1e-8), 5, always(true));
    const Matrix g1 = biorthogonality_gram(xi, eta).gram;
    const Matrix g2 = biorthogonality_gram(eta, xi).gram;
    CHECK((g1 - g2.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("orthogonal bases cannot be normalized") {
    LadderFamily xi, eta;
    xi.vectors = {basis_state(0, 4)};
    eta.vectors = {basis_state(1, 4)};
    CHECK_THROWS_AS(biorthogonality_gram(xi, eta), NonNormalizable);
  }

  TEST_CASE("ladder vectors are linearly independent") {
    const auto a = analyze_ladders(swanson_pair(0.3, 96), 6);
    const Matrix x = a.xi.as_matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(x.adjoint() * x);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }

  TEST_CASE("dependent families are rejected") {
    const auto p = boson_pair(8);
    LadderFamily f;
    f.vectors = {basis_state(0, 8), basis_state(0, 8)};
    CHECK_THROWS_AS(intertwiners(p, f, f), ConditioningError);
  }
}
