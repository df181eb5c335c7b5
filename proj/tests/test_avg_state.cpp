#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cglab/avg_state.hpp"
#include "oracles.hpp"

using namespace cglab;

namespace {

CMatrix werner(double alpha) {
  const CVector s = oracle::singlet();
  return alpha * s * s.adjoint() + (1 - alpha) * CMatrix::Identity(4, 4) / 4.0;
}

CMatrix basis_proj(std::size_t l) {
  CMatrix m = CMatrix::Zero(4, 4);
  m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)) = 1.0;
  return m;
}

double min_pt_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.partial_transpose(1));
  return es.eigenvalues().minCoeff();
}

// Outside-branch coefficients c1, c2 written out for any sign of h.
double c1_outside_full(double h, double r) {
  const double s = r * r + r + 1;
  return 2 * r * (1 + h) * (3 * r * r - h * s) / (24 * (1 - h * h) * r * r);
}
double c1_separable(double h, double r) { return (r * r - h) / (4 * (1 - h) * r); }

}  // namespace

TEST_CASE("werner state at the origin") {
  for (double h : {0.2, 0.5, 0.8}) {
    const AvgState a = avg_state_full(h, 0.0);
    const double alpha = (1 - h) / (3 * (1 + h));
    CHECK((a.rho.matrix() - werner(alpha)).norm() < 1e-14);
    CHECK(a.coeffs.c1 == 0.0);
    CHECK(a.coeffs.c2 == 0.0);
    CHECK(a.coeffs.c3 == 0.0);
    CHECK(a.coeffs.c4 == doctest::Approx(-(1 - h) / (12 * (1 + h))).epsilon(1e-15));
    CHECK(a.coeffs.branch == Branch::inside);
  }
  CHECK(avg_state_full(0.5, 0.0).coeffs.c4 == doctest::Approx(-1.0 / 36));
}

TEST_CASE("pure target gives the coherent product") {
  for (double h : {0.1, 0.5, 1.0}) {
    CHECK((avg_state_full(h, 1.0).rho.matrix() - basis_proj(0)).norm() < 1e-10);
    CHECK(avg_state_diagnostics(avg_state_full(h, 1.0).rho).purity == doctest::Approx(1.0));
  }
  for (double h : {0.1, 0.5, 0.9}) CHECK((avg_state_separable(h, 1.0).rho.matrix() - basis_proj(0)).norm() < 1e-10);
}

TEST_CASE("separable state at r = h is |1,0>") {
  for (double h : {0.1, 0.3, 0.6, 0.9}) {
    CHECK((avg_state_separable(h, h).rho.matrix() - basis_proj(2)).norm() < 1e-10);
  }
  CHECK_THROWS_AS(avg_state_separable(0.6, 0.5), EmptyPreimage);
}

TEST_CASE("inside branch equalities") {
  const AvgStateCoeffs c = avg_state_coeffs(0.5, 0.3, Ensemble::full);
  CHECK(c.c3 == 0.0);
  const auto comp = pauli_components16(c.matrix());
  CHECK(comp[15] == doctest::Approx(comp[5]).epsilon(1e-14));
  CHECK(c.rho33() == doctest::Approx(c.rho11()));
  // the six nonzero components
  CHECK(comp[12] == doctest::Approx(c.rho30()));
  CHECK(comp[3] == doctest::Approx(c.rho03()));
  CHECK(comp[10] == doctest::Approx(c.rho22()));
  for (int i : {1, 2, 4, 6, 7, 8, 9, 11, 13, 14}) CHECK(std::abs(comp[static_cast<std::size_t>(i)]) < 1e-15);
}

TEST_CASE("branches meet at r = h") {
  for (double h : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const AvgStateCoeffs in = avg_state_coeffs(h, h * (1 - 1e-12), Ensemble::full);
    const AvgStateCoeffs out = avg_state_coeffs(h, h, Ensemble::full);
    CHECK(in.branch == Branch::inside);
    CHECK(out.branch == Branch::outside);
    CHECK(std::abs(in.c1 - out.c1) < 1e-10);
    CHECK(std::abs(in.c2 - out.c2) < 1e-10);
    CHECK(std::abs(in.c3 - out.c3) < 1e-10);
    CHECK(std::abs(in.c4 - out.c4) < 1e-10);
  }
}

TEST_CASE("exchange symmetry under h -> -h") {
  for (double h : {0.1, 0.4, 0.7})
    for (double r : {0.75, 0.8, 0.9, 0.95}) {
      const AvgStateCoeffs f = avg_state_coeffs(h, r, Ensemble::full);
      CHECK(f.c1 == doctest::Approx(c1_outside_full(h, r)).epsilon(1e-13));
      CHECK(f.c2 == doctest::Approx(c1_outside_full(-h, r)).epsilon(1e-13));
      const AvgStateCoeffs s = avg_state_coeffs(h, r, Ensemble::separable);
      CHECK(s.c1 == doctest::Approx(c1_separable(h, r)).epsilon(1e-13));
      CHECK(s.c2 == doctest::Approx(c1_separable(-h, r)).epsilon(1e-13));
    }
}

TEST_CASE("coarse-graining the average state returns the target") {
  for (double h : {0.2, 0.5, 0.8})
    for (int i = 0; i <= 20; ++i) {
      const double r = i / 20.0;
      const ProbVector p = ProbVector::from_h(h);
      const Vec3 b = bloch_vector(apply_cg(avg_state_full(h, r).rho, p)).vec();
      CHECK((b - Vec3(0, 0, r)).norm() < 1e-12);
      if (r >= h) CHECK((bloch_vector(apply_cg(avg_state_separable(h, r).rho, p)).vec() - Vec3(0, 0, r)).norm() <
                        1e-12);
    }
}

TEST_CASE("validity, positivity of the partial transpose and factorization") {
  for (int i = 1; i <= 9; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double h = i / 10.0, r = j / 20.0;
      CHECK_NOTHROW(avg_state_full(h, r));
      if (r < h) continue;
      const AvgState s = avg_state_separable(h, r);
      CHECK(min_pt_eigenvalue(s.rho) > -1e-12);
      CHECK(s.coeffs.rho33() == doctest::Approx(s.coeffs.rho30() * s.coeffs.rho03()).epsilon(1e-12));
    }
}

TEST_CASE("coherence bounds") {
  for (int i = 1; i <= 19; ++i)
    for (int j = 0; j <= 100; ++j) {
      const double h = i / 20.0, r = j / 100.0;
      const auto full = avg_state_diagnostics(avg_state_full(h, r).rho);
      CHECK(std::abs(full.coherence_23) <= (1 - r) / 4 + 1e-14);
      CHECK(std::abs(full.coherence_23.imag()) < 1e-15);
      CHECK(full.symmetry_residuals[0] < 1e-14);
      CHECK(full.symmetry_residuals[1] < 1e-14);
      if (r < h) continue;
      const auto sep = avg_state_diagnostics(avg_state_separable(h, r).rho);
      CHECK(std::abs(sep.coherence_23) <= (1 - r) / 2 + 1e-14);
    }
}

TEST_CASE("general axis") {
  const BlochVector z(0, 0, 0.6);
  CHECK((avg_state_general_axis(z, 0.3, Ensemble::full).matrix() - avg_state_full(0.3, 0.6).rho.matrix()).norm() <
        1e-14);

  const BlochVector x(0.6, 0, 0);
  const DensityMatrix rx = avg_state_general_axis(x, 0.3, Ensemble::full);
  CHECK((bloch_vector(apply_cg(rx, ProbVector::from_h(0.3))).vec() - x.vec()).norm() < 1e-12);

  const BlochVector t = BlochVector::spherical(0.6, 2.1, 4.0);
  for (auto e : {Ensemble::full, Ensemble::separable}) {
    const DensityMatrix rt = avg_state_general_axis(t, 0.3, e);
    const DensityMatrix r0 = avg_state(0.3, 0.6, e).rho;
    CHECK(rt.purity() == doctest::Approx(r0.purity()).epsilon(1e-13));
    CHECK((bloch_vector(apply_cg(rt, ProbVector::from_h(0.3))).vec() - t.vec()).norm() < 1e-12);
  }
}

TEST_CASE("monte carlo average state") {
  struct Point {
    double h, r;
    Ensemble e;
  };
  for (const Point& pt : {Point{0.5, 0.0, Ensemble::full}, Point{0.3, 0.7, Ensemble::full},
                          Point{0.3, 0.7, Ensemble::separable}, Point{0.6, 0.4, Ensemble::full}}) {
    const auto mc = avg_state_mc(BlochVector(0, 0, pt.r), pt.h, pt.e, 100000, {301, 0});
    const CMatrix want = avg_state(pt.h, pt.r, pt.e).rho.matrix();
    CHECK((mc.rho.matrix() - want).norm() <= 3 * mc.frobenius_se);
    const auto comp = pauli_components16(want);
    for (std::size_t k = 1; k < 16; ++k) CHECK(std::abs(mc.pauli[k] - comp[k]) <= 4 * mc.pauli_se[k] + 1e-12);
  }
  CHECK_THROWS_AS(avg_state_mc(BlochVector(0, 0, 0.2), 0.5, Ensemble::separable, 100, {1, 0}), EmptyPreimage);
}

TEST_CASE("monte carlo error shrinks like n^-1/2") {
  const CMatrix want = avg_state_full(0.4, 0.6).rho.matrix();
  std::vector<double> scaled, scaled_se;
  for (std::uint64_t n : {10000ULL, 100000ULL, 1000000ULL}) {
    const auto mc = avg_state_mc(BlochVector(0, 0, 0.6), 0.4, Ensemble::full, n, {307, 0});
    scaled.push_back((mc.rho.matrix() - want).norm() * std::sqrt(static_cast<double>(n)));
    scaled_se.push_back(mc.frobenius_se * std::sqrt(static_cast<double>(n)));
  }
  // sqrt(n) * SE is a property of the ensemble, not of n
  const auto [lo, hi] = std::minmax_element(scaled_se.begin(), scaled_se.end());
  CHECK(*hi / *lo < 1.3);
  for (double s : scaled) CHECK(s < 4 * *hi);
}

TEST_CASE("monte carlo is deterministic") {
  const auto a = avg_state_mc(BlochVector(0.1, 0.2, 0.3), 0.4, Ensemble::full, 5000, {11, 3});
  const auto b = avg_state_mc(BlochVector(0.1, 0.2, 0.3), 0.4, Ensemble::full, 5000, {11, 3});
  CHECK(a.rho.matrix() == b.rho.matrix());
}
