#include "doctest.h"

#include <cmath>
#include <random>

#include "cglab/channel.hpp"
#include "cglab/sampling.hpp"
#include "oracles.hpp"

using namespace cglab;

namespace {

DensityMatrix basis_dm(int n, std::size_t l) { return DensityMatrix::from_pure(PureState::basis(n, l)); }

ProbVector random_p(int n, std::mt19937_64& g) {
  std::exponential_distribution<double> e;
  std::vector<double> w(static_cast<std::size_t>(n));
  double s = 0;
  for (auto& x : w) s += (x = e(g));
  for (auto& x : w) x /= s;
  // renormalize once more so the sum is 1 to rounding
  s = 0;
  for (double x : w) s += x;
  w.back() += 1.0 - s;
  return ProbVector(w);
}

// C[rho] from the single-qubit marginals, built with the loop oracle.
CMatrix cg_oracle(const CMatrix& rho, int n, const std::vector<double>& p) {
  CMatrix out = CMatrix::Zero(2, 2);
  for (int i = 0; i < n; ++i) out += p[static_cast<std::size_t>(i)] * oracle::partial_trace(rho, n, {i});
  return out;
}

}  // namespace

TEST_CASE("prob vector") {
  CHECK_THROWS_AS(ProbVector({0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(ProbVector({1.2, -0.2}), ValidationError);
  const ProbVector p = ProbVector::from_h(0.4);
  CHECK(p[0] == doctest::Approx(0.3));
  CHECK(p[1] == doctest::Approx(0.7));
  const ProbVector q({0.7, 0.3});
  CHECK(q.h() == doctest::Approx(0.4));
  CHECK(q.canonical()[0] == doctest::Approx(0.3));
  CHECK_THROWS_AS(ProbVector({0.2, 0.3, 0.5}).h(), ValidationError);
}

TEST_CASE("fuzzy measurement examples") {
  const DensityMatrix r01 = basis_dm(2, 1);
  CHECK((fuzzy_measure(r01, PermutationMixture::identity(2)).matrix() - r01.matrix()).norm() < 1e-15);

  const PermutationMixture swap({{{1, 0}, 1.0}});
  CHECK((fuzzy_measure(r01, swap).matrix() - basis_dm(2, 2).matrix()).norm() < 1e-15);

  const double p = 0.37;
  const PermutationMixture mix({{{0, 1}, 1 - p}, {{1, 0}, p}});
  const Eigen::Matrix4cd s = oracle::swap_matrix();
  const CMatrix want = (1 - p) * r01.matrix() + p * s * r01.matrix() * s.adjoint();
  CHECK((fuzzy_measure(r01, mix).matrix() - want).norm() < 1e-15);

  CHECK_THROWS_AS(fuzzy_measure(basis_dm(3, 0), swap), ValidationError);
  CHECK_THROWS_AS(PermutationMixture({{{0, 0}, 1.0}}), ValidationError);
  CHECK_THROWS_AS(PermutationMixture({{{0, 1}, 0.5}}), ValidationError);
}

TEST_CASE("fuzzy measurement preserves trace and hermiticity") {
  std::mt19937_64 g(41);
  const PermutationMixture mix({{{0, 1, 2}, 0.2}, {{1, 2, 0}, 0.5}, {{2, 1, 0}, 0.3}});
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho(oracle::random_density(8, g));
    const CMatrix f = fuzzy_measure(rho, mix).matrix();
    CHECK(std::abs(f.trace() - 1.0) < 1e-13);
    CHECK((f - f.adjoint()).norm() < 1e-14);
  }
}

TEST_CASE("non-transposition permutations do not survive the trace") {
  // a 3-cycle and the transposition that bring qubit 1 to position 0
  std::mt19937_64 g(43);
  const DensityMatrix rho(oracle::random_density(8, g));
  const int keep[] = {0};
  const auto a = partial_trace(fuzzy_measure(rho, PermutationMixture({{{2, 0, 1}, 1.0}})), keep);
  const auto b = partial_trace(fuzzy_measure(rho, PermutationMixture({{{1, 0, 2}, 1.0}})), keep);
  CHECK((a.matrix() - b.matrix()).norm() < 1e-14);
}

TEST_CASE("apply_cg examples") {
  std::mt19937_64 g(47);
  const ProbVector p({0.3, 0.7});
  for (int t = 0; t < 10; ++t) {
    const Eigen::Vector2cd n = oracle::random_state(2, g);
    const PureState nn = PureState(n).tensor(PureState(n));
    CHECK((apply_cg(nn, p).matrix() - CMatrix(n * n.adjoint())).norm() < 1e-14);
  }
  CHECK((apply_cg(PureState(oracle::singlet()), p).matrix() - CMatrix::Identity(2, 2) / 2.0).norm() < 1e-15);
  const auto d = apply_cg(PureState::basis(2, 1), p);
  CHECK(d(0, 0).real() == doctest::Approx(0.3));
  CHECK(d(1, 1).real() == doctest::Approx(0.7));
  CHECK(std::abs(d(0, 1)) < 1e-16);
  CHECK_THROWS_AS(apply_cg(PureState::basis(3, 0), p), ValidationError);
}

TEST_CASE("apply_cg matches marginal oracle, swap form and cg_bloch") {
  std::mt19937_64 g(53);
  for (int n = 1; n <= 5; ++n)
    for (int t = 0; t < 200; ++t) {
      const PureState psi(oracle::random_state(1 << n, g));
      const ProbVector p = random_p(n, g);
      const DensityMatrix rho = DensityMatrix::from_pure(psi);
      const DensityMatrix c = apply_cg(psi, p);
      CHECK((c.matrix() - cg_oracle(rho.matrix(), n, p.values())).norm() < 1e-12);
      CHECK((apply_cg(rho, p).matrix() - c.matrix()).norm() < 1e-12);
      CHECK((apply_cg_swap_form(rho, p).matrix() - c.matrix()).norm() < 1e-12);
      CHECK((cg_bloch(psi, p) - bloch_vector(c).vec()).norm() < 1e-12);
      CHECK(std::abs(c.matrix().trace() - 1.0) < 1e-12);
      CHECK(c.eigenvalues().minCoeff() >= -1e-12);
    }
}

TEST_CASE("apply_cg trace and positivity over many draws") {
  Sampler s({99, 0});
  for (int n = 1; n <= 5; ++n)
    for (int t = 0; t < 2000; ++t) {
      const PureState psi = s.haar_state(n);
      const std::vector<double> w = n == 1 ? std::vector<double>{1.0} : s.flat_simplex(n);
      const Vec3 b = cg_bloch(psi, ProbVector(w));
      CHECK(b.norm() <= 1 + 1e-12);  // eigenvalues (1 +- |b|)/2 >= 0
    }
}

TEST_CASE("permutation symmetry of apply_cg") {
  std::mt19937_64 g(59);
  for (int t = 0; t < 50; ++t) {
    const int n = 3;
    const PureState psi(oracle::random_state(8, g));
    const ProbVector p = random_p(n, g);
    // swap qubits 0 and 2 of psi and weights 0 and 2
    const CMatrix perm = permutation_operator({2, 1, 0});
    const PureState swapped(perm * psi.amplitudes());
    const ProbVector q({p[2], p[1], p[0]});
    CHECK((apply_cg(swapped, q).matrix() - apply_cg(psi, p).matrix()).norm() < 1e-12);
  }
}

TEST_CASE("apply_cg_general") {
  std::mt19937_64 g(61);
  const DensityMatrix r2(oracle::random_density(4, g));
  CHECK((apply_cg_general(r2, {0.3, 0.7}, 1).matrix() - apply_cg(r2, ProbVector({0.3, 0.7})).matrix()).norm() <
        1e-14);

  // product state, m = 1: sum p_i |n_i><n_i|
  std::vector<Eigen::Vector2cd> kets;
  CMatrix prod = CMatrix::Ones(1, 1);
  for (int i = 0; i < 3; ++i) {
    kets.push_back(oracle::random_state(2, g));
    prod = oracle::kron(prod, kets.back() * kets.back().adjoint());
  }
  const std::vector<double> w{0.2, 0.3, 0.5};
  CMatrix want = CMatrix::Zero(2, 2);
  for (int i = 0; i < 3; ++i) want += w[static_cast<std::size_t>(i)] * kets[static_cast<std::size_t>(i)] *
                                      kets[static_cast<std::size_t>(i)].adjoint();
  CHECK((apply_cg_general(DensityMatrix(prod), w, 1).matrix() - want).norm() < 1e-13);

  // N = 3, m = 2, uniform
  const DensityMatrix r3(oracle::random_density(8, g));
  CMatrix mean = (oracle::partial_trace(r3.matrix(), 3, {0, 1}) + oracle::partial_trace(r3.matrix(), 3, {0, 2}) +
                  oracle::partial_trace(r3.matrix(), 3, {1, 2})) /
                 3.0;
  const DensityMatrix out = apply_cg_general(r3, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 2);
  CHECK((out.matrix() - mean).norm() < 1e-13);
  CHECK(out.eigenvalues().minCoeff() > -1e-12);

  CHECK(lexicographic_subsets(3, 2) == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});
  CHECK_THROWS_AS(apply_cg_general(r3, {0.5, 0.5}, 2), ValidationError);
}

TEST_CASE("spin expectation") {
  std::mt19937_64 g(67);
  for (int t = 0; t < 100; ++t) {
    const DensityMatrix r(oracle::random_density(2, g));
    CHECK((spin_expectation(r).vec() - bloch_vector(r).vec()).norm() < 1e-14);
  }
  const auto up = spin_expectation(basis_dm(2, 0));
  CHECK(up.z() == doctest::Approx(1.0));
  CHECK(std::abs(up.x()) + std::abs(up.y()) < 1e-15);
  CHECK(spin_expectation(DensityMatrix::from_pure(PureState(oracle::singlet()))).norm() < 1e-15);
}

TEST_CASE("unitary covariance") {
  const PureState k01 = PureState::basis(2, 1);
  const ProbVector p({0.3, 0.7});
  CHECK(check_covariance(k01, p, Eigen::Matrix2cd::Identity()) < 1e-15);
  CHECK(check_covariance(k01, p, oracle::sx()) <= 1e-12);

  // both sides by hand for sigma_x: C[|10>] = diag(0.7, 0.3)
  const auto lhs = apply_cg(apply_local_unitary(k01, oracle::sx()), p);
  CHECK(lhs(0, 0).real() == doctest::Approx(0.7));

  std::mt19937_64 g(71);
  for (int n = 1; n <= 4; ++n) {
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
      const PureState psi(oracle::random_state(1 << n, g));
      worst = std::max(worst, check_covariance(psi, random_p(n, g), oracle::random_unitary(g)));
    }
    CHECK(worst <= 1e-10);
  }
  Eigen::Matrix2cd bad = Eigen::Matrix2cd::Identity();
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(check_covariance(k01, p, bad), ValidationError);
}
