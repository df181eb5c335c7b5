#include "cglab/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cglab {

namespace {

void check_weights(const std::vector<double>& w, const char* what) {
  if (w.empty()) throw ValidationError(std::string(what) + ": empty weight list");
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) throw ValidationError(std::string(what) + ": weights must be finite and >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ValidationError(std::string(what) + ": weights sum to " + std::to_string(sum) + ", expected 1");
}

void check_permutation(const Permutation& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (int v : perm) {
    if (v < 0 || static_cast<std::size_t>(v) >= perm.size() || seen[static_cast<std::size_t>(v)])
      throw ValidationError("permutation is not a bijection of {0..N-1}");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

void check_unitary(const Eigen::Matrix2cd& u) {
  const double dev = (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  if (!(dev <= 1e-12)) throw ValidationError("matrix is not unitary within 1e-12");
}

}  // namespace

// ---- ProbVector ----

ProbVector::ProbVector(std::vector<double> p) : p_(std::move(p)) {
  check_weights(p_, "ProbVector");
  if (p_.size() > static_cast<std::size_t>(kMaxQubits))
    throw ValidationError("ProbVector: more than " + std::to_string(kMaxQubits) + " entries");
}

ProbVector ProbVector::from_h(double h) {
  if (!(h >= 0.0 && h <= 1.0)) throw ValidationError("h must lie in [0, 1]");
  return ProbVector({(1.0 - h) / 2.0, (1.0 + h) / 2.0});
}

double ProbVector::h() const {
  if (p_.size() != 2) throw ValidationError("h is defined only for N = 2");
  return std::abs(p_[1] - p_[0]);
}

ProbVector ProbVector::canonical() const {
  if (p_.size() != 2 || p_[0] <= p_[1]) return *this;
  return ProbVector({p_[1], p_[0]});
}

// ---- PermutationMixture ----

PermutationMixture::PermutationMixture(std::vector<std::pair<Permutation, double>> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw ValidationError("PermutationMixture: no terms");
  n_ = static_cast<int>(terms_.front().first.size());
  if (n_ < 1 || n_ > kMaxQubits) throw ValidationError("PermutationMixture: bad qubit count");
  std::vector<double> w;
  for (const auto& [perm, weight] : terms_) {
    if (static_cast<int>(perm.size()) != n_)
      throw ValidationError("PermutationMixture: permutations of different lengths");
    check_permutation(perm);
    w.push_back(weight);
  }
  check_weights(w, "PermutationMixture");
}

PermutationMixture PermutationMixture::identity(int n) {
  Permutation id(static_cast<std::size_t>(n));
  std::iota(id.begin(), id.end(), 0);
  return PermutationMixture({{id, 1.0}});
}

PermutationMixture PermutationMixture::swaps_with_first(const ProbVector& p) {
  const int n = static_cast<int>(p.size());
  std::vector<std::pair<Permutation, double>> terms;
  for (int i = 0; i < n; ++i) {
    Permutation s(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), 0);
    std::swap(s[0], s[static_cast<std::size_t>(i)]);
    terms.emplace_back(std::move(s), p[static_cast<std::size_t>(i)]);
  }
  return PermutationMixture(std::move(terms));
}

std::vector<std::size_t> permutation_label_map(const Permutation& perm) {
  check_permutation(perm);
  const int n = static_cast<int>(perm.size());
  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::size_t> out(dim);
  for (std::size_t l = 0; l < dim; ++l) {
    std::size_t t = 0;
    for (int i = 0; i < n; ++i) {
      const std::size_t b = (l >> (n - 1 - i)) & 1u;
      t |= b << (n - 1 - perm[static_cast<std::size_t>(i)]);
    }
    out[l] = t;
  }
  return out;
}

CMatrix permutation_operator(const Permutation& perm) {
  const auto map = permutation_label_map(perm);
  const auto d = static_cast<Eigen::Index>(map.size());
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t l = 0; l < map.size(); ++l) out(static_cast<Eigen::Index>(map[l]), static_cast<Eigen::Index>(l)) = 1.0;
  return out;
}

DensityMatrix fuzzy_measure(const DensityMatrix& rho, const PermutationMixture& mix) {
  if (mix.num_qubits() != rho.num_qubits())
    throw ValidationError("fuzzy_measure: permutation length " + std::to_string(mix.num_qubits()) +
                          " does not match " + std::to_string(rho.num_qubits()) + " qubits");
  const auto d = static_cast<Eigen::Index>(rho.dim());
  CMatrix out = CMatrix::Zero(d, d);
  for (const auto& [perm, w] : mix.terms()) {
    if (w == 0.0) continue;
    const auto map = permutation_label_map(perm);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        out(static_cast<Eigen::Index>(map[static_cast<std::size_t>(i)]),
            static_cast<Eigen::Index>(map[static_cast<std::size_t>(j)])) += w * rho.matrix()(i, j);
  }
  return DensityMatrix::assume_valid(std::move(out));
}

// ---- coarse graining ----

namespace {

// Weighted sum of single-qubit marginals of psi: returns (rho00, rho11, rho01).
Eigen::Matrix2cd marginal_mixture(const CVector& c, int n, const std::vector<double>& p) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  const std::size_t dim = static_cast<std::size_t>(c.size());
  for (int q = 0; q < n; ++q) {
    const double w = p[static_cast<std::size_t>(q)];
    if (w == 0.0) continue;
    const std::size_t mask = std::size_t{1} << (n - 1 - q);
    double d0 = 0.0, d1 = 0.0;
    cplx off = 0.0;
    for (std::size_t l = 0; l < dim; ++l) {
      const cplx a = c(static_cast<Eigen::Index>(l));
      if (l & mask) {
        d1 += std::norm(a);
      } else {
        d0 += std::norm(a);
        off += a * std::conj(c(static_cast<Eigen::Index>(l | mask)));
      }
    }
    out(0, 0) += w * d0;
    out(1, 1) += w * d1;
    out(0, 1) += w * off;
  }
  out(1, 0) = std::conj(out(0, 1));
  return out;
}

}  // namespace

DensityMatrix apply_cg(const PureState& psi, const ProbVector& p) {
  if (static_cast<int>(p.size()) != psi.num_qubits())
    throw ValidationError("apply_cg: " + std::to_string(p.size()) + " weights for " +
                          std::to_string(psi.num_qubits()) + " qubits");
  return DensityMatrix::assume_valid(marginal_mixture(psi.amplitudes(), psi.num_qubits(), p.values()));
}

DensityMatrix apply_cg(const DensityMatrix& rho, const ProbVector& p) {
  if (static_cast<int>(p.size()) != rho.num_qubits())
    throw ValidationError("apply_cg: " + std::to_string(p.size()) + " weights for " +
                          std::to_string(rho.num_qubits()) + " qubits");
  CMatrix out = CMatrix::Zero(2, 2);
  for (int q = 0; q < rho.num_qubits(); ++q) {
    const int keep[] = {q};
    out += p[static_cast<std::size_t>(q)] * partial_trace(rho, keep).matrix();
  }
  return DensityMatrix::assume_valid(std::move(out));
}

Vec3 cg_bloch(const PureState& psi, const ProbVector& p) {
  if (static_cast<int>(p.size()) != psi.num_qubits()) throw ValidationError("cg_bloch: length mismatch");
  const Eigen::Matrix2cd m = marginal_mixture(psi.amplitudes(), psi.num_qubits(), p.values());
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

DensityMatrix apply_cg_swap_form(const DensityMatrix& rho, const ProbVector& p) {
  if (static_cast<int>(p.size()) != rho.num_qubits()) throw ValidationError("apply_cg_swap_form: length mismatch");
  const DensityMatrix f = fuzzy_measure(rho, PermutationMixture::swaps_with_first(p));
  const int keep[] = {0};
  return partial_trace(f, keep);
}

std::vector<std::vector<int>> lexicographic_subsets(int n, int m) {
  if (m < 0 || m > n) throw ValidationError("lexicographic_subsets: bad subset size");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(m));
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    int i = m - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - m + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

DensityMatrix apply_cg_general(const DensityMatrix& rho, const std::vector<double>& weights, int m) {
  const int n = rho.num_qubits();
  if (m < 1 || m > n) throw ValidationError("apply_cg_general: m must lie in [1, N]");
  const auto subsets = lexicographic_subsets(n, m);
  if (weights.size() != subsets.size())
    throw ValidationError("apply_cg_general: expected " + std::to_string(subsets.size()) +
                          " weights (one per " + std::to_string(m) + "-subset), got " +
                          std::to_string(weights.size()));
  check_weights(weights, "apply_cg_general");
  const Eigen::Index d = Eigen::Index{1} << m;
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < subsets.size(); ++k)
    if (weights[k] != 0.0) out += weights[k] * partial_trace(rho, subsets[k]).matrix();
  return DensityMatrix::assume_valid(std::move(out));
}

BlochVector spin_expectation(const DensityMatrix& rho) {
  const int m = rho.num_qubits();
  Vec3 acc = Vec3::Zero();
  for (int q = 0; q < m; ++q) {
    const int keep[] = {q};
    acc += bloch_vector(partial_trace(rho, keep)).vec();
  }
  return BlochVector(acc / m);
}

PureState apply_local_unitary(const PureState& psi, const Eigen::Matrix2cd& u) {
  const int n = psi.num_qubits();
  CVector v = psi.amplitudes();
  const std::size_t dim = psi.dim();
  for (int q = 0; q < n; ++q) {
    const std::size_t mask = std::size_t{1} << (n - 1 - q);
    for (std::size_t l = 0; l < dim; ++l) {
      if (l & mask) continue;
      const auto i0 = static_cast<Eigen::Index>(l), i1 = static_cast<Eigen::Index>(l | mask);
      const cplx a = v(i0), b = v(i1);
      v(i0) = u(0, 0) * a + u(0, 1) * b;
      v(i1) = u(1, 0) * a + u(1, 1) * b;
    }
  }
  return PureState::normalized(std::move(v));
}

double check_covariance(const PureState& psi, const ProbVector& p, const Eigen::Matrix2cd& u) {
  check_unitary(u);
  const CMatrix lhs = apply_cg(apply_local_unitary(psi, u), p).matrix();
  const CMatrix rhs = u * apply_cg(psi, p).matrix() * u.adjoint();
  return (lhs - rhs).norm();
}

}  // namespace cglab
