#include "cglab/qstate.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <numbers>

namespace cglab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx I1(0.0, 1.0);

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Bit of qubit q (0 = most significant) inside a basis label of n qubits.
inline std::size_t bit_of(std::size_t label, int q, int n) {
  return (label >> (n - 1 - q)) & 1u;
}

std::vector<int> checked_keep(std::span<const int> keep, int n) {
  if (keep.empty()) throw ValidationError("partial_trace: keep set is empty");
  std::vector<int> k(keep.begin(), keep.end());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int q : k) {
    if (q < 0 || q >= n)
      throw ValidationError("partial_trace: qubit index " + std::to_string(q) +
                            " out of range [0, " + std::to_string(n - 1) + "]");
    if (seen[static_cast<std::size_t>(q)])
      throw ValidationError("partial_trace: duplicate qubit index " + std::to_string(q));
    seen[static_cast<std::size_t>(q)] = true;
  }
  return k;
}

// Splits a full label into (kept label in keep order, traced label in
// ascending order of the remaining qubits).
struct LabelSplit {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
};

LabelSplit split_labels(const std::vector<int>& keep, int n) {
  std::vector<bool> is_kept(static_cast<std::size_t>(n), false);
  for (int q : keep) is_kept[static_cast<std::size_t>(q)] = true;
  std::vector<int> rest;
  for (int q = 0; q < n; ++q)
    if (!is_kept[static_cast<std::size_t>(q)]) rest.push_back(q);

  const std::size_t dim = std::size_t{1} << n;
  LabelSplit s{std::vector<std::size_t>(dim), std::vector<std::size_t>(dim)};
  for (std::size_t l = 0; l < dim; ++l) {
    std::size_t a = 0, b = 0;
    for (int q : keep) a = (a << 1) | bit_of(l, q, n);
    for (int q : rest) b = (b << 1) | bit_of(l, q, n);
    s.kept[l] = a;
    s.traced[l] = b;
  }
  return s;
}

}  // namespace

int qubits_for_dim(Eigen::Index dim) {
  if (dim < 2) throw ValidationError("dimension must be at least 2");
  int n = 0;
  Eigen::Index d = dim;
  while (d > 1) {
    if (d & 1) throw ValidationError("dimension " + std::to_string(dim) + " is not a power of two");
    d >>= 1;
    ++n;
  }
  if (n > kMaxQubits)
    throw ValidationError("more than " + std::to_string(kMaxQubits) + " qubits requested");
  return n;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// ---- PureState ----

PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
  num_qubits_ = qubits_for_dim(amps_.size());
  const double n2 = amps_.squaredNorm();
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > tol::norm)
    throw ValidationError("PureState: squared norm " + fmt(n2) + " differs from 1");
}

PureState PureState::normalized(CVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("PureState: zero or non-finite vector");
  amplitudes /= n;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(int num_qubits, std::size_t label) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) throw ValidationError("basis: bad qubit count");
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (label >= dim) throw ValidationError("basis: label out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(label)) = 1.0;
  return PureState(std::move(v));
}

PureState PureState::tensor(const PureState& other) const {
  if (num_qubits_ + other.num_qubits_ > kMaxQubits) throw ValidationError("tensor: too many qubits");
  return PureState::normalized(kron(amps_, other.amps_));
}

// ---- DensityMatrix ----

DensityMatrix::DensityMatrix(CMatrix entries, NoPsdCheck) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw ValidationError("DensityMatrix: matrix is not square");
  num_qubits_ = qubits_for_dim(m_.rows());
  if (!m_.allFinite()) throw ValidationError("DensityMatrix: non-finite entries");
  const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol::hermitian_repair)
    throw ValidationError("DensityMatrix: Hermiticity violated by " + fmt(herm));
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > tol::trace)
    throw ValidationError("DensityMatrix: trace " + fmt(tr) + " differs from 1");
}

DensityMatrix::DensityMatrix(CMatrix entries) : DensityMatrix(std::move(entries), NoPsdCheck{}) {
  const double lo = eigenvalues().minCoeff();
  if (lo < -tol::psd) throw ValidationError("DensityMatrix: negative eigenvalue " + fmt(lo));
}

DensityMatrix DensityMatrix::assume_valid(CMatrix entries) {
  return DensityMatrix(std::move(entries), NoPsdCheck{});
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint(), NoPsdCheck{});
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) throw ValidationError("maximally_mixed: bad qubit count");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d), NoPsdCheck{});
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return m_.cwiseAbs2().sum();
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
  if (num_qubits_ + other.num_qubits_ > kMaxQubits) throw ValidationError("tensor: too many qubits");
  return DensityMatrix(kron(m_, other.m_), NoPsdCheck{});
}

CMatrix DensityMatrix::partial_transpose(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_) throw ValidationError("partial_transpose: qubit out of range");
  const std::size_t mask = std::size_t{1} << (num_qubits_ - 1 - qubit);
  const auto d = static_cast<std::size_t>(m_.rows());
  CMatrix out(m_.rows(), m_.cols());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      // exchange the chosen qubit's bit between row and column labels
      std::size_t i2 = (i & ~mask) | (j & mask);
      std::size_t j2 = (j & ~mask) | (i & mask);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m_(static_cast<Eigen::Index>(i2), static_cast<Eigen::Index>(j2));
    }
  return out;
}

// ---- BlochVector ----

BlochVector::BlochVector(double x, double y, double z) : BlochVector(Vec3(x, y, z)) {}

BlochVector::BlochVector(const Vec3& r) : r_(r) {
  if (!r_.allFinite()) throw ValidationError("BlochVector: non-finite component");
  if (r_.norm() > 1.0 + tol::bloch)
    throw ValidationError("BlochVector: norm " + fmt(r_.norm()) + " exceeds 1");
}

BlochVector BlochVector::spherical(double radius, double theta, double phi) {
  if (radius < 0.0) throw ValidationError("BlochVector: negative radius");
  return BlochVector(radius * Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                                   std::cos(theta)));
}

double BlochVector::theta() const {
  const double n = r_.norm();
  if (n == 0.0) return 0.0;
  return std::atan2(std::hypot(r_.x(), r_.y()), r_.z());
}

double BlochVector::phi() const {
  if (r_.x() == 0.0 && r_.y() == 0.0) return 0.0;
  double p = std::atan2(r_.y(), r_.x());
  if (p < 0.0) p += kTwoPi;
  return p;
}

DensityMatrix BlochVector::to_density() const {
  CMatrix m(2, 2);
  m << 0.5 * (1.0 + r_.z()), 0.5 * cplx(r_.x(), -r_.y()), 0.5 * cplx(r_.x(), r_.y()),
      0.5 * (1.0 - r_.z());
  return DensityMatrix::assume_valid(std::move(m));
}

// ---- SchmidtParams ----

void SchmidtParams::validate() const {
  constexpr double slack = 1e-12;
  auto in = [](double v, double lo, double hi) { return std::isfinite(v) && v >= lo - slack && v <= hi + slack; };
  const double pi = std::numbers::pi;
  if (!in(eta, 0.0, pi)) throw ValidationError("SchmidtParams: eta outside [0, pi]");
  if (!in(gamma, 0.0, kTwoPi)) throw ValidationError("SchmidtParams: gamma outside [0, 2pi)");
  if (!in(theta1, 0.0, pi) || !in(theta2, 0.0, pi))
    throw ValidationError("SchmidtParams: polar angle outside [0, pi]");
  if (!in(phi1, 0.0, kTwoPi) || !in(phi2, 0.0, kTwoPi))
    throw ValidationError("SchmidtParams: azimuth outside [0, 2pi)");
}

// ---- Pauli algebra ----

const Eigen::Matrix2cd& pauli(int mu) {
  static const std::array<Eigen::Matrix2cd, 4> mats = [] {
    std::array<Eigen::Matrix2cd, 4> m;
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, -I1, I1, 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  if (mu < 0 || mu > 3) throw ValidationError("pauli index must be 0..3");
  return mats[static_cast<std::size_t>(mu)];
}

CMatrix pauli_string(std::span<const int> mus) {
  if (mus.empty()) throw ValidationError("pauli_string: empty index");
  CMatrix out = pauli(mus[0]);
  for (std::size_t k = 1; k < mus.size(); ++k) out = kron(out, pauli(mus[k]));
  return out;
}

double pauli_component(const CMatrix& rho, std::span<const int> mus) {
  const int n = qubits_for_dim(rho.rows());
  if (static_cast<int>(mus.size()) != n) throw ValidationError("pauli_component: index length mismatch");
  // sigma_nu is monomial: column k has one entry, at row k ^ flip.
  std::size_t flip = 0;
  for (int q = 0; q < n; ++q) {
    int mu = mus[static_cast<std::size_t>(q)];
    if (mu < 0 || mu > 3) throw ValidationError("pauli index must be 0..3");
    if (mu == 1 || mu == 2) flip |= std::size_t{1} << (n - 1 - q);
  }
  cplx acc = 0.0;
  const auto d = static_cast<std::size_t>(rho.rows());
  for (std::size_t k = 0; k < d; ++k) {
    cplx ph = 1.0;
    for (int q = 0; q < n; ++q) {
      const int mu = mus[static_cast<std::size_t>(q)];
      const std::size_t b = bit_of(k, q, n);
      if (mu == 2) ph *= b ? -I1 : I1;
      else if (mu == 3 && b) ph = -ph;
    }
    // tr(rho P) = sum_k rho(k, k^flip) P(k^flip, k)
    acc += rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ flip)) * ph;
  }
  return acc.real();
}

PauliCoefficients pauli_coefficients(const DensityMatrix& rho) {
  const int m = rho.num_qubits();
  if (m > 6) throw ValidationError("pauli_coefficients: more than 6 qubits (4^m terms)");
  PauliCoefficients out;
  std::vector<int> nu(static_cast<std::size_t>(m), 0);
  const std::size_t total = std::size_t{1} << (2 * m);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t t = idx;
    for (int q = m - 1; q >= 0; --q) {
      nu[static_cast<std::size_t>(q)] = static_cast<int>(t & 3u);
      t >>= 2;
    }
    out[nu] = pauli_component(rho.matrix(), nu);
  }
  return out;
}

CMatrix from_pauli_coefficients(const PauliCoefficients& coeffs, int num_qubits) {
  if (num_qubits < 1 || num_qubits > 6) throw ValidationError("from_pauli_coefficients: bad qubit count");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  CMatrix out = CMatrix::Zero(d, d);
  for (const auto& [nu, c] : coeffs) {
    if (static_cast<int>(nu.size()) != num_qubits)
      throw ValidationError("from_pauli_coefficients: index length mismatch");
    if (c != 0.0) out += c * pauli_string(nu);
  }
  return out / static_cast<double>(d);
}

BlochVector bloch_vector(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw ValidationError("bloch_vector: expected a single-qubit state");
  const cplx r01 = rho(0, 1);
  Vec3 r(2.0 * r01.real(), -2.0 * r01.imag(), (rho(0, 0) - rho(1, 1)).real());
  // clip rounding excess so the invariant holds for pure inputs
  const double n = r.norm();
  if (n > 1.0 && n <= 1.0 + 1e-9) r /= n;
  return BlochVector(r);
}

// ---- partial traces ----

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.num_qubits();
  const std::vector<int> k = checked_keep(keep, n);
  const LabelSplit s = split_labels(k, n);
  const Eigen::Index dk = Eigen::Index{1} << k.size();
  CMatrix out = CMatrix::Zero(dk, dk);
  const auto d = static_cast<std::size_t>(rho.dim());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (s.traced[i] == s.traced[j])
        out(static_cast<Eigen::Index>(s.kept[i]), static_cast<Eigen::Index>(s.kept[j])) +=
            rho(i, j);
  return DensityMatrix::assume_valid(std::move(out));
}

DensityMatrix reduced_state(const PureState& psi, std::span<const int> keep) {
  const int n = psi.num_qubits();
  const std::vector<int> k = checked_keep(keep, n);
  const LabelSplit s = split_labels(k, n);
  const Eigen::Index dk = Eigen::Index{1} << k.size();
  const Eigen::Index dt = Eigen::Index{1} << (n - static_cast<int>(k.size()));
  // reshape into (kept x traced) then rho = M M^dagger
  CMatrix m = CMatrix::Zero(dk, dt);
  for (std::size_t l = 0; l < psi.dim(); ++l)
    m(static_cast<Eigen::Index>(s.kept[l]), static_cast<Eigen::Index>(s.traced[l])) = psi[l];
  return DensityMatrix::assume_valid(m * m.adjoint());
}

// ---- Schmidt form ----

Eigen::Vector2cd coherent_ket(double theta, double phi) {
  return {std::cos(theta / 2) * std::exp(-I1 * (phi / 2)), std::sin(theta / 2) * std::exp(I1 * (phi / 2))};
}

Eigen::Vector2cd anti_coherent_ket(double theta, double phi) {
  return {std::sin(theta / 2) * std::exp(-I1 * (phi / 2)), -std::cos(theta / 2) * std::exp(I1 * (phi / 2))};
}

PureState build_schmidt_state(const SchmidtParams& p) {
  p.validate();
  const Eigen::Vector2cd n1 = coherent_ket(p.theta1, p.phi1), m1 = anti_coherent_ket(p.theta1, p.phi1);
  const Eigen::Vector2cd n2 = coherent_ket(p.theta2, p.phi2), m2 = anti_coherent_ket(p.theta2, p.phi2);
  CVector v = std::cos(p.eta / 2) * kron(n1, n2) +
              std::sin(p.eta / 2) * std::exp(I1 * p.gamma) * kron(m1, m2);
  return PureState::normalized(std::move(v));
}

namespace {

void angles_of(const Eigen::Vector2cd& ket, double& theta, double& phi) {
  // Bloch direction of a normalized single-qubit ket
  const cplx a = ket(0), b = ket(1);
  const Vec3 r(2.0 * (std::conj(a) * b).real(), 2.0 * (std::conj(a) * b).imag(),
               std::norm(a) - std::norm(b));
  const BlochVector bv(r / r.norm());
  theta = bv.theta();
  phi = bv.phi();
}

double wrap_2pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

}  // namespace

SchmidtParams extract_schmidt(const PureState& psi) {
  if (psi.num_qubits() != 2) throw ValidationError("extract_schmidt: expected two qubits");
  Eigen::Matrix2cd m;
  m << psi[0], psi[1], psi[2], psi[3];
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU);
  const double s0 = svd.singularValues()(0), s1 = svd.singularValues()(1);

  SchmidtParams out;
  out.eta = 2.0 * std::atan2(s1, s0);

  Eigen::Vector2cd u0 = svd.matrixU().col(0);
  if (s0 - s1 < 1e-12) u0 = Eigen::Vector2cd(1.0, 0.0);  // degenerate: n1 = +z
  angles_of(u0, out.theta1, out.phi1);

  const Eigen::Vector2cd n1 = coherent_ket(out.theta1, out.phi1);
  const Eigen::Vector2cd w = n1.adjoint() * m;  // (<n1| x I) psi, as a row
  angles_of(w / w.norm(), out.theta2, out.phi2);

  const CVector nn = kron(n1, coherent_ket(out.theta2, out.phi2));
  const CVector mm = kron(anti_coherent_ket(out.theta1, out.phi1), anti_coherent_ket(out.theta2, out.phi2));
  const cplx c_nn = nn.dot(psi.amplitudes());
  const cplx c_mm = mm.dot(psi.amplitudes());
  // remove the global phase that makes the |n1,n2> coefficient real positive
  const cplx rel = c_mm * std::conj(c_nn);
  out.gamma = (std::abs(rel) < 1e-14) ? 0.0 : wrap_2pi(std::arg(rel));
  return out;
}

double concurrence(const PureState& psi) {
  if (psi.num_qubits() != 2) throw ValidationError("concurrence: expected two qubits");
  return 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
}

double overlap(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw ValidationError("overlap: dimension mismatch");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

bool equal_up_to_phase(const PureState& a, const PureState& b, double tolerance) {
  return overlap(a, b) >= 1.0 - tolerance;
}

}  // namespace cglab
