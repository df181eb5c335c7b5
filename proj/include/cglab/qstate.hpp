#pragma once

// Qubit state substrate: pure states, density matrices, partial traces,
// Pauli expansions, Bloch vectors and the two-qubit Schmidt parametrization.
//
// Basis convention: for an N-qubit register the basis label l = l_0 l_1 ...
// l_{N-1} is read left to right, qubit 0 is the most significant bit.
// Qubit indices in this API are 0-based.

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cglab {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;

/// Raised when a value violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace tol {
inline constexpr double norm = 1e-12;
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double psd = 1e-10;
inline constexpr double bloch = 1e-12;
// Hermiticity violations up to this size are repaired by symmetrization.
inline constexpr double hermitian_repair = 1e-9;
}  // namespace tol

inline constexpr int kMaxQubits = 12;

class PureState {
public:
  /// Takes amplitudes that are already unit-norm (within 1e-12).
  explicit PureState(CVector amplitudes);

  /// Rescales an arbitrary nonzero vector to unit norm.
  static PureState normalized(CVector amplitudes);
  static PureState basis(int num_qubits, std::size_t label);

  const CVector& amplitudes() const { return amps_; }
  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  PureState tensor(const PureState& other) const;

private:
  CVector amps_;
  int num_qubits_ = 0;
};

class DensityMatrix {
public:
  /// Validates Hermiticity, unit trace and positivity. Small Hermiticity
  /// defects (<= 1e-9) are symmetrized away, larger ones are errors.
  explicit DensityMatrix(CMatrix entries);

  static DensityMatrix from_pure(const PureState& psi);
  /// For matrices that are valid by construction (convex mixtures, partial
  /// traces). Symmetrizes and checks shape and trace, skips the eigen check.
  static DensityMatrix assume_valid(CMatrix entries);
  static DensityMatrix maximally_mixed(int num_qubits);

  const CMatrix& matrix() const { return m_; }
  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  cplx operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  double purity() const;
  Eigen::VectorXd eigenvalues() const;
  DensityMatrix tensor(const DensityMatrix& other) const;
  /// Partial transpose on qubit `qubit`.
  CMatrix partial_transpose(int qubit) const;

private:
  struct NoPsdCheck {};
  DensityMatrix(CMatrix entries, NoPsdCheck);

  CMatrix m_;
  int num_qubits_ = 0;
};

class BlochVector {
public:
  BlochVector() = default;
  BlochVector(double x, double y, double z);
  explicit BlochVector(const Vec3& r);

  /// Radius / polar / azimuth constructor.
  static BlochVector spherical(double radius, double theta, double phi);

  const Vec3& vec() const { return r_; }
  double x() const { return r_.x(); }
  double y() const { return r_.y(); }
  double z() const { return r_.z(); }
  double norm() const { return r_.norm(); }
  /// Polar angle of the direction; 0 for the origin.
  double theta() const;
  double phi() const;

  DensityMatrix to_density() const;

private:
  Vec3 r_ = Vec3::Zero();
};

/// Two-qubit Schmidt-form coordinates:
/// |psi> = cos(eta/2)|n1,n2> + sin(eta/2) e^{i gamma} |-n1,-n2>.
struct SchmidtParams {
  double eta = 0.0;
  double gamma = 0.0;
  double theta1 = 0.0;
  double phi1 = 0.0;
  double theta2 = 0.0;
  double phi2 = 0.0;

  void validate() const;
};

/// Number of qubits for a dimension 2^n; throws unless dim is a power of two
/// in [2, 2^kMaxQubits].
int qubits_for_dim(Eigen::Index dim);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Pauli matrices, index 0..3 = I, X, Y, Z.
const Eigen::Matrix2cd& pauli(int mu);
CMatrix pauli_string(std::span<const int> mus);

/// Spin-1/2 coherent ket along (theta, phi):
/// cos(theta/2) e^{-i phi/2}|0> + sin(theta/2) e^{i phi/2}|1>.
Eigen::Vector2cd coherent_ket(double theta, double phi);
/// The orthogonal partner |-n> with the sign convention of the Schmidt form.
Eigen::Vector2cd anti_coherent_ket(double theta, double phi);

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
/// Reduced state of a pure state on `keep`, without forming the full matrix.
DensityMatrix reduced_state(const PureState& psi, std::span<const int> keep);

/// Pauli components rho_nu = tr(rho sigma_nu); key digits are nu_0 ... nu_{m-1}.
using PauliCoefficients = std::map<std::vector<int>, double>;
PauliCoefficients pauli_coefficients(const DensityMatrix& rho);
CMatrix from_pauli_coefficients(const PauliCoefficients& coeffs, int num_qubits);
double pauli_component(const CMatrix& rho, std::span<const int> mus);

BlochVector bloch_vector(const DensityMatrix& rho);

PureState build_schmidt_state(const SchmidtParams& params);
/// Inverse of build_schmidt_state with eta restricted to [0, pi/2]. At
/// eta = pi/2 the local bases are not unique; n1 = +z is then chosen.
SchmidtParams extract_schmidt(const PureState& psi);

double concurrence(const PureState& psi);

/// |<a|b>|; equals 1 for states that agree up to global phase.
double overlap(const PureState& a, const PureState& b);
bool equal_up_to_phase(const PureState& a, const PureState& b, double tolerance = 1e-10);

}  // namespace cglab
