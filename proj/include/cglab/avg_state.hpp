#pragma once

// Average preimage state of a two-qubit target under C, closed forms for
// the full and product-state ensembles plus a Monte-Carlo estimator.

#include <array>
#include <cstdint>

#include "cglab/laws.hpp"
#include "cglab/sampling.hpp"

namespace cglab {

enum class Branch { inside, outside };

/// rho = I/4 + c1 s3 x I + c2 I x s3 + c3 s3 x s3 + c4 sum_i s_i x s_i for a
/// target on +z. Qubit 0 carries weight (1-h)/2.
struct AvgStateCoeffs {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  Branch branch = Branch::outside;
  Ensemble ensemble = Ensemble::full;

  CMatrix matrix() const;
  /// Nonzero Pauli components tr(rho s_mu x s_nu).
  double rho30() const { return 4.0 * c1; }
  double rho03() const { return 4.0 * c2; }
  double rho33() const { return 4.0 * (c3 + c4); }
  double rho11() const { return 4.0 * c4; }
  double rho22() const { return 4.0 * c4; }
};

struct AvgState {
  AvgStateCoeffs coeffs;
  DensityMatrix rho;
};

/// 0 < h <= 1, 0 <= r_ts <= 1; r_ts = h belongs to the outside branch.
AvgStateCoeffs avg_state_coeffs(double h, double r_ts, Ensemble ensemble);
AvgState avg_state_full(double h, double r_ts);
/// Throws EmptyPreimage when r_ts < h.
AvgState avg_state_separable(double h, double r_ts);
AvgState avg_state(double h, double r_ts, Ensemble ensemble);

/// Closed form for an arbitrary target direction, (U x U) rho_z (U x U)^dagger.
DensityMatrix avg_state_general_axis(const BlochVector& target, double h, Ensemble ensemble);
/// exp(-i theta/2 (-sin phi, cos phi, 0).sigma): rotates +z to (theta, phi).
Eigen::Matrix2cd axis_unitary(double theta, double phi);

struct AvgStateDiagnostics {
  double purity = 0.0;
  /// <01|rho|10>
  cplx coherence_23 = 0.0;
  /// rho_22 - rho_11 (Pauli components) and |<01|rho|10> - <10|rho|01>|.
  std::array<double, 2> symmetry_residuals{};
};

AvgStateDiagnostics avg_state_diagnostics(const DensityMatrix& rho);

struct AvgStateMC {
  DensityMatrix rho;
  /// tr(rho s_mu x s_nu) and block-jackknife standard errors, index 4*mu + nu.
  std::array<double, 16> pauli{};
  std::array<double, 16> pauli_se{};
  /// sqrt(sum of squared jackknife SEs of the matrix entries).
  double frobenius_se = 0.0;
  std::uint64_t n = 0;
};

/// Mean of n sampled preimage density matrices. Draws are split into chunks
/// of fixed size, chunk k uses stream (seed.stream_id + k), so results do
/// not depend on how chunks are scheduled.
AvgStateMC avg_state_mc(const BlochVector& target, double h, Ensemble ensemble, std::uint64_t n, RngSeed seed,
                        int jackknife_blocks = 64);

inline constexpr std::uint64_t kChunkSize = 4096;

/// Pauli components of a two-qubit matrix, index 4*mu + nu.
std::array<double, 16> pauli_components16(const CMatrix& rho);

}  // namespace cglab
