#include "cglab/avg_state.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace cglab {

namespace {

void check_inputs(double h, double r) {
  if (!(h > 0.0 && h <= 1.0)) throw ValidationError("avg_state: h must lie in (0, 1]");
  if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("avg_state: r_ts must lie in [0, 1]");
}

CMatrix kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) { return kron(a, b); }

}  // namespace

CMatrix AvgStateCoeffs::matrix() const {
  const auto& s1 = pauli(1);
  const auto& s2 = pauli(2);
  const auto& s3 = pauli(3);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  CMatrix m = CMatrix::Identity(4, 4) / 4.0;
  m += c1 * kron2(s3, id) + c2 * kron2(id, s3) + c3 * kron2(s3, s3);
  m += c4 * (kron2(s1, s1) + kron2(s2, s2) + kron2(s3, s3));
  return m;
}

AvgStateCoeffs avg_state_coeffs(double h, double r, Ensemble ensemble) {
  check_inputs(h, r);
  AvgStateCoeffs c;
  c.ensemble = ensemble;
  c.branch = r < h ? Branch::inside : Branch::outside;

  if (ensemble == Ensemble::separable) {
    if (r < h)
      throw EmptyPreimage("avg_state_separable: no product state maps to r_ts = " + std::to_string(r) +
                          " < h = " + std::to_string(h));
    if (h == 1.0) {  // only r = 1 remains: |0,0>
      c.c1 = c.c2 = c.c3 = 0.25;
      return c;
    }
    const double r2 = r * r, hh = h * h, den = 8.0 * (1.0 - hh) * r2;
    c.c1 = (r2 - h) / (4.0 * (1.0 - h) * r);
    c.c2 = (r2 + h) / (4.0 * (1.0 + h) * r);
    c.c3 = (r2 * r2 + r2 + hh * (r2 - 3.0)) / den;
    c.c4 = -(1.0 - r2) * (r2 - hh) / den;
    return c;
  }

  if (r < h) {
    const double k = 1.0 / (12.0 * h * (1.0 + h));
    c.c1 = k * (h * h - 1.0) * r;
    c.c2 = k * (1.0 + 4.0 * h + h * h) * r;
    c.c3 = 0.0;
    c.c4 = -k * h * (1.0 - h);
    return c;
  }
  if (h == 1.0 || r == 1.0) {  // coherent state |0,0>
    c.c1 = c.c2 = c.c3 = 0.25;
    c.c4 = 0.0;
    return c;
  }
  const double s = r * r + r + 1.0, hh = h * h;
  const double k = 1.0 / (24.0 * (1.0 - hh) * r * r);
  c.c1 = k * 2.0 * r * (1.0 + h) * (3.0 * r * r - h * s);
  c.c2 = k * 2.0 * r * (1.0 - h) * (3.0 * r * r + h * s);
  c.c3 = k * 3.0 * (1.0 + r) * (r * r - hh);
  c.c4 = -k * (1.0 - r) * (3.0 * r * r - hh * (2.0 * r + 1.0));
  return c;
}

AvgState avg_state(double h, double r, Ensemble ensemble) {
  const AvgStateCoeffs c = avg_state_coeffs(h, r, ensemble);
  return {c, DensityMatrix(c.matrix())};
}

AvgState avg_state_full(double h, double r) { return avg_state(h, r, Ensemble::full); }
AvgState avg_state_separable(double h, double r) { return avg_state(h, r, Ensemble::separable); }

Eigen::Matrix2cd axis_unitary(double theta, double phi) {
  // cos(t/2) I - i sin(t/2) n.sigma with n = (-sin phi, cos phi, 0)
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd u = c * Eigen::Matrix2cd::Identity();
  u -= i * s * (-std::sin(phi) * pauli(1) + std::cos(phi) * pauli(2));
  return u;
}

DensityMatrix avg_state_general_axis(const BlochVector& target, double h, Ensemble ensemble) {
  const AvgState z = avg_state(h, target.norm(), ensemble);
  const Eigen::Matrix2cd u = axis_unitary(target.theta(), target.phi());
  const CMatrix uu = kron(u, u);
  return DensityMatrix(uu * z.rho.matrix() * uu.adjoint());
}

AvgStateDiagnostics avg_state_diagnostics(const DensityMatrix& rho) {
  if (rho.num_qubits() != 2) throw ValidationError("avg_state_diagnostics: expected two qubits");
  AvgStateDiagnostics d;
  d.purity = rho.purity();
  d.coherence_23 = rho(1, 2);
  const int xx[] = {1, 1}, yy[] = {2, 2};
  d.symmetry_residuals[0] = pauli_component(rho.matrix(), yy) - pauli_component(rho.matrix(), xx);
  d.symmetry_residuals[1] = std::abs(rho(1, 2) - rho(2, 1));
  return d;
}

std::array<double, 16> pauli_components16(const CMatrix& rho) {
  std::array<double, 16> out{};
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const int idx[] = {mu, nu};
      out[static_cast<std::size_t>(4 * mu + nu)] = pauli_component(rho, idx);
    }
  return out;
}

AvgStateMC avg_state_mc(const BlochVector& target, double h, Ensemble ensemble, std::uint64_t n, RngSeed seed,
                        int jackknife_blocks) {
  if (n < 2) throw ValidationError("avg_state_mc: need at least 2 samples");
  if (jackknife_blocks < 2 || static_cast<std::uint64_t>(jackknife_blocks) > n)
    throw ValidationError("avg_state_mc: jackknife block count must lie in [2, n]");
  if (ensemble == Ensemble::separable && target.norm() < h)
    throw EmptyPreimage("avg_state_mc: separable preimage of this target is empty");

  const auto blocks = static_cast<std::uint64_t>(jackknife_blocks);
  std::vector<Eigen::Matrix4cd> block_sum(blocks, Eigen::Matrix4cd::Zero());
  std::vector<std::uint64_t> block_n(blocks, 0);

  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  for (std::uint64_t k = 0; k < chunks; ++k) {
    Sampler s({seed.seed, seed.stream_id + k});
    const std::uint64_t begin = k * kChunkSize, end = std::min(n, begin + kChunkSize);
    for (std::uint64_t i = begin; i < end; ++i) {
      const PureState psi = ensemble == Ensemble::full ? s.preimage(target, h) : s.preimage_separable(target, h);
      const Eigen::Vector4cd v = psi.amplitudes();
      const std::uint64_t b = i * blocks / n;
      block_sum[b].noalias() += v * v.adjoint();
      ++block_n[b];
    }
  }

  Eigen::Matrix4cd total = Eigen::Matrix4cd::Zero();
  for (const auto& m : block_sum) total += m;
  const Eigen::Matrix4cd mean = total / static_cast<double>(n);

  // leave-one-block-out means
  const double bf = static_cast<double>(blocks);
  std::vector<Eigen::Matrix4cd> loo(blocks);
  Eigen::Matrix4cd loo_avg = Eigen::Matrix4cd::Zero();
  for (std::uint64_t b = 0; b < blocks; ++b) {
    loo[b] = (total - block_sum[b]) / static_cast<double>(n - block_n[b]);
    loo_avg += loo[b] / bf;
  }
  Eigen::Matrix4d var = Eigen::Matrix4d::Zero();
  std::array<double, 16> pvar{};
  const auto p_avg = pauli_components16(loo_avg);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    var += (loo[b] - loo_avg).cwiseAbs2();
    const auto pb = pauli_components16(loo[b]);
    for (std::size_t j = 0; j < 16; ++j) pvar[j] += (pb[j] - p_avg[j]) * (pb[j] - p_avg[j]);
  }
  const double jf = (bf - 1.0) / bf;

  AvgStateMC out{DensityMatrix::assume_valid(mean / mean.trace().real()), {}, {}, 0.0, n};
  out.pauli = pauli_components16(mean);
  for (std::size_t j = 0; j < 16; ++j) out.pauli_se[j] = std::sqrt(jf * pvar[j]);
  out.frobenius_se = std::sqrt(jf * var.sum());
  return out;
}

}  // namespace cglab
