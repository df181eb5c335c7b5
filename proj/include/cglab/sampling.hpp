#pragma once

// Seeded generators: Haar pure states, product states, flat simplex points
// and the exact preimage samplers of the two-qubit coarse-graining map.

#include <cstdint>
#include <random>
#include <vector>

#include "cglab/qstate.hpp"

namespace cglab {

struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// Target state has an empty preimage in the requested ensemble.
class EmptyPreimage : public ValidationError {
public:
  using ValidationError::ValidationError;
};

/// Coordinates of one preimage draw. The rotation takes +z to the target
/// direction (Theta, Phi).
struct PreimageCoords {
  double kappa = 1.0;
  double kappa_f = 1.0;
  double u = 0.0;
  double v = 0.0;
  double gamma = 0.0;
  BlochVector target;
};

/// The two spheres on which the reduced Bloch vectors r1 (weight (1-h)/2)
/// and r2 (weight (1+h)/2) of a preimage lie; they touch at the target.
struct PreimageSpheres {
  Vec3 c1 = Vec3::Zero();
  Vec3 c2 = Vec3::Zero();
  double R1 = 0.0;
  double R2 = 0.0;
};

PreimageSpheres preimage_spheres(const BlochVector& target, double h);

/// Rotation by Theta about (-sin Phi, cos Phi, 0); maps +z onto the
/// direction (Theta, Phi).
Eigen::Matrix3d rotation_to_axis(double theta, double phi);

/// One generator stream. Not shareable between threads mid-stream; build one
/// per (seed, stream_id) instead.
class Sampler {
public:
  explicit Sampler(RngSeed seed);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  Vec3 unit_vector();

  PureState haar_state(int num_qubits);
  PureState product_state();
  /// Exact draw from the full preimage of `target` under C with p = ((1-h)/2, (1+h)/2).
  PureState preimage(const BlochVector& target, double h, PreimageCoords* coords = nullptr);
  /// Same restricted to product states; requires h <= |target|.
  PureState preimage_separable(const BlochVector& target, double h, PreimageCoords* coords = nullptr);
  std::vector<double> flat_simplex(int dim);
  /// Haar-distributed 2x2 unitary.
  Eigen::Matrix2cd haar_unitary();

  std::mt19937_64& engine() { return eng_; }

private:
  PureState preimage_from(const BlochVector& target, double h, double eta, double cos_u, double v,
                          double gamma);

  std::mt19937_64 eng_;
  std::normal_distribution<double> gauss_;
};

// One-shot conveniences: a fresh stream per call, so a repeated seed gives
// the identical draw.
PureState sample_haar_state(int num_qubits, RngSeed seed);
PureState sample_product_state(RngSeed seed);
PureState sample_preimage(const BlochVector& target, double h, RngSeed seed);
PureState sample_preimage_separable(const BlochVector& target, double h, RngSeed seed);
std::vector<double> sample_flat_simplex(int dim, RngSeed seed);

}  // namespace cglab
