#include "cglab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cglab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(RngSeed s) {
  std::uint64_t x = s.seed ^ (0xD1B54A32D192ED03ull * (s.stream_id + 1));
  std::vector<std::uint32_t> words;
  for (int i = 0; i < 8; ++i) {
    const std::uint64_t w = splitmix64(x);
    words.push_back(static_cast<std::uint32_t>(w));
    words.push_back(static_cast<std::uint32_t>(w >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

void check_h(double h) {
  if (!(h > 0.0 && h <= 1.0))
    throw ValidationError("h must lie in (0, 1]; h = 0 leaves the preimage coordinates undefined");
}

Eigen::Vector2cd ket_along(const Vec3& n) {
  const BlochVector b(n / n.norm());
  return coherent_ket(b.theta(), b.phi());
}

}  // namespace

PreimageSpheres preimage_spheres(const BlochVector& target, double h) {
  check_h(h);
  const Vec3 r = target.vec();
  const double R = r.norm();
  return {-r * (1.0 - h) / (2.0 * h), r * (1.0 + h) / (2.0 * h), R * (1.0 + h) / (2.0 * h),
          R * (1.0 - h) / (2.0 * h)};
}

Eigen::Matrix3d rotation_to_axis(double theta, double phi) {
  const Vec3 axis(-std::sin(phi), std::cos(phi), 0.0);
  return Eigen::AngleAxisd(theta, axis).toRotationMatrix();
}

Sampler::Sampler(RngSeed seed) : eng_(make_engine(seed)) {}

double Sampler::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Sampler::normal() { return gauss_(eng_); }

Vec3 Sampler::unit_vector() {
  while (true) {
    Vec3 g(normal(), normal(), normal());
    const double n = g.norm();
    if (n > 1e-300) return g / n;
  }
}

PureState Sampler::haar_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits)
    throw ValidationError("haar_state: qubit count must lie in [1, " + std::to_string(kMaxQubits) + "]");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  CVector z(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double re = normal();
    z(i) = cplx(re, normal());
  }
  return PureState::normalized(std::move(z));
}

PureState Sampler::product_state() {
  const Vec3 n1 = unit_vector();
  const Vec3 n2 = unit_vector();
  return PureState::normalized(kron(ket_along(n1), ket_along(n2)));
}

PureState Sampler::preimage_from(const BlochVector& target, double h, double eta, double cos_u,
                                 double v, double gamma) {
  cos_u = std::clamp(cos_u, -1.0, 1.0);
  const double sin_u = std::sqrt(std::max(0.0, 1.0 - cos_u * cos_u));
  const Vec3 m(sin_u * std::cos(v), sin_u * std::sin(v), cos_u);
  const Vec3 k = Vec3::UnitZ();
  const Vec3 a1 = ((1.0 + h) * m - (1.0 - h) * k) / (2.0 * h);
  const Vec3 a2 = ((1.0 - h) * m - (1.0 + h) * k) / (-2.0 * h);
  const Eigen::Matrix3d rot = rotation_to_axis(target.theta(), target.phi());
  const BlochVector b1(rot * a1.normalized());
  const BlochVector b2(rot * a2.normalized());

  SchmidtParams sp;
  sp.eta = eta;
  sp.gamma = gamma;
  sp.theta1 = b1.theta();
  sp.phi1 = b1.phi();
  sp.theta2 = b2.theta();
  sp.phi2 = b2.phi();
  return build_schmidt_state(sp);
}

PureState Sampler::preimage(const BlochVector& target, double h, PreimageCoords* coords) {
  check_h(h);
  const double R = target.norm();
  const bool inside = R <= h;
  const double kappa_f = inside ? 1.0 / h : 1.0 / R;
  const double t = uniform();
  const double kappa = 1.0 + t * (kappa_f - 1.0);
  // 1 - cos u = 2h^2 (kappa^2 - 1)/(1 - h^2), rewritten without the 1 - h^2
  // division so that h = 1 (cos u uniform) needs no special case
  const double q = inside ? 1.0 / (h * (1.0 + h)) : (1.0 - R) / (R * (1.0 - h * h));
  const double cos_u = 1.0 - 2.0 * h * h * t * (kappa + 1.0) * q;
  const double v = kTwoPi * uniform();
  const double gamma = kTwoPi * uniform();
  if (coords) *coords = {kappa, kappa_f, std::acos(std::clamp(cos_u, -1.0, 1.0)), v, gamma, target};
  return preimage_from(target, h, std::acos(std::clamp(kappa * R, 0.0, 1.0)), cos_u, v, gamma);
}

PureState Sampler::preimage_separable(const BlochVector& target, double h, PreimageCoords* coords) {
  check_h(h);
  const double R = target.norm();
  if (R < h)
    throw EmptyPreimage("no product state maps to a target of radius " + std::to_string(R) +
                        " < h = " + std::to_string(h));
  double cos_u;
  if (h == 1.0) {
    cos_u = 1.0 - 2.0 * uniform();  // R = 1: the weight-0 qubit is free
  } else {
    cos_u = 1.0 - 2.0 * h * h * (1.0 - R * R) / (R * R * (1.0 - h * h));
  }
  const double v = kTwoPi * uniform();
  if (coords) *coords = {1.0 / R, 1.0 / R, std::acos(std::clamp(cos_u, -1.0, 1.0)), v, 0.0, target};
  // kappa R = 1 means eta = 0; acos near 1 would turn rounding into ~1e-8 of entanglement
  return preimage_from(target, h, 0.0, cos_u, v, 0.0);
}

std::vector<double> Sampler::flat_simplex(int dim) {
  if (dim < 2) throw ValidationError("flat_simplex: dimension must be at least 2");
  std::vector<double> x(static_cast<std::size_t>(dim));
  double sum = 0.0;
  for (double& e : x) {
    e = -std::log1p(-uniform());
    sum += e;
  }
  for (double& e : x) e /= sum;
  return x;
}

Eigen::Matrix2cd Sampler::haar_unitary() {
  Eigen::Matrix2cd z;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double re = normal();
      z(i, j) = cplx(re, normal());
    }
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  Eigen::Matrix2cd q = qr.householderQ();
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phases of R's diagonal so that Q is Haar distributed
  for (int i = 0; i < 2; ++i) {
    const cplx d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

PureState sample_haar_state(int num_qubits, RngSeed seed) { return Sampler(seed).haar_state(num_qubits); }
PureState sample_product_state(RngSeed seed) { return Sampler(seed).product_state(); }
PureState sample_preimage(const BlochVector& target, double h, RngSeed seed) {
  return Sampler(seed).preimage(target, h);
}
PureState sample_preimage_separable(const BlochVector& target, double h, RngSeed seed) {
  return Sampler(seed).preimage_separable(target, h);
}
std::vector<double> sample_flat_simplex(int dim, RngSeed seed) { return Sampler(seed).flat_simplex(dim); }

}  // namespace cglab
