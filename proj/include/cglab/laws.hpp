#pragma once

// Closed-form radial laws of coarse-grained Haar states, preimage volumes,
// the diagonal-element density Psi and the simplex-slice area oracle.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cglab/channel.hpp"

namespace cglab {

enum class Ensemble { full, separable };

Ensemble parse_ensemble(const std::string& s);
std::string to_string(Ensemble e);

/// Two or more weights coincide; the general-N law has a pole there and
/// only a Monte-Carlo estimate is available.
class DegenerateProbabilities : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// r in [0, 1]; values outside give 0 (pdf) or clamp (cdf).
double pdf_p2(double h, double r);
double cdf_p2(double h, double r);
double pdf_p2_separable(double h, double r);
double cdf_p2_separable(double h, double r);

/// Preimage volume of an infinitesimal neighbourhood of volume v_eps at
/// radius r_ts. Constant for r_ts < h in the full ensemble, zero there in
/// the separable one.
double preimage_volume(double h, double r_ts, double v_eps, Ensemble ensemble = Ensemble::full);

/// Preimage volume of the ball of radius eps about the origin, 0 <= h <= eps.
double origin_volume(double h, double eps);

/// Density of the diagonal element a = rho_00 of the coarse-grained state
/// when p = (p1, 1 - p1).
double psi_diagonal(double a, double p1);
double psi_diagonal_derivative(double a, double p1);

struct DerivativeResult {
  double value = 0.0;
  /// A kink lay within the difference step, a one-sided stencil was used.
  bool one_sided = false;
};

/// -r d/dr Psi((1+r)/2) by finite differences. Kinks of psi (in the a
/// variable) switch the stencil to the side away from the kink. The
/// three-point stencils are exact for piecewise quadratics.
DerivativeResult derivative_principle_pdf(const std::function<double(double)>& psi, double r,
                                          std::span<const double> kinks = {}, double step = 1e-4);
/// Same with the analytic derivative of Psi at p1 = (1 - h)/2.
double derivative_principle_p2(double h, double r);

/// General-N radial law, 2 <= N <= 10. The signed-subset-sum formula is a divided
/// difference of (t - r)_+^(2^N - 3) over the knots S_l = sum_i (2 l_i - 1) p_i, so it is
/// evaluated as B-splines (Cox-de Boor). Coinciding subset sums are repeated knots there
/// and need no special case; only pairwise-equal p_i are rejected.
class PnLaw {
public:
  explicit PnLaw(const ProbVector& p);

  double pdf(double r) const;
  double cdf(double r) const;
  /// Positive subset sums S_l in (0, 1), sorted and unique; the law is polynomial between them.
  std::vector<double> breakpoints() const;
  int num_qubits() const { return n_; }

private:
  double segment_mass(double a, double b) const;

  std::vector<double> knots_;   // all 2^N signed sums, ascending, from -1 to 1
  std::vector<double> breaks_;  // 0, interior breakpoints, 1
  std::vector<double> cum_;     // cdf at breaks_
  double scale_ = 0.0;
  int n_ = 0;
};

double pdf_pn(const ProbVector& p, double r);
double cdf_pn(const ProbVector& p, double r);

/// Area of the section of the tetrahedron with vertices (1,1,1)/2,
/// (-1,-1,1)/2, (1,-1,-1)/2, (-1,1,-1)/2 by the plane (p2, 0, p1).y = a - 1/2.
double simplex_slice_area(double p1, double a);

enum class LawFamily { p2, p2_separable, pn };

class RadialLaw {
public:
  static RadialLaw p2(double h);
  static RadialLaw p2_separable(double h);
  static RadialLaw pn(const ProbVector& p);

  double pdf(double r) const;
  double cdf(double r) const;
  /// Points in [0, 1] where the density is not smooth, including 0 and 1.
  std::vector<double> segments() const;
  double mean() const;
  LawFamily family() const { return family_; }
  double h() const { return h_; }

private:
  RadialLaw(LawFamily f, double h);

  LawFamily family_;
  double h_ = 0.0;
  std::optional<PnLaw> pn_;
  std::vector<double> segments_;
};

/// Adaptive Gauss-Kronrod over [a, b] split at the given points; the tolerance is relative
/// to the integral of abs(f) over all of [a, b].
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breaks = {}, double tolerance = 1e-13);

}  // namespace cglab
