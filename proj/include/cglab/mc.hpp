#pragma once

// Monte-Carlo statistics of coarse-grained radii: shell-volume estimates,
// empirical radial densities, least-squares inference of p and eps sweeps.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cglab/laws.hpp"
#include "cglab/sampling.hpp"

namespace cglab {

/// Radii |r| of C[psi] for n draws. Full ensemble: Haar states on p.size()
/// qubits. Separable (N = 2 only): uniform product states. Draws come in
/// chunks of kRadiiChunk, chunk k on stream seed.stream_id + k.
std::vector<double> coarse_grained_radii(const ProbVector& p, std::uint64_t n, RngSeed seed,
                                         Ensemble ensemble = Ensemble::full);

inline constexpr std::uint64_t kRadiiChunk = 4096;

/// Fraction of samples with |r - r_ts| <= eps/2.
double estimate_shell_volume(std::span<const double> samples, double r_ts, double eps);

enum class ShellNorm {
  /// (4 pi / 3)(hi^3 - lo^3) with the shell clipped to [0, 1]
  exact,
  /// 4 pi r^2 eps
  leading_order,
};

double shell_volume(double r_center, double eps, ShellNorm norm);

struct EmpiricalPDF {
  std::vector<double> bin_edges;  // size = centers.size() + 1, clipped to [0, 1]
  std::vector<double> centers;
  std::vector<std::uint64_t> counts;
  std::uint64_t n_total = 0;
  /// fraction * 4 pi c^2 / shell volume
  std::vector<double> density;
};

/// Bins of width eps centred at eps/2 + k eps; the last bin is clipped at 1.
EmpiricalPDF empirical_radial_pdf(std::span<const double> samples, double eps, ShellNorm norm = ShellNorm::exact);

/// Shell estimate of the radial density at each centre, shell width eps.
std::vector<double> shell_density_profile(std::span<const double> sorted_samples, std::span<const double> centers,
                                          double eps, ShellNorm norm = ShellNorm::exact);

enum class FitModel { p2, pn };
enum class BinPlacement {
  /// fixed centres (k + 1/2)/grid_points, independent of eps
  fixed_grid,
  /// centres eps/2 + k eps
  eps_spaced,
};

struct FitOptions {
  FitModel model = FitModel::p2;
  BinPlacement placement = BinPlacement::fixed_grid;
  ShellNorm norm = ShellNorm::exact;
  int grid_points = 100;
  int scan_points = 250;
};

struct FitResult {
  double p_fit = 0.0;
  double residual_sum = 0.0;
  double eps_used = 0.0;
  std::uint64_t n_used = 0;
  RngSeed seed;
};

/// Model density at r for p = (p, 1 - p), p in (0, 1/2]; p = 1/2 is the
/// h -> 0 limit 6 r (1 - r).
double fit_model_pdf(FitModel model, double p, double r);

/// Least squares of shell densities against the model over p in [1e-3, 1/2]:
/// coarse scan, then Brent refinement around the best scan point.
FitResult fit_p(std::span<const double> samples, double eps, const FitOptions& options = {});

/// Draws n two-qubit Haar states, coarse-grains with p = (p_test, 1 - p_test) and fits.
FitResult fit_pipeline(double p_test, std::uint64_t n, double eps, RngSeed seed, const FitOptions& options = {});

struct SweepRow {
  double eps = 0.0;
  double p_fit = 0.0;
  double abs_error = 0.0;
  double residual_sum = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t best = 0;
};

/// One fit per eps on a single shared sample set.
SweepResult sweep_eps(double p_test, std::uint64_t n, std::span<const double> eps_grid, RngSeed seed,
                      const FitOptions& options = {});

/// sup |F_n - F| of the sample against a continuous CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Asymptotic critical value of the one-sample KS distance, sqrt(-ln(alpha/2)/2)/sqrt(n).
double ks_critical_value(std::uint64_t n, double alpha = 0.01);

}  // namespace cglab
