#include "cglab/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>

namespace cglab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0, 1), got " + std::to_string(eps));
}

}  // namespace

std::vector<double> coarse_grained_radii(const ProbVector& p, std::uint64_t n, RngSeed seed, Ensemble ensemble) {
  const int nq = static_cast<int>(p.size());
  if (nq < 1 || nq > kMaxQubits) throw ValidationError("coarse_grained_radii: bad qubit count");
  if (ensemble == Ensemble::separable && nq != 2)
    throw ValidationError("coarse_grained_radii: the separable ensemble is defined for N = 2 only");
  std::vector<double> out;
  out.reserve(n);
  const std::uint64_t chunks = (n + kRadiiChunk - 1) / kRadiiChunk;
  for (std::uint64_t k = 0; k < chunks; ++k) {
    Sampler s({seed.seed, seed.stream_id + k});
    const std::uint64_t m = std::min(kRadiiChunk, n - k * kRadiiChunk);
    for (std::uint64_t i = 0; i < m; ++i) {
      const PureState psi = ensemble == Ensemble::full ? s.haar_state(nq) : s.product_state();
      out.push_back(std::min(1.0, cg_bloch(psi, p).norm()));
    }
  }
  return out;
}

double estimate_shell_volume(std::span<const double> samples, double r_ts, double eps) {
  if (samples.empty()) throw ValidationError("estimate_shell_volume: empty sample list");
  if (!(eps > 0.0)) throw ValidationError("estimate_shell_volume: eps must be positive");
  std::uint64_t hits = 0;
  for (double r : samples)
    if (std::abs(r - r_ts) <= eps / 2) ++hits;
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double shell_volume(double c, double eps, ShellNorm norm) {
  if (norm == ShellNorm::leading_order) return 4.0 * kPi * c * c * eps;
  const double lo = std::max(0.0, c - eps / 2), hi = std::min(1.0, c + eps / 2);
  if (hi <= lo) return 0.0;
  return 4.0 * kPi / 3.0 * (hi * hi * hi - lo * lo * lo);
}

EmpiricalPDF empirical_radial_pdf(std::span<const double> samples, double eps, ShellNorm norm) {
  if (samples.empty()) throw ValidationError("empirical_radial_pdf: empty sample list");
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("empirical_radial_pdf: bin width must lie in (0, 1]");
  const auto nb = static_cast<std::size_t>(std::ceil(1.0 / eps - 1e-9));
  if (nb > 10'000'000) throw ValidationError("empirical_radial_pdf: bin width too small");

  EmpiricalPDF e;
  e.n_total = samples.size();
  e.counts.assign(nb, 0);
  for (std::size_t k = 0; k < nb; ++k) {
    e.bin_edges.push_back(std::min(1.0, static_cast<double>(k) * eps));
    e.centers.push_back(eps / 2 + static_cast<double>(k) * eps);
  }
  e.bin_edges.push_back(1.0);
  for (double r : samples) {
    if (r < 0.0 || r > 1.0) throw ValidationError("empirical_radial_pdf: radius outside [0, 1]");
    auto k = static_cast<std::size_t>(r / eps);
    if (k >= nb) k = nb - 1;
    ++e.counts[k];
  }
  for (std::size_t k = 0; k < nb; ++k) {
    const double c = e.centers[k];
    const double vol = shell_volume(c, eps, norm);
    if (!(vol > 0.0)) throw ValidationError("empirical_radial_pdf: degenerate bin");
    const double frac = static_cast<double>(e.counts[k]) / static_cast<double>(e.n_total);
    e.density.push_back(frac * 4.0 * kPi * c * c / vol);
  }
  return e;
}

std::vector<double> shell_density_profile(std::span<const double> sorted, std::span<const double> centers, double eps,
                                          ShellNorm norm) {
  if (sorted.empty()) throw ValidationError("shell_density_profile: empty sample list");
  std::vector<double> out;
  out.reserve(centers.size());
  const double n = static_cast<double>(sorted.size());
  for (double c : centers) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), c - eps / 2);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), c + eps / 2);
    const double frac = static_cast<double>(hi - lo) / n;
    const double vol = shell_volume(c, eps, norm);
    out.push_back(vol > 0.0 ? frac * 4.0 * kPi * c * c / vol : 0.0);
  }
  return out;
}

double fit_model_pdf(FitModel model, double p, double r) {
  if (!(p > 0.0 && p <= 0.5)) throw ValidationError("fit_model_pdf: p must lie in (0, 1/2]");
  const double h = 1.0 - 2.0 * p;
  if (h < 1e-9) return (r >= 0.0 && r <= 1.0) ? 6.0 * r * (1.0 - r) : 0.0;
  if (model == FitModel::p2) return pdf_p2(h, r);
  return pdf_pn(ProbVector({p, 1.0 - p}), r);
}

FitResult fit_p(std::span<const double> samples, double eps, const FitOptions& opt) {
  check_eps(eps);
  if (samples.size() < 2) throw ValidationError("fit_p: need at least 2 samples");
  if (opt.grid_points < 2 || opt.scan_points < 3) throw ValidationError("fit_p: bad grid or scan size");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> centers;
  if (opt.placement == BinPlacement::fixed_grid) {
    for (int k = 0; k < opt.grid_points; ++k) centers.push_back((k + 0.5) / opt.grid_points);
  } else {
    for (const double c : empirical_radial_pdf(sorted, eps, opt.norm).centers) centers.push_back(c);
  }
  const std::vector<double> dens = shell_density_profile(sorted, centers, eps, opt.norm);

  auto objective = [&](double p) {
    double s = 0.0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const double d = dens[k] - fit_model_pdf(opt.model, p, centers[k]);
      s += d * d;
    }
    return s;
  };

  constexpr double lo = 1e-3, hi = 0.5;
  const int m = opt.scan_points;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    const double p = lo + (hi - lo) * i / (m - 1);
    const double v = objective(p);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = lo + (hi - lo) * std::max(0, best - 1) / (m - 1);
  const double b = lo + (hi - lo) * std::min(m - 1, best + 1) / (m - 1);
  auto [p_star, v_star] = boost::math::tools::brent_find_minima(objective, a, b, 40);

  FitResult r;
  // keep the scan point if the refinement did not improve on it
  if (v_star <= best_val) {
    r.p_fit = p_star;
    r.residual_sum = v_star;
  } else {
    r.p_fit = lo + (hi - lo) * best / (m - 1);
    r.residual_sum = best_val;
  }
  r.eps_used = eps;
  r.n_used = samples.size();
  return r;
}

namespace {

ProbVector test_weights(double p_test) {
  if (!(p_test > 0.0 && p_test <= 0.5)) throw ValidationError("p_test must lie in (0, 0.5]");
  return ProbVector({p_test, 1.0 - p_test});
}

}  // namespace

FitResult fit_pipeline(double p_test, std::uint64_t n, double eps, RngSeed seed, const FitOptions& options) {
  const auto radii = coarse_grained_radii(test_weights(p_test), n, seed);
  FitResult r = fit_p(radii, eps, options);
  r.seed = seed;
  return r;
}

SweepResult sweep_eps(double p_test, std::uint64_t n, std::span<const double> eps_grid, RngSeed seed,
                      const FitOptions& options) {
  if (eps_grid.empty()) throw ValidationError("sweep_eps: empty eps grid");
  for (double e : eps_grid) check_eps(e);
  const auto radii = coarse_grained_radii(test_weights(p_test), n, seed);
  SweepResult out;
  for (double e : eps_grid) {
    const FitResult f = fit_p(radii, e, options);
    out.rows.push_back({e, f.p_fit, std::abs(f.p_fit - p_test), f.residual_sum});
  }
  for (std::size_t i = 1; i < out.rows.size(); ++i)
    if (out.rows[i].abs_error < out.rows[out.best].abs_error) out.best = i;
  return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ValidationError("ks_statistic: empty sample list");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value(std::uint64_t n, double alpha) {
  if (n == 0 || !(alpha > 0.0 && alpha < 1.0)) throw ValidationError("ks_critical_value: bad arguments");
  return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

}  // namespace cglab
