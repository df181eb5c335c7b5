#include "cglab/laws.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cglab {

namespace {

void check_h_open(double h, const char* what) {
  if (!(h > 0.0 && h <= 1.0))
    throw ValidationError(std::string(what) + ": h must lie in (0, 1], got " + std::to_string(h));
}

void check_p1(double p1) {
  if (!(p1 > 0.0 && p1 < 1.0)) throw ValidationError("psi_diagonal: p1 must lie in (0, 1)");
}

}  // namespace

Ensemble parse_ensemble(const std::string& s) {
  if (s == "full") return Ensemble::full;
  if (s == "separable") return Ensemble::separable;
  throw ValidationError("ensemble must be 'full' or 'separable', got '" + s + "'");
}

std::string to_string(Ensemble e) { return e == Ensemble::full ? "full" : "separable"; }

// ---- two-qubit radial laws ----

double pdf_p2(double h, double r) {
  check_h_open(h, "pdf_p2");
  if (r < 0.0 || r > 1.0) return 0.0;
  if (r < h || h == 1.0) return 6.0 * r * r / (h * (1.0 + h));
  return 6.0 * r * (1.0 - r) / ((1.0 - h) * (1.0 + h));
}

double cdf_p2(double h, double r) {
  check_h_open(h, "cdf_p2");
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return 1.0;
  if (r < h) return 2.0 * r * r * r / (h * (1.0 + h));
  const double inner = 2.0 * h * h / (1.0 + h);
  return inner + 6.0 / ((1.0 - h) * (1.0 + h)) * ((r * r - h * h) / 2.0 - (r * r * r - h * h * h) / 3.0);
}

double pdf_p2_separable(double h, double r) {
  if (!(h >= 0.0 && h < 1.0)) throw ValidationError("pdf_p2_separable: h must lie in [0, 1)");
  if (r < h || r > 1.0) return 0.0;
  return 2.0 * r / ((1.0 - h) * (1.0 + h));
}

double cdf_p2_separable(double h, double r) {
  if (!(h >= 0.0 && h < 1.0)) throw ValidationError("cdf_p2_separable: h must lie in [0, 1)");
  if (r <= h) return 0.0;
  if (r >= 1.0) return 1.0;
  return (r * r - h * h) / ((1.0 - h) * (1.0 + h));
}

double preimage_volume(double h, double r_ts, double v_eps, Ensemble ensemble) {
  if (!(v_eps > 0.0)) throw ValidationError("preimage_volume: v_eps must be positive");
  if (!(r_ts >= 0.0 && r_ts <= 1.0)) throw ValidationError("preimage_volume: r_ts must lie in [0, 1]");
  constexpr double pi = 3.14159265358979323846;
  if (ensemble == Ensemble::separable) {
    if (!(h >= 0.0 && h < 1.0)) throw ValidationError("preimage_volume: separable ensemble needs h in [0, 1)");
    if (r_ts < h || r_ts == 0.0) return 0.0;
    return v_eps / (2.0 * pi * (1.0 - h * h)) / r_ts;
  }
  if (h == 0.0)
    throw ValidationError("preimage_volume: h = 0 has no infinitesimal limit at the origin; use origin_volume");
  check_h_open(h, "preimage_volume");
  const double pre = 3.0 * v_eps / (2.0 * pi * (1.0 + h));
  if (r_ts < h) return pre / h;
  if (r_ts >= 1.0) return 0.0;
  return pre * (1.0 - r_ts) / ((1.0 - h) * r_ts);
}

double origin_volume(double h, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("origin_volume: eps must lie in (0, 1]");
  if (!(h >= 0.0)) throw ValidationError("origin_volume: h must be >= 0");
  if (h > eps) throw ValidationError("origin_volume: requires h <= eps");
  if (h == 1.0) return 1.0;
  return (eps * eps * (3.0 - 2.0 * eps) - h * h) / (1.0 - h * h);
}

// ---- diagonal-element law ----

double psi_diagonal(double a, double p1) {
  check_p1(p1);
  if (a < 0.0 || a > 1.0) return 0.0;
  const double p2 = 1.0 - p1;
  const double lo = std::min(p1, p2), hi = std::max(p1, p2);
  // (p2-p1)(1-a)^2 + (p1-a)_+^2 - (p2-a)_+^2 divided by (p2-p1), per region
  double d;
  if (a <= lo) d = 1.0 - 2.0 * a;
  else if (a < hi) d = (hi - a) * (hi - a) / (hi - lo);
  else d = 0.0;
  return 3.0 / (p1 * p2) * ((1.0 - a) * (1.0 - a) - d);
}

double psi_diagonal_derivative(double a, double p1) {
  check_p1(p1);
  if (a < 0.0 || a > 1.0) return 0.0;
  const double p2 = 1.0 - p1;
  const double lo = std::min(p1, p2), hi = std::max(p1, p2);
  double dd;
  if (a <= lo) dd = -2.0;
  else if (a < hi) dd = -2.0 * (hi - a) / (hi - lo);
  else dd = 0.0;
  return 3.0 / (p1 * p2) * (-2.0 * (1.0 - a) - dd);
}

DerivativeResult derivative_principle_pdf(const std::function<double(double)>& psi, double r,
                                          std::span<const double> kinks, double step) {
  if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("derivative_principle_pdf: r must lie in [0, 1]");
  if (!(step > 0.0)) throw ValidationError("derivative_principle_pdf: step must be positive");
  const double a = 0.5 * (1.0 + r);
  const double d = step;

  bool kink_left = a - d < 0.0, kink_right = a + d > 1.0;
  for (double k : kinks) {
    if (k > a - 2 * d && k <= a) kink_left = true;  // kink at a itself: take the right derivative
    if (k > a && k < a + 2 * d) kink_right = true;
  }

  DerivativeResult out;
  double deriv;
  if (!kink_left && !kink_right) {
    deriv = (psi(a + d) - psi(a - d)) / (2 * d);
  } else if (!kink_right) {
    deriv = (-3.0 * psi(a) + 4.0 * psi(a + d) - psi(a + 2 * d)) / (2 * d);
    out.one_sided = true;
  } else {
    deriv = (3.0 * psi(a) - 4.0 * psi(a - d) + psi(a - 2 * d)) / (2 * d);
    out.one_sided = true;
  }
  // d/dr Psi((1+r)/2) = Psi'(a)/2
  out.value = -r * 0.5 * deriv;
  return out;
}

double derivative_principle_p2(double h, double r) {
  check_h_open(h, "derivative_principle_p2");
  if (h == 1.0) throw ValidationError("derivative_principle_p2: h = 1 gives p1 = 0");
  return -r * 0.5 * psi_diagonal_derivative(0.5 * (1.0 + r), 0.5 * (1.0 - h));
}

// ---- general N ----

PnLaw::PnLaw(const ProbVector& p) {
  n_ = static_cast<int>(p.size());
  if (n_ < 2 || n_ > 10) throw ValidationError("pdf_pn: N must lie in [2, 10]");
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (std::abs(p[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(j)]) < 1e-9)
        throw DegenerateProbabilities("pdf_pn: p_" + std::to_string(i) + " and p_" + std::to_string(j) +
                                      " coincide; the closed form has a pole there, use the Monte-Carlo estimate");

  // S_l = sum_i (2 l_i - 1) p_i over every l, including l = 0 (S = -1). Each Theta-weighted
  // term of the closed form over its product of l'.p~ factors is 2^(2^N - 1) times the
  // divided-difference weight 1 / prod_{m != l} (S_l - S_m).
  const std::size_t count = std::size_t{1} << n_;
  knots_.reserve(count);
  for (std::size_t l = 0; l < count; ++l) {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
      s += (((l >> (n_ - 1 - i)) & 1u) ? 1.0 : -1.0) * p[static_cast<std::size_t>(i)];
    knots_.push_back(s);
  }
  std::sort(knots_.begin(), knots_.end());
  knots_.front() = -1.0;
  knots_.back() = 1.0;
  const double k = static_cast<double>(count);
  scale_ = 2.0 * (k - 1.0) * (k - 2.0);

  breaks_.push_back(0.0);
  for (double t : knots_)
    if (t > 0.0 && t < 1.0 && t != breaks_.back()) breaks_.push_back(t);
  breaks_.push_back(1.0);
  cum_.assign(breaks_.size(), 0.0);
  for (std::size_t i = 1; i < breaks_.size(); ++i) cum_[i] = cum_[i - 1] + segment_mass(breaks_[i - 1], breaks_[i]);
}

double PnLaw::pdf(double r) const {
  if (r < 0.0 || r >= 1.0) return 0.0;
  // [t_0..t_m](t - r)_+^(m-2) = (B_1(r)/(t_m - t_1) - B_0(r)/(t_{m-1} - t_0)) / (t_m - t_0), where
  // B_0, B_1 are the two order m-1 B-splines on these m+1 knots
  const std::size_t m = knots_.size() - 1;
  const auto& t = knots_;
  std::vector<double> b(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) b[i] = (t[i] <= r && r < t[i + 1]) ? 1.0 : 0.0;
  for (std::size_t order = 2; order <= m - 1; ++order) {
    const std::size_t len = m + 1 - order;
    for (std::size_t i = 0; i < len; ++i) {
      double v = 0.0;
      const double dl = t[i + order - 1] - t[i];
      const double dr = t[i + order] - t[i + 1];
      if (dl > 0.0) v += (r - t[i]) / dl * b[i];
      if (dr > 0.0) v += (t[i + order] - r) / dr * b[i + 1];
      b[i] = v;
    }
  }
  const double dd = (b[1] / (t[m] - t[1]) - b[0] / (t[m - 1] - t[0])) / (t[m] - t[0]);
  return std::max(0.0, scale_ * r * dd);
}

double PnLaw::segment_mass(double a, double b) const {
  if (b <= a) return 0.0;
  // polynomial of degree 2^N - 2 on each segment: one 61-point Kronrod pass is exact up to
  // N = 6 (subdividing there only chases rounding on low-mass segments); adaptive above
  const unsigned depth = n_ <= 6 ? 0 : 15;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate([this](double x) { return pdf(x); }, a, b,
                                                                       depth, 1e-12);
}

double PnLaw::cdf(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return 1.0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return std::min(1.0, cum_[i] + segment_mass(breaks_[i], r));
}

std::vector<double> PnLaw::breakpoints() const { return {breaks_.begin() + 1, breaks_.end() - 1}; }

double pdf_pn(const ProbVector& p, double r) { return PnLaw(p).pdf(r); }
double cdf_pn(const ProbVector& p, double r) { return PnLaw(p).cdf(r); }

// ---- simplex slice ----

double simplex_slice_area(double p1, double a) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw ValidationError("simplex_slice_area: p1 must lie in [0, 1]");
  if (a < 0.0 || a > 1.0) return 0.0;
  const double p2 = 1.0 - p1;
  const Vec3 verts[4] = {Vec3(0.5, 0.5, 0.5), Vec3(-0.5, -0.5, 0.5), Vec3(0.5, -0.5, -0.5), Vec3(-0.5, 0.5, -0.5)};
  const Vec3 n(p2, 0.0, p1);
  const double c = a - 0.5;

  std::vector<Vec3> pts;
  double dist[4];
  for (int i = 0; i < 4; ++i) dist[i] = n.dot(verts[i]) - c;
  for (int i = 0; i < 4; ++i) {
    if (dist[i] == 0.0) pts.push_back(verts[i]);
    for (int j = i + 1; j < 4; ++j)
      if ((dist[i] < 0.0 && dist[j] > 0.0) || (dist[i] > 0.0 && dist[j] < 0.0)) {
        const double t = dist[i] / (dist[i] - dist[j]);
        pts.push_back(verts[i] + t * (verts[j] - verts[i]));
      }
  }
  if (pts.size() < 3) return 0.0;

  // order around the centroid inside the plane, then shoelace
  const Vec3 nn = n.normalized();
  const Vec3 e1 = (std::abs(nn.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(nn).normalized();
  const Vec3 e2 = nn.cross(e1);
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& q : pts) centroid += q;
  centroid /= static_cast<double>(pts.size());
  std::vector<std::pair<double, double>> uv;
  for (const Vec3& q : pts) uv.emplace_back((q - centroid).dot(e1), (q - centroid).dot(e2));
  std::sort(uv.begin(), uv.end(), [](const auto& x, const auto& y) {
    return std::atan2(x.second, x.first) < std::atan2(y.second, y.first);
  });
  double area2 = 0.0;
  for (std::size_t i = 0; i < uv.size(); ++i) {
    const auto& [x0, y0] = uv[i];
    const auto& [x1, y1] = uv[(i + 1) % uv.size()];
    area2 += x0 * y1 - x1 * y0;
  }
  return 0.5 * std::abs(area2);
}

// ---- RadialLaw ----

RadialLaw::RadialLaw(LawFamily f, double h) : family_(f), h_(h) {}

RadialLaw RadialLaw::p2(double h) {
  check_h_open(h, "RadialLaw::p2");
  RadialLaw law(LawFamily::p2, h);
  law.segments_ = (h < 1.0) ? std::vector<double>{0.0, h, 1.0} : std::vector<double>{0.0, 1.0};
  return law;
}

RadialLaw RadialLaw::p2_separable(double h) {
  if (!(h >= 0.0 && h < 1.0)) throw ValidationError("RadialLaw::p2_separable: h must lie in [0, 1)");
  RadialLaw law(LawFamily::p2_separable, h);
  law.segments_ = (h > 0.0) ? std::vector<double>{0.0, h, 1.0} : std::vector<double>{0.0, 1.0};
  return law;
}

RadialLaw RadialLaw::pn(const ProbVector& p) {
  RadialLaw law(LawFamily::pn, p.size() == 2 ? p.h() : 0.0);
  law.pn_.emplace(p);
  law.segments_ = {0.0};
  for (double b : law.pn_->breakpoints())
    if (b > 0.0 && b < 1.0) law.segments_.push_back(b);
  law.segments_.push_back(1.0);
  return law;
}

double RadialLaw::pdf(double r) const {
  switch (family_) {
    case LawFamily::p2: return pdf_p2(h_, r);
    case LawFamily::p2_separable: return pdf_p2_separable(h_, r);
    case LawFamily::pn: return pn_->pdf(r);
  }
  return 0.0;
}

double RadialLaw::cdf(double r) const {
  switch (family_) {
    case LawFamily::p2: return cdf_p2(h_, r);
    case LawFamily::p2_separable: return cdf_p2_separable(h_, r);
    case LawFamily::pn: return pn_->cdf(r);
  }
  return 0.0;
}

std::vector<double> RadialLaw::segments() const { return segments_; }

double RadialLaw::mean() const {
  return integrate_piecewise([this](double r) { return r * pdf(r); }, 0.0, 1.0, segments_);
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breaks, double tolerance) {
  std::vector<double> cuts{a};
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
  // one pass per segment, then refine only where the error matters against the whole
  // integral; a relative target on a low-mass segment would just chase rounding
  const std::size_t m = cuts.size() - 1;
  std::vector<double> val(m), err(m), l1(m);
  double l1_total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    val[i] = gk::integrate(f, cuts[i], cuts[i + 1], 0, tolerance, &err[i], &l1[i]);
    l1_total += l1[i];
  }
  const double target = tolerance * l1_total;
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (err[i] > target && l1[i] > 0.0)
      val[i] = gk::integrate(f, cuts[i], cuts[i + 1], 15, std::min(0.1, target / l1[i]));
    total += val[i];
  }
  return total;
}

}  // namespace cglab
