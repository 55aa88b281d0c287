#include "bwave/wave.hpp"

#include <algorithm>
#include <cmath>

#include "bwave/rearrange.hpp"

namespace bwave {

namespace {

struct SideFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
};

SideFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  SideFit fit;
  fit.count = xs.size();
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    fit.sum_sq += r * r;
  }
  return fit;
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "unknown";
}

bool WaveReport::all_pass() const {
  return std::none_of(flags.begin(), flags.end(),
                      [](const auto& f) { return f.second == CheckStatus::Fail; });
}

Grid wave_grid(const MinimizerResult& r, double a, double c, std::size_t n,
               double decay_lengths) {
  if (!(r.lambda < 0.0)) throw std::invalid_argument("wave grid needs lambda < 0");
  const double alpha = linear_decay_rate(a, c, 1.0 / r.lambda);
  return Grid(n, 2.0 * decay_lengths / alpha);
}

Wave build_wave(const MinimizerResult& r, const Grid& target) {
  if (!(r.lambda < 0.0)) throw std::invalid_argument("build_wave needs lambda < 0");
  const double dilation = std::sqrt(-r.lambda);
  const double amplitude = -1.0 / r.lambda;
  Wave w{.phi = amplitude * resample(r.pair.f, target, dilation),
         .psi = amplitude * resample(r.pair.g, target, dilation)};
  w.omega = 1.0 / r.lambda;
  w.source_mu = r.mu;
  w.source_lambda = r.lambda;
  return w;
}

double stationary_residual(const Wave& w, double a, double c) {
  const Field phi_xx = derivative(w.phi, 2);
  const Field psi_xx = derivative(w.psi, 2);
  double r1 = 0.0, r2 = 0.0;
  for (std::size_t j = 0; j < w.phi.size(); ++j) {
    const double phi = w.phi[j];
    const double psi = w.psi[j];
    r1 = std::max(r1, std::abs(a * phi_xx[j] + phi - w.omega * psi + phi * psi));
    r2 = std::max(r2, std::abs(c * psi_xx[j] + psi - w.omega * phi + 0.5 * phi * phi));
  }
  return std::max(r1, r2);
}

DecayFit decay_rate(const Field& u, double window_lo, double window_hi, double floor) {
  const Grid& g = u.grid();
  const double peak = u.max_abs();
  const double half = 0.5 * g.length();
  if (!(peak > 0.0)) throw InsufficientTail("decay fit: field is identically zero");

  std::vector<double> xr, yr, xl, yl;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    const double ax = std::abs(x);
    const double v = std::abs(u[j]);
    if (ax < window_lo * half || ax > window_hi * half || !(v > floor * peak)) continue;
    (x > 0.0 ? xr : xl).push_back(ax);
    (x > 0.0 ? yr : yl).push_back(std::log(v));
  }
  constexpr std::size_t kMinSamples = 8;
  if (xr.size() < kMinSamples || xl.size() < kMinSamples) {
    throw InsufficientTail("decay fit: fewer than 8 usable tail samples");
  }
  const SideFit right = fit_line(xr, yr);
  const SideFit left = fit_line(xl, yl);
  DecayFit out;
  out.alpha = -0.5 * (right.slope + left.slope);
  out.samples = right.count + left.count;
  out.fit_residual = std::sqrt((right.sum_sq + left.sum_sq) / static_cast<double>(out.samples));
  return out;
}

Wave mirror(const Wave& w) {
  Wave m{.phi = -w.phi, .psi = w.psi};
  m.omega = -w.omega;
  m.source_mu = w.source_mu;
  m.source_lambda = -w.source_lambda;
  return m;
}

Wave widen(const Wave& w, double factor) {
  if (!(factor >= 1.0)) throw std::invalid_argument("widen factor must be >= 1");
  const Grid& g = w.phi.grid();
  if (factor == 1.0) return w;
  const Grid target(g.size(), factor * g.length());
  return Wave{resample(w.phi, target, 1.0), resample(w.psi, target, 1.0), w.omega, w.source_mu,
              w.source_lambda};
}

double spectral_widen_factor(const Wave& w, double floor) {
  const Grid& g = w.phi.grid();
  const auto sp = spectrum(w.phi);
  const auto ss = spectrum(w.psi);
  double top = 0.0;
  for (std::size_t m = 0; m < sp.size(); ++m) top = std::max({top, std::abs(sp[m]), std::abs(ss[m])});
  if (top == 0.0) return 1.0;
  std::size_t last = 1;
  for (std::size_t m = 0; m < sp.size(); ++m) {
    if (std::max(std::abs(sp[m]), std::abs(ss[m])) > floor * top) last = std::max<std::size_t>(m, 1);
  }
  const double band = static_cast<double>(g.size()) / 3.0;
  return std::max(1.0, band / (1.2 * static_cast<double>(last)));
}

WaveReport verify(const Wave& w, double a, double c, double c1) {
  WaveReport rep;
  const Grid& g = w.phi.grid();
  const double s_coef = std::abs(a) + std::abs(c);
  rep.peak = std::max(w.phi.max_abs(), w.psi.max_abs());
  rep.stationary_residual = stationary_residual(w, a, c);
  rep.l2_size = l2_norm_sq(w.phi) + l2_norm_sq(w.psi);
  rep.l2_bound_ratio = rep.l2_size / std::sqrt(s_coef);
  rep.speed = w.omega;

  const bool has_source = w.source_lambda != 0.0 && w.source_mu > 0.0;
  if (has_source) rep.l2_identity = w.source_mu / std::pow(std::abs(w.source_lambda), 1.5);
  if (w.source_mu > 0.0 && c1 > 0.0) {
    rep.speed_bound = std::cbrt(s_coef) * std::pow(w.source_mu, -2.0 / 3.0) / c1;
  }

  CheckStatus decay_phi = CheckStatus::Fail;
  CheckStatus decay_psi = CheckStatus::Fail;
  try {
    const DecayFit fit = decay_rate(w.phi);
    rep.decay_alpha_phi = fit.alpha;
    rep.decay_fit_residual_phi = fit.fit_residual;
    decay_phi = check(fit.alpha > 0.0 && fit.fit_residual < 0.05);
  } catch (const InsufficientTail&) {
    rep.insufficient_tail = true;
  }
  try {
    const DecayFit fit = decay_rate(w.psi);
    rep.decay_alpha_psi = fit.alpha;
    rep.decay_fit_residual_psi = fit.fit_residual;
    decay_psi = check(fit.alpha > 0.0 && fit.fit_residual < 0.05);
  } catch (const InsufficientTail&) {
    rep.insufficient_tail = true;
  }

  double tail = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (std::abs(g.x(j)) >= 0.95 * 0.5 * g.length()) {
      tail = std::max({tail, std::abs(w.phi[j]), std::abs(w.psi[j])});
    }
  }
  rep.boundary_leak = rep.peak > 0.0 ? tail / rep.peak : 0.0;
  rep.shape_defect = std::max(symmetric_decreasing_defect(w.phi), symmetric_decreasing_defect(-w.psi));

  const double sign_tol = 1e-10 * rep.peak;
  const bool signs = w.phi.min() >= -sign_tol && w.psi.max() <= sign_tol;

  rep.flags.emplace_back("omega_negative", check(w.omega < 0.0));
  rep.flags.emplace_back("stationary_residual", check(rep.stationary_residual <= 1e-6 * rep.peak));
  rep.flags.emplace_back("l2_identity",
                         has_source ? check(std::abs(rep.l2_size - rep.l2_identity) <=
                                            1e-8 * rep.l2_identity)
                                    : CheckStatus::Skipped);
  rep.flags.emplace_back("speed_bound", rep.speed_bound > 0.0
                                            ? check(std::abs(w.omega) <= rep.speed_bound)
                                            : CheckStatus::Skipped);
  rep.flags.emplace_back("sign", check(signs));
  rep.flags.emplace_back("shape", check(rep.shape_defect <= 1e-10 * rep.peak));
  rep.flags.emplace_back("decay_phi", decay_phi);
  rep.flags.emplace_back("decay_psi", decay_psi);
  rep.flags.emplace_back("boundary_leak", check(rep.boundary_leak < 1e-8));
  return rep;
}

}  // namespace bwave
