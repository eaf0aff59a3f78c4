#include "dhlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dhlab/errors.hpp"
#include "dhlab/measure.hpp"

namespace dhlab {
namespace {

constexpr const char* kModule = "norms";
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void apply_gate(NormEstimate& e) {
  e.accepted = e.flags.empty() && e.refinement_ratio >= kRefinementGateLow &&
               e.refinement_ratio <= kRefinementGateHigh;
}

std::string grid_label(const DiskGrid& g) {
  return "disk(" + std::to_string(g.n_r()) + "x" + std::to_string(g.n_theta()) + ")";
}

// Values and derivatives of a series anywhere the closed form (or the
// polynomial) makes sense; the grids below never reach |z| = 1 exactly but
// rounding in phi_a can land on it.
cd value_of(const TaylorSeries& f, cd z) {
  return f.has_closed_form() ? evaluate_closed_form(f.closed_form(), z) : evaluate_series(f, z);
}

Derivative derivative_of(const TaylorSeries& f) {
  return [d = derivative(f)](cd z) { return value_of(d, z); };
}

double mean_power(const std::function<cd(cd)>& f, double r, double p, int n) {
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += std::pow(std::abs(f(std::polar(r, kTwoPi * j / n))), p);
  return sum / n;
}

template <class F>
double golden_max(F&& g, double lo, double hi, int iterations = 80) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double g1 = g(x1), g2 = g(x2);
  double best = std::max({g(lo), g(hi), g1, g2});
  for (int it = 0; it < iterations && hi - lo > 1e-15; ++it) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + inv_phi * (hi - lo);
      g2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - inv_phi * (hi - lo);
      g1 = g(x1);
    }
    best = std::max({best, g1, g2});
  }
  return best;
}

struct ScanResult {
  double sup = 0.0;
  cd argmax{0.0};
};

ScanResult bloch_scan(const Derivative& df, double alpha, const DiskGrid& grid) {
  auto weighted = [&](cd z, double one_minus_r2) { return std::pow(one_minus_r2, alpha) * std::abs(df(z)); };
  ScanResult best{weighted(0.0, 1.0), 0.0};
  const auto radii = grid.radii();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    for (int j = 0; j < grid.n_theta(); ++j) {
      const cd z = std::polar(radii[i], grid.angle(j));
      const double v = weighted(z, 1.0 - radii[i] * radii[i]);
      if (v > best.sup) best = {v, z};
    }
  }
  // Refine along the ray through the argmax: a fine geometric ladder in 1 - r
  // down to 1e-12, then golden-section between the neighbours of the best rung.
  const double theta = std::arg(best.argmax);
  auto along = [&](double h) {  // h = 1 - r
    const double r = 1.0 - h;
    return weighted(std::polar(r, theta), h * (2.0 - h));
  };
  std::vector<double> h = {1.0};
  for (int k = 1; k <= 160; ++k) h.push_back(std::pow(2.0, -k / 4.0));
  std::size_t best_k = 0;
  double best_v = -1.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double v = along(h[k]);
    if (v > best_v) {
      best_v = v;
      best_k = k;
    }
  }
  const double hi = h[best_k == 0 ? 0 : best_k - 1];
  const double lo = h[std::min(best_k + 1, h.size() - 1)];
  const double refined = golden_max(along, lo, hi);
  if (refined > best.sup) {
    best.sup = refined;
    // Argmax location is reported at ladder resolution.
    best.argmax = std::polar(1.0 - h[best_k], theta);
  }
  return best;
}

}  // namespace

DiskGrid::DiskGrid(int n_r, int n_theta) : n_r_(n_r), n_theta_(n_theta) {
  if (n_r < 8 || n_r % 8 != 0) throw PreconditionError(kModule, "DiskGrid", "n_r must be a positive multiple of 8");
  if (n_theta < 4) throw PreconditionError(kModule, "DiskGrid", "n_theta must be >= 4");
  const int panels = n_r / 8;
  // Edges in 1 - rho, so that nodes near the boundary keep full precision.
  std::vector<double> gap = {1.0};
  for (int j = 1; j < panels; ++j) gap.push_back(std::ldexp(1.0, -j));
  gap.push_back(0.0);
  const quad::Rule base = quad::gauss_legendre(8);
  for (int p = 0; p < panels; ++p) {
    const double center = 0.5 * (gap[p] + gap[p + 1]);
    const double half = 0.5 * (gap[p] - gap[p + 1]);
    for (int i = 0; i < 8; ++i) {
      const double one_minus_rho = center - half * base.nodes[i];
      radii_.push_back(std::sqrt(1.0 - one_minus_rho));
      one_minus_r2_.push_back(one_minus_rho);
      ring_weights_.push_back(half * base.weights[i] / n_theta);
    }
  }
}

double DiskGrid::angle(int j) const noexcept { return kTwoPi * j / n_theta_; }

DiskGrid DiskGrid::halved() const {
  if (n_r_ < 16 || n_r_ % 16 != 0) {
    throw PreconditionError(kModule, "DiskGrid::halved", "n_r must be a multiple of 16");
  }
  return DiskGrid(n_r_ / 2, std::max(4, n_theta_ / 2));
}

double mp_mean(const std::function<cd(cd)>& f, double r, double p) {
  if (!(r > 0.0 && r < 1.0)) throw PreconditionError(kModule, "mp_mean", "r must lie in (0,1)");
  if (!(p > 0.0)) throw PreconditionError(kModule, "mp_mean", "p must be positive");
  constexpr int kMaxNodes = 1 << 21;
  int n = 64;
  std::vector<double> history = {mean_power(f, r, p, n)};
  double last_extrapolated = std::numeric_limits<double>::quiet_NaN();
  while (n < kMaxNodes) {
    n *= 2;
    history.push_back(mean_power(f, r, p, n));
    const double cur = std::pow(history.back(), 1.0 / p);
    const double prev = std::pow(history[history.size() - 2], 1.0 / p);
    if (std::abs(cur - prev) <= 1e-8 * std::max(cur, 1e-6)) return cur;
    if (p == 1.0 && history.size() >= 3 && n >= 4096) {
      // Error of the trapezoid rule on a kinked periodic integrand decays
      // algebraically; estimate the order from three levels and extrapolate.
      const double d1 = history[history.size() - 2] - history[history.size() - 3];
      const double d2 = history.back() - history[history.size() - 2];
      if (d1 != 0.0 && d2 != 0.0 && d1 / d2 > 1.0) {
        const double factor = d1 / d2;  // 2^q
        const double extrapolated = history.back() + d2 / (factor - 1.0);
        if (std::abs(extrapolated - last_extrapolated) <= 1e-8 * std::max(extrapolated, 1e-6)) {
          return extrapolated;
        }
        last_extrapolated = extrapolated;
      }
    }
  }
  throw ConvergenceError(kModule, "mp_mean", "angular quadrature did not settle at r = " + format_number(r),
                         std::abs(history.back() - history[history.size() - 2]));
}

double mp_mean(const TaylorSeries& f, double r, double p) {
  return mp_mean([&f](cd z) { return value_of(f, z); }, r, p);
}

NormEstimate hardy_norm(const TaylorSeries& f, double p, std::vector<double> ladder) {
  if (ladder.empty()) {
    ladder = radial_ladder(12);
    ladder.erase(ladder.begin());
  }
  std::sort(ladder.begin(), ladder.end());
  NormEstimate e;
  e.grid = "radii(" + std::to_string(ladder.size()) + ", max " + format_number(ladder.back()) + ")";
  std::vector<double> values;
  for (double r : ladder) values.push_back(mp_mean(f, r, p));
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1] * (1.0 - 1e-9) - 1e-14) {
      e.flags.push_back("M_p not nondecreasing at r = " + format_number(ladder[i]));
      break;
    }
  }
  if (!f.certified_at(ladder.back())) {
    e.flags.push_back("truncation not certified at r = " + format_number(ladder.back()));
  }
  const auto it = std::max_element(values.begin(), values.end());
  e.value = *it;
  e.argmax = ladder[it - values.begin()];
  if (values.size() >= 2 && values[values.size() - 2] > 0.0) {
    e.refinement_ratio = values.back() / values[values.size() - 2];
  }
  apply_gate(e);
  return e;
}

NormEstimate bloch_norm(const Derivative& df, cd value_at_zero, double alpha, const DiskGrid& grid) {
  if (!(alpha > 0.0)) throw PreconditionError(kModule, "bloch_norm", "alpha must be positive");
  const auto fine = bloch_scan(df, alpha, grid);
  const auto coarse = bloch_scan(df, alpha, DiskGrid(std::max(8, grid.n_r() / 2 / 8 * 8), std::max(4, grid.n_theta() / 2)));
  NormEstimate e;
  e.value = std::abs(value_at_zero) + fine.sup;
  e.argmax = fine.argmax;
  e.grid = grid_label(grid);
  const double coarse_value = std::abs(value_at_zero) + coarse.sup;
  e.refinement_ratio = coarse_value > 0.0 ? e.value / coarse_value : 1.0;
  apply_gate(e);
  return e;
}

NormEstimate bloch_norm(const TaylorSeries& f, double alpha, const DiskGrid& grid) {
  return bloch_norm(derivative_of(f), f.coefficient(0), alpha, grid);
}

std::vector<cd> AGrid::points() const {
  std::vector<double> radii;
  for (int k = 0; k <= k_max; ++k) {
    const double r = 1.0 - std::ldexp(1.0, -k);
    if (r <= max_radius) radii.push_back(r);
  }
  for (double r : extra_radii) {
    if (!(r >= 0.0 && r < 1.0)) throw PreconditionError(kModule, "AGrid", "radii must lie in [0,1)");
    radii.push_back(r);
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end(), [](double x, double y) { return std::abs(x - y) < 1e-15; }),
              radii.end());
  std::vector<cd> pts;
  for (double r : radii) {
    if (r == 0.0) {
      pts.push_back(0.0);
      continue;
    }
    for (int j = 0; j < angles; ++j) pts.push_back(std::polar(r, kTwoPi * j / angles));
  }
  return pts;
}

double garsia_integral(const Derivative& df, cd a, const DiskGrid& grid) {
  if (!(std::abs(a) < 1.0)) throw PreconditionError(kModule, "garsia_integral", "|a| must be < 1");
  const double one_minus_a2 = 1.0 - std::norm(a);
  const cd abar = std::conj(a);
  return grid.integrate([&](cd w, double, double one_minus_w2) {
    const cd denom = 1.0 - abar * w;
    const cd z = (a - w) / denom;
    const double jac = one_minus_a2 / std::norm(denom);  // |phi_a'(w)|
    return std::norm(df(z)) * jac * jac * one_minus_w2;
  });
}

NormEstimate bmoa_norm(const Derivative& df, cd value_at_zero, const AGrid& a_grid, const DiskGrid& grid) {
  const auto points = a_grid.points();
  const DiskGrid coarse = grid.halved();
  double sup = 0.0, sup_coarse = 0.0;
  cd argmax{0.0};
  for (const cd& a : points) {
    const double v = garsia_integral(df, a, grid);
    if (v > sup) {
      sup = v;
      argmax = a;
    }
    sup_coarse = std::max(sup_coarse, garsia_integral(df, a, coarse));
  }
  NormEstimate e;
  e.value = std::abs(value_at_zero) + std::sqrt(sup);
  e.argmax = argmax;
  e.grid = grid_label(grid) + ", a-points " + std::to_string(points.size());
  e.refinement_ratio = sup_coarse > 0.0 ? std::sqrt(sup) / std::sqrt(sup_coarse) : 1.0;
  if (!std::isfinite(e.value)) e.flags.push_back("non-finite area integral");
  apply_gate(e);
  return e;
}

NormEstimate bmoa_norm(const TaylorSeries& f, const AGrid& a_grid, const DiskGrid& grid) {
  return bmoa_norm(derivative_of(f), f.coefficient(0), a_grid, grid);
}

BergmanCheck bergman_bound_check(double gamma, double alpha, double beta, cd a, cd b, const DiskGrid& grid) {
  constexpr const char* op = "bergman_bound_check";
  if (!(gamma > -1.0 && alpha > 0.0 && beta > 0.0 && alpha + beta - gamma - 2.0 > 0.0)) {
    throw PreconditionError(kModule, op, "requires gamma > -1, alpha, beta > 0, alpha + beta - gamma - 2 > 0");
  }
  if (!(std::abs(a) < 1.0 && std::abs(b) < 1.0)) throw PreconditionError(kModule, op, "a, b must lie in the disk");
  BergmanCheck out;
  if (alpha < 2.0 + gamma && beta < 2.0 + gamma) {
    out.bound_case = 1;
  } else if (beta < 2.0 + gamma && 2.0 + gamma < alpha) {
    out.bound_case = 2;
  } else {
    throw PreconditionError(kModule, op, "neither alpha, beta < 2+gamma nor beta < 2+gamma < alpha holds");
  }
  // In the second case the (1-|a|^2)-scale peak at z = a is flattened by
  // integrating in w with z = phi_a(w).
  const cd c = out.bound_case == 2 ? a : cd{0.0};
  const double one_minus_c2 = 1.0 - std::norm(c);
  const cd abar = std::conj(a), bbar = std::conj(b), cbar = std::conj(c);
  out.lhs = grid.integrate([&](cd w, double, double one_minus_w2) {
    const cd denom = 1.0 - cbar * w;
    const cd z = (c - w) / denom;
    const double jac = one_minus_c2 / std::norm(denom);
    const double one_minus_z2 = one_minus_c2 * one_minus_w2 / std::norm(denom);
    return std::pow(one_minus_z2, gamma) * std::pow(std::abs(1.0 - abar * z), -alpha) *
           std::pow(std::abs(1.0 - bbar * z), -beta) * jac * jac;
  });
  const double ab = std::abs(1.0 - abar * b);
  if (out.bound_case == 1) {
    out.rhs = std::pow(ab, -(alpha + beta - gamma - 2.0));
  } else {
    out.rhs = std::pow(1.0 - std::norm(a), 2.0 + gamma - alpha) * std::pow(ab, -beta);
  }
  out.ratio = out.lhs / out.rhs;
  return out;
}

double growth_envelope(double alpha, double r) {
  if (!(alpha > 0.0)) throw PreconditionError(kModule, "growth_envelope", "alpha must be positive");
  if (!(r >= 0.0 && r < 1.0)) throw PreconditionError(kModule, "growth_envelope", "r must lie in [0,1)");
  if (alpha < 1.0) return 1.0;
  if (alpha == 1.0) return 1.0 - std::log1p(-r);
  return std::pow((1.0 - r) * (1.0 + r), 1.0 - alpha);
}

double growth_ratio(const TaylorSeries& f, double alpha, double bloch, std::span<const double> radii, int angles) {
  if (!(bloch > 0.0)) throw PreconditionError(kModule, "growth_ratio", "Bloch norm must be positive");
  double worst = 0.0;
  for (double r : radii) {
    const double envelope = growth_envelope(alpha, r);
    for (int j = 0; j < angles; ++j) {
      const cd z = std::polar(r, kTwoPi * j / angles);
      worst = std::max(worst, std::abs(value_of(f, z)) / (bloch * envelope));
    }
  }
  return worst;
}

}  // namespace dhlab
