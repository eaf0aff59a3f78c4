#pragma once

// Norm estimators on the disk: integral means M_p(r, f), Hardy, Bloch-type,
// the Garsia-type area norm behind BMOA, and a check of the two-point
// Bergman kernel bound.

#include <functional>
#include <string>
#include <vector>

#include "dhlab/function_space.hpp"

namespace dhlab {

/// Tensor grid for (1/pi) dx dy: Gauss-Legendre in rho = |z|^2 on graded
/// panels [0,1/2], [1/2,3/4], ..., [1-2^{-(P-1)}, 1] with 8 nodes each
/// (P = n_r / 8), times the trapezoid rule in theta.
class DiskGrid {
 public:
  DiskGrid(int n_r = 96, int n_theta = 256);

  int n_r() const noexcept { return n_r_; }
  int n_theta() const noexcept { return n_theta_; }
  std::span<const double> radii() const noexcept { return radii_; }
  /// Weight of each node on ring i (already divided by n_theta).
  std::span<const double> ring_weights() const noexcept { return ring_weights_; }
  double angle(int j) const noexcept;

  /// Same layout with half the nodes in each direction; requires n_r >= 16.
  DiskGrid halved() const;

  /// sum_{i,j} w_i g(r_i e^{i theta_j}, r_i, 1 - r_i^2)
  template <class G>
  double integrate(G&& g) const {
    double total = 0.0;
    for (std::size_t i = 0; i < radii_.size(); ++i) {
      double ring = 0.0;
      for (int j = 0; j < n_theta_; ++j) ring += g(std::polar(radii_[i], angle(j)), radii_[i], one_minus_r2_[i]);
      total += ring * ring_weights_[i];
    }
    return total;
  }

 private:
  int n_r_;
  int n_theta_;
  std::vector<double> radii_;
  std::vector<double> one_minus_r2_;  // 1 - r^2, kept exact near the boundary
  std::vector<double> ring_weights_;
};

struct NormEstimate {
  double value = 0.0;
  cd argmax{0.0};               // Moebius parameter, or point of the disk, attaining the sup
  double refinement_ratio = 1.0;  // value / value on the coarser grid
  bool accepted = true;           // refinement_ratio within [0.9, 1.1] and no flags
  std::vector<std::string> flags;
  std::string grid;  // description of the grid the value was computed on
};

inline constexpr double kRefinementGateLow = 0.9;
inline constexpr double kRefinementGateHigh = 1.1;

using Derivative = std::function<cd(cd)>;

/// (1/2pi int |f(r e^{i theta})|^p d theta)^{1/p} with n_theta doubling until
/// two successive values agree to 1e-8; p = 1 falls back to Richardson
/// extrapolation when the kink in |f| slows convergence.
double mp_mean(const TaylorSeries& f, double r, double p);
double mp_mean(const std::function<cd(cd)>& f, double r, double p);

/// sup of M_p over the ladder (default 1 - 2^{-k}, k = 1..12).
NormEstimate hardy_norm(const TaylorSeries& f, double p, std::vector<double> ladder = {});

/// |f(0)| + sup (1-|z|^2)^alpha |f'(z)|, grid scan plus golden-section refinement in r.
NormEstimate bloch_norm(const TaylorSeries& f, double alpha, const DiskGrid& grid = DiskGrid(48, 64));
NormEstimate bloch_norm(const Derivative& df, cd value_at_zero, double alpha,
                        const DiskGrid& grid = DiskGrid(48, 64));

struct AGrid {
  int k_max = 8;        // radii 1 - 2^{-k}, k = 0..k_max
  int angles = 8;       // uniformly spaced in [0, 2pi)
  std::vector<double> extra_radii;  // appended to the ladder (deduplicated)
  double max_radius = 1.0;          // ladder radii above this are dropped

  std::vector<cd> points() const;
};

/// Inner integral int |f'(z)|^2 (1 - |phi_a(z)|^2) dA(z), evaluated after the
/// change of variables z = phi_a(w).
double garsia_integral(const Derivative& df, cd a, const DiskGrid& grid);

/// |f(0)| + sup_a sqrt(garsia_integral), with refinement_ratio against grid.halved().
NormEstimate bmoa_norm(const Derivative& df, cd value_at_zero, const AGrid& a_grid = {},
                       const DiskGrid& grid = DiskGrid());
NormEstimate bmoa_norm(const TaylorSeries& f, const AGrid& a_grid = {}, const DiskGrid& grid = DiskGrid());

struct BergmanCheck {
  int bound_case = 0;  // 1: alpha, beta < 2 + gamma; 2: beta < 2 + gamma < alpha
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// int (1-|z|^2)^gamma / (|1 - conj(a) z|^alpha |1 - conj(b) z|^beta) dA against
/// the closed-form bound of the applicable case.
BergmanCheck bergman_bound_check(double gamma, double alpha, double beta, cd a, cd b,
                                 const DiskGrid& grid = DiskGrid());

/// 1 for alpha < 1, log(e/(1-r)) for alpha = 1, (1-r^2)^{1-alpha} for alpha > 1.
double growth_envelope(double alpha, double r);

/// max over the ladder and `angles` directions of |f(z)| / (bloch * G_alpha(|z|)).
double growth_ratio(const TaylorSeries& f, double alpha, double bloch, std::span<const double> radii,
                    int angles = 16);

}  // namespace dhlab
