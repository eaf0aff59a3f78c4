#pragma once

// The Hankel-type operators: coefficient forms (Hilbert and derivative-weighted
// Hilbert) and the integral form with kernel (1 - t z)^{-alpha}.

#include <optional>
#include <string>
#include <vector>

#include "dhlab/function_space.hpp"
#include "dhlab/measure.hpp"

namespace dhlab {

enum class RowWeight { Plain, DerivativeWeighted };

class HankelOperator {
 public:
  /// Needs moments up to order 2N.
  HankelOperator(MomentSequence moments, int N, RowWeight mode);

  int truncation() const noexcept { return n_; }
  RowWeight mode() const noexcept { return mode_; }
  const MomentSequence& moments() const noexcept { return moments_; }

  /// Unweighted entry mu_{n+k}.
  double entry(int n, int k) const { return moments_[n + k]; }

  /// c_n = w(n) * sum_{k<=N} mu_{n+k} a_k for n <= N, w(n) = 1 or n+1.
  std::vector<cd> apply(std::span<const cd> a) const;

 private:
  MomentSequence moments_;
  int n_;
  RowWeight mode_;
};

struct SeriesResult {
  TaylorSeries series;
  /// Bound on the dropped sum_{k>N} mu_{n+k}|a_k| for each row n (before row weighting).
  std::vector<double> tail_bound;
  /// max_n tail_bound[n] / sum_{k<=N} mu_{n+k}|a_k|
  double relative_tail = 0.0;
  bool divergence_warning = false;
  std::string warning;
};

inline constexpr double kTailWarningThreshold = 1e-4;

SeriesResult dh_apply(const MeasureModel& m, const TaylorSeries& f, int N);
SeriesResult hilbert_apply(const MeasureModel& m, const TaylorSeries& f, int N);

/// Same, reusing moments already computed up to order 2N+1.
SeriesResult apply_with_moments(const MomentSequence& mu, const TaylorSeries& f, int N, RowWeight mode);

/// Upper bound for sum_{k>N} |a_k|, from the family envelope or the stored coefficients.
double coefficient_tail_bound(const TaylorSeries& f, int N);

struct Space {
  enum Kind { BMOA, Bloch } kind = BMOA;
  double alpha = 1.0;  // Bloch only

  static Space bmoa() { return {BMOA, 1.0}; }
  static Space bloch(double alpha) { return {Bloch, alpha}; }
};

std::string to_string(const Space& space);

struct WellDefinedReport {
  bool holds = true;
  std::string case_label;  // "log-moment", "finite-mass" or "power-moment"
  std::string condition;   // human-readable integrability condition
};

/// Integrability condition making the integral form well defined on the space.
WellDefinedReport well_defined(const MeasureModel& m, const Space& space);

/// Integral of f(t)/(1-tz)^alpha against mu. With `space` set, the matching
/// integrability condition is checked first and a violation is rejected.
quad::Result<cd> integral_apply(const MeasureModel& m, const TaylorSeries& f, double alpha, cd z,
                                std::optional<Space> space = std::nullopt,
                                quad::Tolerance tol = {1e-14, 1e-13});

struct EquivalenceReport {
  int N = 0;
  double residual = 0.0;         // at N
  double residual_doubled = 0.0; // at 2N
  std::vector<double> pointwise;  // |DH(z) - I(z)| at N, one per grid point
  std::vector<std::string> violations;
};

/// max over z of |DH_mu(f)(z) - I_{mu,2}(f)(z)| at truncation N and 2N.
/// Hypothesis violations are listed but the residual is still computed.
EquivalenceReport equivalence_residual(const MeasureModel& m, const TaylorSeries& f,
                                       std::span<const cd> z_grid, int N = kDefaultTruncation,
                                       Space space = Space::bmoa());

/// Fast evaluation of F = I_{mu,2}(f) and F' on many points with a fixed rule.
class IntegralForm {
 public:
  IntegralForm(const MeasureModel& m, const TaylorSeries& f, double finest_scale = 1e-8);

  cd value(cd z) const;
  cd derivative(cd z) const;
  std::size_t nodes() const noexcept { return t_.size(); }

 private:
  std::vector<double> t_;
  std::vector<double> one_minus_t_;
  std::vector<cd> weighted_f_;  // f(t_i) * w_i
};

}  // namespace dhlab
