#pragma once

// Positive Borel measures on [0,1): atomic lists and power-log densities
// kappa * (1-t)^gamma * log(e/(1-t))^(-delta) dt.
//
// Every density integral is carried out in u = -log(1-t), where
// dt = e^{-u} du, 1-t = e^{-u} and log(e/(1-t)) = 1+u, so the density
// becomes kappa * e^{-(gamma+1)u} * (1+u)^{-delta}. Integrands receive the
// pair (t, 1-t) with 1-t exact, which keeps weights such as (1-t)^{-a}
// accurate all the way to the endpoint.

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "dhlab/errors.hpp"
#include "dhlab/quadrature.hpp"

namespace dhlab {

enum class MeasureKind { Atomic, PowerLogDensity };

struct Atom {
  double location;  // in [0,1)
  double weight;    // > 0
};

inline constexpr quad::Tolerance kMomentTolerance{1e-10, 1e-12};
inline constexpr quad::Tolerance kTailTolerance{1e-8, 1e-12};
/// Tight tolerance used when moments feed the coefficient operators.
inline constexpr quad::Tolerance kOperatorTolerance{1e-16, 1e-13};

class MeasureModel {
 public:
  static MeasureModel atomic(std::vector<Atom> atoms);
  static MeasureModel power_log(double gamma, double delta, double scale = 1.0);

  MeasureKind kind() const noexcept { return kind_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  double gamma() const noexcept { return gamma_; }
  double delta() const noexcept { return delta_; }
  double scale() const noexcept { return scale_; }

  /// Canonical spec string, accepted back by parse_measure.
  std::string spec() const;

  /// Density with respect to du at u = -log(1-t). PowerLogDensity only.
  double density_u(double u) const noexcept {
    return scale_ * std::exp(-(gamma_ + 1.0) * u) * std::pow(1.0 + u, -delta_);
  }

  /// Integrates weight(t, 1-t) against the measure over [from, 1).
  /// Exact summation for atomic measures (error 0).
  template <class W>
  auto integrate(W&& weight, double from = 0.0, quad::Tolerance tol = kMomentTolerance) const
      -> quad::Result<std::invoke_result_t<W&, double, double>> {
    using T = std::invoke_result_t<W&, double, double>;
    quad::Result<T> out;
    if (kind_ == MeasureKind::Atomic) {
      for (const Atom& atom : atoms_) {
        if (atom.location >= from) out.value += weight(atom.location, 1.0 - atom.location) * atom.weight;
      }
      out.evaluations = static_cast<int>(atoms_.size());
      return out;
    }
    const double u0 = from <= 0.0 ? 0.0 : -std::log1p(-from);
    auto integrand = [&](double u) -> T {
      const double one_minus_t = std::exp(-u);
      const double t = -std::expm1(-u);
      const double d = density_u(u);
      if (d == 0.0) return T{};
      return weight(t, one_minus_t) * d;
    };
    return quad::adaptive_semi_infinite(integrand, u0, tol);
  }

 private:
  MeasureModel() = default;

  MeasureKind kind_ = MeasureKind::Atomic;
  std::vector<Atom> atoms_;
  double gamma_ = 0.0;
  double delta_ = 0.0;
  double scale_ = 1.0;
};

/// Moments mu_0..mu_order together with the tolerance they were computed at.
struct MomentSequence {
  std::vector<double> values;
  int order = 0;
  double absolute_tolerance = kMomentTolerance.absolute;

  double operator[](std::size_t n) const { return values[n]; }
  std::size_t size() const noexcept { return values.size(); }
};

/// Fixed quadrature rule for repeated integration against one measure:
/// sum_i weight[i] * g(t[i], one_minus_t[i]) approximates the integral of g.
struct MeasureRule {
  std::vector<double> t;
  std::vector<double> one_minus_t;
  std::vector<double> weight;
};

enum class CarlesonVerdict { Bounded, DivergesAtOne };

struct TailGrid {
  int k_max = 40;  // geometric points 1-t = 2^{-k}, k = 1..k_max
};

struct CarlesonSample {
  double t;
  double one_minus_t;
  double tail;
  double ratio;
  bool geometric;  // false for inserted points (t = 0, atom locations)
};

struct CarlesonReport {
  double s = 0.0;
  double beta = 0.0;
  double sup_constant = 0.0;
  double argmax_t = 0.0;
  double slope_estimate = 0.0;  // +inf when the tail vanishes before t -> 1
  CarlesonVerdict verdict = CarlesonVerdict::Bounded;
  std::vector<CarlesonSample> samples;
};

struct CarlesonIntegralTest {
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<std::string> failures;  // one entry per failed radius, empty if none
  double sup = 0.0;
  double argmax_radius = 0.0;
};

double moment(const MeasureModel& m, int n, quad::Tolerance tol = kMomentTolerance);

MomentSequence moments(const MeasureModel& m, int order, quad::Tolerance tol = kMomentTolerance);

/// mu([t,1)). Closed form for delta = 0 densities.
double tail_mass(const MeasureModel& m, double t, quad::Tolerance tol = kTailTolerance);

/// d nu = log(e/(1-t)) d mu.
MeasureModel weight_by_log(const MeasureModel& m);

/// d nu = (1-t)^p d mu. Rejects densities that stop being finite.
MeasureModel weight_by_power(const MeasureModel& m, double p);

/// Whether int (1-t)^p log^q(e/(1-t)) d mu is finite; decided from exponents.
bool weighted_mass_finite(const MeasureModel& m, double p, double q);

MeasureRule fixed_rule(const MeasureModel& m, double finest_scale = 1e-8);

CarlesonReport carleson_classify(const MeasureModel& m, double s, double beta, TailGrid grid = {});

/// Radii 1 - 2^{-k}, k = 0..k_max.
std::vector<double> radial_ladder(int k_max);

/// Grid sup over |a| of int (1-|a|)^beta / ((1-x)^alpha (1-|a|x)^(gamma+beta-alpha)) d mu(x).
CarlesonIntegralTest carleson_integral_test(const MeasureModel& m, double gamma, double alpha,
                                            double beta, std::span<const double> radii);

/// Strict parser for `atomic:(t1,w1);(t2,w2);...` and
/// `density:gamma=<g>,delta=<d>[,scale=<k>]`.
MeasureModel parse_measure(std::string_view text);

std::string to_string(CarlesonVerdict verdict);

/// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace dhlab
