#include "dhlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dhlab {
namespace {

constexpr const char* kModule = "operators";

SeriesResult apply_impl(const MomentSequence& mu, const TaylorSeries& f, int N, RowWeight mode) {
  if (N < 0) throw PreconditionError(kModule, "apply", "truncation N must be >= 0");
  if (static_cast<int>(mu.size()) < 2 * N + 2) {
    throw PreconditionError(kModule, "apply", "moments up to order 2N+1 are required");
  }
  std::vector<double> head(mu.values.begin(), mu.values.begin() + 2 * N + 1);
  MomentSequence window{std::move(head), 2 * N, mu.absolute_tolerance};
  const HankelOperator op(std::move(window), N, mode);

  std::vector<cd> a(N + 1);
  for (int k = 0; k <= N; ++k) a[k] = f.coefficient(k);

  SeriesResult out;
  out.series = TaylorSeries(op.apply(a), {}, true);

  const double tail = coefficient_tail_bound(f, N);
  out.tail_bound.resize(N + 1);
  for (int n = 0; n <= N; ++n) {
    double partial = 0.0;
    for (int k = 0; k <= N; ++k) partial += mu[n + k] * std::abs(a[k]);
    const double bound = tail == 0.0 ? 0.0 : mu[n + N + 1] * tail;
    out.tail_bound[n] = bound;
    if (bound > 0.0) {
      const double rel = partial > 0.0 ? bound / partial : std::numeric_limits<double>::infinity();
      out.relative_tail = std::max(out.relative_tail, rel);
    }
  }
  if (out.relative_tail > kTailWarningThreshold) {
    out.divergence_warning = true;
    out.warning = "dropped coefficient tail reaches " + format_number(out.relative_tail) +
                  " of the partial sum at N = " + std::to_string(N);
  }
  return out;
}

bool is_s_carleson_for_some_s(const MeasureModel& m) {
  if (m.kind() == MeasureKind::Atomic) return true;
  const auto probe = carleson_classify(m, 1.0, 0.0);
  if (!(probe.slope_estimate > 0.0)) return false;
  const double s = std::min(1.0, 0.5 * probe.slope_estimate);
  return carleson_classify(m, s, 0.0).verdict == CarlesonVerdict::Bounded;
}

}  // namespace

HankelOperator::HankelOperator(MomentSequence moments, int N, RowWeight mode)
    : moments_(std::move(moments)), n_(N), mode_(mode) {
  if (N < 0) throw PreconditionError(kModule, "HankelOperator", "N must be >= 0");
  if (static_cast<int>(moments_.size()) < 2 * N + 1) {
    throw PreconditionError(kModule, "HankelOperator", "moments up to order 2N are required");
  }
}

std::vector<cd> HankelOperator::apply(std::span<const cd> a) const {
  std::vector<cd> c(n_ + 1);
  const int kmax = std::min<int>(n_, static_cast<int>(a.size()) - 1);
  for (int n = 0; n <= n_; ++n) {
    cd sum{0.0};
    for (int k = 0; k <= kmax; ++k) sum += moments_[n + k] * a[k];
    c[n] = mode_ == RowWeight::DerivativeWeighted ? static_cast<double>(n + 1) * sum : sum;
  }
  return c;
}

double coefficient_tail_bound(const TaylorSeries& f, int N) {
  const int first = N + 1;
  if (const auto* g = std::get_if<LogFamily>(&f.closed_form())) {
    return std::pow(g->b, first) / (first * (1.0 - g->b));
  }
  if (const auto* g = std::get_if<CauchyFamily>(&f.closed_form())) {
    // a_{k+1}/a_k = b (k+e)/(k+1): decreasing to b when e >= 1, increasing to b otherwise.
    const double q = g->exponent >= 1.0 ? g->b * (first + g->exponent) / (first + 1.0) : g->b;
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    const double lead = std::abs(g->prefactor) * std::abs(rising_binomial(g->exponent, first)) *
                        std::pow(g->b, first);
    return lead / (1.0 - q);
  }
  double sum = 0.0;
  for (int k = first; k <= f.order(); ++k) sum += std::abs(f.coefficient(k));
  return sum;
}

SeriesResult apply_with_moments(const MomentSequence& mu, const TaylorSeries& f, int N, RowWeight mode) {
  return apply_impl(mu, f, N, mode);
}

SeriesResult dh_apply(const MeasureModel& m, const TaylorSeries& f, int N) {
  return apply_impl(moments(m, 2 * N + 1, kOperatorTolerance), f, N, RowWeight::DerivativeWeighted);
}

SeriesResult hilbert_apply(const MeasureModel& m, const TaylorSeries& f, int N) {
  return apply_impl(moments(m, 2 * N + 1, kOperatorTolerance), f, N, RowWeight::Plain);
}

std::string to_string(const Space& space) {
  if (space.kind == Space::BMOA) return "BMOA";
  return "Bloch(" + format_number(space.alpha) + ")";
}

WellDefinedReport well_defined(const MeasureModel& m, const Space& space) {
  WellDefinedReport r;
  if (space.kind == Space::Bloch && !(space.alpha > 0.0)) {
    throw PreconditionError(kModule, "well_defined", "Bloch exponent must be positive");
  }
  if (space.kind == Space::BMOA || space.alpha == 1.0) {
    r.case_label = "log-moment";
    r.condition = "integral of log(e/(1-t)) dmu is finite";
    r.holds = weighted_mass_finite(m, 0.0, 1.0);
  } else if (space.alpha < 1.0) {
    r.case_label = "finite-mass";
    r.condition = "mu is a finite measure";
    r.holds = weighted_mass_finite(m, 0.0, 0.0);
  } else {
    r.case_label = "power-moment";
    r.condition = "integral of (1-t)^(1-alpha) dmu is finite, alpha = " + format_number(space.alpha);
    r.holds = weighted_mass_finite(m, 1.0 - space.alpha, 0.0);
  }
  return r;
}

quad::Result<cd> integral_apply(const MeasureModel& m, const TaylorSeries& f, double alpha, cd z,
                                std::optional<Space> space, quad::Tolerance tol) {
  constexpr const char* op = "integral_apply";
  if (!(alpha >= 1.0)) throw PreconditionError(kModule, op, "alpha must be >= 1");
  if (!(std::abs(z) < 1.0)) throw PreconditionError(kModule, op, "|z| must be < 1");
  if (space) {
    const auto wd = well_defined(m, *space);
    if (!wd.holds) {
      throw PreconditionError(kModule, op,
                              "not well defined on " + to_string(*space) + " (" + wd.case_label +
                                  " case): " + wd.condition + " fails");
    }
  }
  const cd one_minus_z = 1.0 - z;
  auto integrand = [&](double t, double one_minus_t) {
    const cd denom = one_minus_t + t * one_minus_z;  // 1 - t z without cancellation
    return evaluate_on_interval(f, t) * std::pow(denom, -alpha);
  };
  auto r = m.integrate(integrand, 0.0, tol);
  if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag())) {
    throw PreconditionError(kModule, op, "integrand is not integrable against mu");
  }
  if (!r.converged) {
    throw ConvergenceError(kModule, op, "quadrature did not converge (error estimate " +
                                            format_number(r.error) + ")",
                           r.error);
  }
  return r;
}

EquivalenceReport equivalence_residual(const MeasureModel& m, const TaylorSeries& f,
                                       std::span<const cd> z_grid, int N, Space space) {
  if (N < 1) throw PreconditionError(kModule, "equivalence_residual", "N must be >= 1");
  EquivalenceReport report;
  report.N = N;

  const auto wd = well_defined(m, space);
  if (!wd.holds) report.violations.push_back(wd.case_label + ": " + wd.condition + " fails");
  if (space.kind == Space::BMOA) {
    if (carleson_classify(m, 1.0, 1.0).verdict != CarlesonVerdict::Bounded) {
      report.violations.push_back("mu is not a 1-logarithmic 1-Carleson measure");
    }
  } else if (space.alpha <= 1.0) {
    if (!is_s_carleson_for_some_s(m)) report.violations.push_back("mu is not s-Carleson for any s > 0");
  } else if (carleson_classify(m, space.alpha, 0.0).verdict != CarlesonVerdict::Bounded) {
    report.violations.push_back("mu is not a " + format_number(space.alpha) + "-Carleson measure");
  }

  const MomentSequence mu = moments(m, 4 * N + 1, kOperatorTolerance);
  const auto at_n = apply_impl(mu, f, N, RowWeight::DerivativeWeighted);
  const auto at_2n = apply_impl(mu, f, 2 * N, RowWeight::DerivativeWeighted);
  for (const cd& z : z_grid) {
    const cd exact = integral_apply(m, f, 2.0, z).value;
    report.pointwise.push_back(std::abs(evaluate_series(at_n.series, z) - exact));
    report.residual = std::max(report.residual, report.pointwise.back());
    report.residual_doubled =
        std::max(report.residual_doubled, std::abs(evaluate_series(at_2n.series, z) - exact));
  }
  return report;
}

IntegralForm::IntegralForm(const MeasureModel& m, const TaylorSeries& f, double finest_scale) {
  const MeasureRule rule = fixed_rule(m, finest_scale);
  t_ = rule.t;
  one_minus_t_ = rule.one_minus_t;
  weighted_f_.resize(t_.size());
  for (std::size_t i = 0; i < t_.size(); ++i) weighted_f_[i] = evaluate_on_interval(f, t_[i]) * rule.weight[i];
}

cd IntegralForm::value(cd z) const {
  const cd one_minus_z = 1.0 - z;
  cd sum{0.0};
  for (std::size_t i = 0; i < t_.size(); ++i) {
    const cd d = one_minus_t_[i] + t_[i] * one_minus_z;
    sum += weighted_f_[i] / (d * d);
  }
  return sum;
}

cd IntegralForm::derivative(cd z) const {
  const cd one_minus_z = 1.0 - z;
  cd sum{0.0};
  for (std::size_t i = 0; i < t_.size(); ++i) {
    const cd d = one_minus_t_[i] + t_[i] * one_minus_z;
    sum += 2.0 * t_[i] * weighted_f_[i] / (d * d * d);
  }
  return sum;
}

}  // namespace dhlab
