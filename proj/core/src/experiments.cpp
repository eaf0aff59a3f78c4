#include "dhlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dhlab {
namespace {

constexpr const char* kModule = "experiments";

cd value_of(const TaylorSeries& f, cd z) {
  return f.has_closed_form() ? evaluate_closed_form(f.closed_form(), z) : evaluate_series(f, z);
}

/// The b-dependent member of the corpus, if the theorem has one.
std::optional<TaylorSeries> family_member(Theorem t, double alpha, double b) {
  switch (t) {
    case Theorem::BmoaToBmoa:
    case Theorem::BlochToBmoa:
      return make_f_log(b);
    case Theorem::BlochLargeToBmoa:
      return make_g_cauchy(b, alpha);
    case Theorem::BlochSmallToBmoa:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::BmoaToBmoa: return "T2.5";
    case Theorem::BlochSmallToBmoa: return "T3.4";
    case Theorem::BlochToBmoa: return "T3.5";
    case Theorem::BlochLargeToBmoa: return "T3.6";
  }
  return "?";
}

Theorem parse_theorem(std::string_view id) {
  if (id == "T2.5") return Theorem::BmoaToBmoa;
  if (id == "T3.4") return Theorem::BlochSmallToBmoa;
  if (id == "T3.5") return Theorem::BlochToBmoa;
  if (id == "T3.6") return Theorem::BlochLargeToBmoa;
  throw ParseError(kModule, "parse_theorem", "unknown theorem id '" + std::string(id) + "' (T2.5, T3.4, T3.5, T3.6)");
}

double checked_alpha(Theorem t, double alpha) {
  switch (t) {
    case Theorem::BmoaToBmoa:
    case Theorem::BlochToBmoa:
      return 1.0;
    case Theorem::BlochSmallToBmoa:
      if (!(alpha > 0.0 && alpha < 1.0)) {
        throw PreconditionError(kModule, "checked_alpha", "T3.4 needs 0 < alpha < 1, got " + format_number(alpha));
      }
      return alpha;
    case Theorem::BlochLargeToBmoa:
      if (!(alpha > 1.0 && std::isfinite(alpha))) {
        throw PreconditionError(kModule, "checked_alpha", "T3.6 needs alpha > 1, got " + format_number(alpha));
      }
      return alpha;
  }
  return alpha;
}

Threshold threshold(Theorem t, double alpha) {
  switch (t) {
    case Theorem::BmoaToBmoa:
    case Theorem::BlochToBmoa:
      return {2.0, 1.0};
    case Theorem::BlochSmallToBmoa:
      return {2.0, 0.0};
    case Theorem::BlochLargeToBmoa:
      return {1.0 + alpha, 0.0};
  }
  return {2.0, 0.0};
}

Space source_space(Theorem t, double alpha) {
  switch (t) {
    case Theorem::BmoaToBmoa: return Space::bmoa();
    case Theorem::BlochToBmoa: return Space::bloch(1.0);
    default: return Space::bloch(alpha);
  }
}

cd duality_pairing_rhs(const MeasureModel& m, const TaylorSeries& f, const TaylorSeries& g, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw PreconditionError(kModule, "duality_pairing_rhs", "r must lie in [0,1)");
  const TaylorSeries dg = derivative(g);
  auto integrand = [&](double t, double) {
    const double w = r * t;
    return std::conj(evaluate_on_interval(f, t)) * (value_of(g, w) + w * value_of(dg, w));
  };
  const auto res = m.integrate(integrand, 0.0, {1e-15, 1e-12});
  if (!std::isfinite(res.value.real()) || !std::isfinite(res.value.imag())) {
    throw PreconditionError(kModule, "duality_pairing_rhs", "f is not integrable against mu");
  }
  if (!res.converged) {
    throw ConvergenceError(kModule, "duality_pairing_rhs", "quadrature did not converge", res.error);
  }
  return res.value;
}

PairingLhs duality_pairing_lhs(const SeriesResult& dh, const TaylorSeries& g, double r, int n_theta) {
  if (!(r >= 0.0 && r < 1.0)) throw PreconditionError(kModule, "duality_pairing_lhs", "r must lie in [0,1)");
  if (n_theta < 8) throw PreconditionError(kModule, "duality_pairing_lhs", "n_theta must be >= 8");
  PairingLhs out;
  out.truncation_warning = dh.divergence_warning;
  out.warning = dh.warning;
  cd sum{0.0};
  for (int j = 0; j < n_theta; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n_theta;
    sum += std::conj(evaluate_series(dh.series, std::polar(r, theta))) * boundary_value(g, theta);
  }
  out.value = sum / static_cast<double>(n_theta);
  return out;
}

PairingLhs duality_pairing_lhs(const MeasureModel& m, const TaylorSeries& f, const TaylorSeries& g, double r,
                               int n_theta, int N) {
  return duality_pairing_lhs(dh_apply(m, f, N), g, r, n_theta);
}

std::vector<NecessityRow> necessity_lower_bound(const MeasureModel& m, std::span<const double> b_ladder,
                                                Theorem theorem, const NecessityOptions& options) {
  const double alpha = checked_alpha(theorem, options.alpha);
  if (options.fixed_r && !(*options.fixed_r >= 0.0 && *options.fixed_r < 1.0)) {
    throw PreconditionError(kModule, "necessity_lower_bound", "r must lie in [0,1)");
  }
  if (!(options.r_offset >= 1.0)) {
    throw PreconditionError(kModule, "necessity_lower_bound", "r offset must be >= 1");
  }
  const double s = theorem == Theorem::BlochLargeToBmoa ? 1.0 + alpha : 2.0;
  const bool log_weight = theorem == Theorem::BmoaToBmoa || theorem == Theorem::BlochToBmoa;

  std::vector<NecessityRow> rows;
  for (double b : b_ladder) {
    if (!(b > 0.0 && b < 1.0)) throw PreconditionError(kModule, "necessity_lower_bound", "b must lie in (0,1)");
    NecessityRow row;
    row.b = b;
    row.r = options.fixed_r ? *options.fixed_r : 1.0 - (1.0 - b) / options.r_offset;
    const TaylorSeries f = family_member(theorem, alpha, b).value_or(make_polynomial({1.0}));
    const TaylorSeries g = make_g_cauchy(b, 2.0);
    row.pairing = duality_pairing_rhs(m, f, g, row.r);
    row.pairing_abs = std::abs(row.pairing);
    row.tail_mass = tail_mass(m, b);
    const double one_minus_b2 = (1.0 - b) * (1.0 + b);
    const double weight = log_weight ? 1.0 - std::log(one_minus_b2) : 1.0;
    row.tail_ratio = row.tail_mass * weight / std::pow(one_minus_b2, s);
    row.ratio = row.tail_ratio > 0.0 ? row.pairing_abs / row.tail_ratio : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  return rows;
}

std::string to_string(SweepVerdict v) {
  switch (v) {
    case SweepVerdict::ConsistentBounded: return "ConsistentBounded";
    case SweepVerdict::ConsistentUnbounded: return "ConsistentUnbounded";
    case SweepVerdict::Unstable: return "Unstable";
  }
  return "?";
}

SweepVerdict decide(std::span<const double> ratios, bool stable, double* growth, double* plateau) {
  if (ratios.size() < 2 || !(ratios.front() > 0.0)) {
    if (growth) *growth = std::numeric_limits<double>::quiet_NaN();
    if (plateau) *plateau = std::numeric_limits<double>::quiet_NaN();
    return SweepVerdict::Unstable;
  }
  const double g = ratios.back() / ratios.front();
  const double p = *std::max_element(ratios.begin(), ratios.end()) / ratios.front();
  if (growth) *growth = g;
  if (plateau) *plateau = p;
  if (!stable) return SweepVerdict::Unstable;
  bool monotone = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) monotone = monotone && ratios[i] >= 0.99 * ratios[i - 1];
  if (g >= kUnboundedGrowth && monotone) return SweepVerdict::ConsistentUnbounded;
  if (p <= kBoundedPlateau) return SweepVerdict::ConsistentBounded;
  return SweepVerdict::Unstable;
}

ExperimentReport boundedness_sweep(const MeasureModel& m, const ExperimentConfig& config) {
  constexpr const char* op = "boundedness_sweep";
  ExperimentReport report;
  report.config = config;
  report.config.alpha = checked_alpha(config.theorem, config.alpha);
  const double alpha = report.config.alpha;
  if (config.b_ladder.size() < 2) throw PreconditionError(kModule, op, "the b ladder needs at least two rungs");
  for (std::size_t i = 0; i < config.b_ladder.size(); ++i) {
    const double b = config.b_ladder[i];
    if (!(b > 0.0 && b < 1.0)) throw PreconditionError(kModule, op, "b must lie in (0,1)");
    if (i > 0 && !(b > config.b_ladder[i - 1])) throw PreconditionError(kModule, op, "the b ladder must increase");
  }
  if (!(config.dilation_offset >= 1.0 && config.a_offset >= 1.0)) {
    throw PreconditionError(kModule, op, "dilation and a-grid offsets must be >= 1");
  }
  if (config.a_angles < 1) throw PreconditionError(kModule, op, "a_angles must be >= 1");
  if (config.grid_nr < 16 || config.grid_nr % 16 != 0) {
    throw PreconditionError(kModule, op, "grid n_r must be a positive multiple of 16");
  }
  if (config.grid_ntheta < 8) throw PreconditionError(kModule, op, "grid n_theta must be >= 8");

  const Space space = source_space(config.theorem, alpha);
  const auto wd = well_defined(m, space);
  if (!wd.holds) {
    throw PreconditionError(kModule, op, "operator not defined on " + to_string(space) + " (" + wd.case_label +
                                             " case): " + wd.condition + " fails");
  }
  report.measure = m.spec();
  report.carleson = threshold(config.theorem, alpha);
  report.classifier = carleson_classify(m, report.carleson.s, report.carleson.beta).verdict;

  const DiskGrid grid(config.grid_nr, config.grid_ntheta);
  bool stable = true;
  std::vector<double> ratios;
  for (double b : config.b_ladder) {
    SweepRung rung;
    rung.b = b;
    rung.rho = 1.0 - (1.0 - b) / config.dilation_offset;
    rung.a_max = 1.0 - (1.0 - b) / config.a_offset;
    AGrid a_grid;
    a_grid.k_max = 60;
    a_grid.max_radius = rung.a_max;
    a_grid.angles = config.a_angles;
    a_grid.extra_radii = {b, rung.a_max};
    const double finest = std::min(1e-8, (1.0 - rung.rho) * 1e-4);

    std::vector<TaylorSeries> corpus;
    if (auto member = family_member(config.theorem, alpha, b)) corpus.push_back(*member);
    corpus.push_back(make_polynomial({1.0}));
    corpus.push_back(make_polynomial({0.0, 1.0}));

    for (const TaylorSeries& f : corpus) {
      SweepCell cell;
      cell.b = b;
      cell.function = describe(f);
      const IntegralForm image(m, f, finest);
      const double rho = rung.rho;
      const Derivative dimage = [&image, rho](cd z) { return rho * image.derivative(rho * z); };
      const auto numerator = bmoa_norm(dimage, image.value(0.0), a_grid, grid);
      const auto source = space.kind == Space::BMOA ? bmoa_norm(f, a_grid, grid) : bloch_norm(f, alpha);
      cell.numerator = numerator.value;
      cell.numerator_refinement = numerator.refinement_ratio;
      cell.numerator_argmax = numerator.argmax;
      cell.source = source.value;
      cell.source_refinement = source.refinement_ratio;
      cell.accepted = numerator.accepted && source.accepted;
      cell.ratio = numerator.value / source.value;
      if (!cell.accepted) {
        stable = false;
        report.notes.push_back("b = " + format_number(b) + ", " + cell.function +
                               ": norm estimate failed the refinement gate (numerator " +
                               format_number(numerator.refinement_ratio) + ", source " +
                               format_number(source.refinement_ratio) + ")");
      }
      if (cell.ratio > rung.ratio) {
        rung.ratio = cell.ratio;
        rung.argmax_function = cell.function;
      }
      report.cells.push_back(std::move(cell));
    }
    ratios.push_back(rung.ratio);
    report.rungs.push_back(std::move(rung));
  }
  report.verdict = decide(ratios, stable, &report.growth, &report.plateau);
  report.agrees = (report.verdict == SweepVerdict::ConsistentBounded && report.classifier == CarlesonVerdict::Bounded) ||
                  (report.verdict == SweepVerdict::ConsistentUnbounded &&
                   report.classifier == CarlesonVerdict::DivergesAtOne);

  NecessityOptions nopt;
  nopt.alpha = config.theorem == Theorem::BlochSmallToBmoa || config.theorem == Theorem::BlochLargeToBmoa ? alpha : 0.5;
  nopt.fixed_r = config.pairing_r;
  report.necessity = necessity_lower_bound(m, config.b_ladder, config.theorem, nopt);
  return report;
}

std::vector<BatteryMeasure> standard_battery() {
  std::vector<BatteryMeasure> out;
  auto add = [&](MeasureModel m) { out.push_back({m.spec(), std::move(m)}); };
  add(MeasureModel::atomic({{0.5, 1.0}}));
  add(MeasureModel::atomic({{0.9, 1.0}}));
  for (auto [g, d] : {std::pair{1.0, 0.0}, std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{0.5, 0.0},
                      std::pair{1.5, 0.0}, std::pair{2.0, 0.0}}) {
    add(MeasureModel::power_log(g, d));
  }
  return out;
}

}  // namespace dhlab
