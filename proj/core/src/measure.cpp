#include "dhlab/measure.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <numeric>

namespace dhlab {
namespace {

constexpr const char* kModule = "measure";

bool finite(double x) { return std::isfinite(x); }

template <class T>
void require_converged(const quad::Result<T>& r, const char* op, const std::string& what) {
  if (!r.converged) {
    throw ConvergenceError(kModule, op, what + " did not converge (error estimate " +
                                            format_number(r.error) + ")",
                           r.error);
  }
}

double parse_real(std::string_view text, const char* op) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last || !finite(value)) {
    throw ParseError(kModule, op, "not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

MeasureModel MeasureModel::atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw PreconditionError(kModule, "atomic", "at least one atom is required");
  for (const Atom& a : atoms) {
    if (!finite(a.location) || a.location < 0.0 || a.location >= 1.0) {
      throw PreconditionError(kModule, "atomic",
                              "atom location must lie in [0,1): " + format_number(a.location));
    }
    if (!finite(a.weight) || a.weight <= 0.0) {
      throw PreconditionError(kModule, "atomic",
                              "atom weight must be positive: " + format_number(a.weight));
    }
  }
  MeasureModel m;
  m.kind_ = MeasureKind::Atomic;
  m.atoms_ = std::move(atoms);
  return m;
}

MeasureModel MeasureModel::power_log(double gamma, double delta, double scale) {
  if (!finite(gamma) || gamma <= -1.0) {
    throw PreconditionError(kModule, "power_log",
                            "gamma must exceed -1 for a finite measure: " + format_number(gamma));
  }
  if (!finite(delta)) throw PreconditionError(kModule, "power_log", "delta must be finite");
  if (!finite(scale) || scale <= 0.0) {
    throw PreconditionError(kModule, "power_log", "scale must be positive");
  }
  MeasureModel m;
  m.kind_ = MeasureKind::PowerLogDensity;
  m.gamma_ = gamma;
  m.delta_ = delta;
  m.scale_ = scale;
  return m;
}

std::string MeasureModel::spec() const {
  if (kind_ == MeasureKind::Atomic) {
    std::string s = "atomic:";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i) s += ';';
      s += '(' + format_number(atoms_[i].location) + ',' + format_number(atoms_[i].weight) + ')';
    }
    return s;
  }
  return "density:gamma=" + format_number(gamma_) + ",delta=" + format_number(delta_) +
         ",scale=" + format_number(scale_);
}

double moment(const MeasureModel& m, int n, quad::Tolerance tol) {
  if (n < 0) throw PreconditionError(kModule, "moment", "order must be nonnegative");
  if (m.kind() == MeasureKind::Atomic) {
    double sum = 0.0;
    for (const Atom& a : m.atoms()) sum += a.weight * std::pow(a.location, n);
    return sum;
  }
  auto r = m.integrate([n](double t, double) { return std::pow(t, n); }, 0.0, tol);
  require_converged(r, "moment", "moment " + std::to_string(n));
  return r.value;
}

MomentSequence moments(const MeasureModel& m, int order, quad::Tolerance tol) {
  if (order < 0) throw PreconditionError(kModule, "moments", "order must be nonnegative");
  MomentSequence seq;
  seq.order = order;
  seq.absolute_tolerance = tol.absolute;
  seq.values.resize(order + 1);
  for (int n = 0; n <= order; ++n) seq.values[n] = moment(m, n, tol);
  return seq;
}

double tail_mass(const MeasureModel& m, double t, quad::Tolerance tol) {
  if (!(t >= 0.0 && t < 1.0)) throw PreconditionError(kModule, "tail_mass", "t must lie in [0,1)");
  if (m.kind() == MeasureKind::Atomic) {
    double sum = 0.0;
    for (const Atom& a : m.atoms())
      if (a.location >= t) sum += a.weight;
    return sum;
  }
  const double one_minus_t = 1.0 - t;
  if (m.delta() == 0.0) {
    return m.scale() * std::pow(one_minus_t, m.gamma() + 1.0) / (m.gamma() + 1.0);
  }
  // Absolute tolerance is measured against the local density scale so that
  // tails of size 2^-80 are still resolved relatively.
  const double u0 = -std::log(one_minus_t);
  quad::Tolerance local = tol;
  local.absolute = tol.absolute * m.density_u(u0) / (m.gamma() + 1.0);
  auto r = m.integrate([](double, double) { return 1.0; }, t, local);
  require_converged(r, "tail_mass", "tail integral");
  return r.value;
}

MeasureModel weight_by_log(const MeasureModel& m) {
  if (m.kind() == MeasureKind::Atomic) {
    std::vector<Atom> atoms(m.atoms().begin(), m.atoms().end());
    for (Atom& a : atoms) a.weight *= 1.0 - std::log1p(-a.location);
    return MeasureModel::atomic(std::move(atoms));
  }
  return MeasureModel::power_log(m.gamma(), m.delta() - 1.0, m.scale());
}

MeasureModel weight_by_power(const MeasureModel& m, double p) {
  if (!finite(p)) throw PreconditionError(kModule, "weight_by_power", "exponent must be finite");
  if (m.kind() == MeasureKind::Atomic) {
    std::vector<Atom> atoms(m.atoms().begin(), m.atoms().end());
    for (Atom& a : atoms) a.weight *= std::pow(1.0 - a.location, p);
    return MeasureModel::atomic(std::move(atoms));
  }
  if (m.gamma() + p <= -1.0) {
    throw PreconditionError(kModule, "weight_by_power",
                            "weighted density is not integrable: gamma + p = " +
                                format_number(m.gamma() + p) + " <= -1");
  }
  return MeasureModel::power_log(m.gamma() + p, m.delta(), m.scale());
}

bool weighted_mass_finite(const MeasureModel& m, double p, double q) {
  if (m.kind() == MeasureKind::Atomic) return true;
  // In u: e^{-(gamma+p+1)u} (1+u)^{q-delta}.
  const double rate = m.gamma() + p + 1.0;
  if (rate > 0.0) return true;
  if (rate < 0.0) return false;
  return m.delta() - q > 1.0;
}

MeasureRule fixed_rule(const MeasureModel& m, double finest_scale) {
  MeasureRule rule;
  if (m.kind() == MeasureKind::Atomic) {
    for (const Atom& a : m.atoms()) {
      rule.t.push_back(a.location);
      rule.one_minus_t.push_back(1.0 - a.location);
      rule.weight.push_back(a.weight);
    }
    return rule;
  }
  // Kernels (1 - t z)^{-k} have their poles in u at distance >= pi/2 from
  // the real axis, except for z near -1 where the pole approaches u = -log 2.
  // Hence a graded start and unit panels afterwards, 8 nodes each.
  const double depth = std::log(1.0 / std::clamp(finest_scale, 1e-300, 1.0));
  const double upper =
      std::min(400.0, std::ceil(depth + 40.0 / (m.gamma() + 1.0) + 2.0 * std::max(0.0, -m.delta())));
  std::vector<double> edges = {0.0, 0.125, 0.25, 0.5};
  for (double u = 1.0; u <= upper; u += 1.0) edges.push_back(u);
  const quad::Rule base = quad::composite_gauss_legendre(edges, 8);
  for (std::size_t i = 0; i < base.nodes.size(); ++i) {
    const double u = base.nodes[i];
    const double w = base.weights[i] * m.density_u(u);
    if (w == 0.0) continue;
    rule.t.push_back(-std::expm1(-u));
    rule.one_minus_t.push_back(std::exp(-u));
    rule.weight.push_back(w);
  }
  return rule;
}

std::vector<double> radial_ladder(int k_max) {
  std::vector<double> radii;
  for (int k = 0; k <= k_max; ++k) radii.push_back(1.0 - std::ldexp(1.0, -k));
  return radii;
}

CarlesonReport carleson_classify(const MeasureModel& m, double s, double beta, TailGrid grid) {
  if (!(s > 0.0)) throw PreconditionError(kModule, "carleson_classify", "s must be positive");
  if (!(beta >= 0.0)) throw PreconditionError(kModule, "carleson_classify", "beta must be >= 0");
  if (grid.k_max < 4) throw PreconditionError(kModule, "carleson_classify", "k_max must be >= 4");

  CarlesonReport report;
  report.s = s;
  report.beta = beta;

  auto sample = [&](double t, double one_minus_t, bool geometric) {
    const double tail = tail_mass(m, t);
    const double log_factor = 1.0 - std::log(one_minus_t);
    const double ratio = tail * std::pow(log_factor, beta) / std::pow(one_minus_t, s);
    report.samples.push_back({t, one_minus_t, tail, ratio, geometric});
  };

  sample(0.0, 1.0, false);
  for (int k = 1; k <= grid.k_max; ++k) {
    const double h = std::ldexp(1.0, -k);
    sample(1.0 - h, h, true);
  }
  if (m.kind() == MeasureKind::Atomic) {
    for (const Atom& a : m.atoms()) sample(a.location, 1.0 - a.location, false);
  }
  std::stable_sort(report.samples.begin(), report.samples.end(),
                   [](const CarlesonSample& x, const CarlesonSample& y) { return x.t < y.t; });

  for (const CarlesonSample& smp : report.samples) {
    if (smp.ratio > report.sup_constant) {
      report.sup_constant = smp.ratio;
      report.argmax_t = smp.t;
    }
  }

  std::vector<const CarlesonSample*> geometric;
  for (const CarlesonSample& smp : report.samples)
    if (smp.geometric) geometric.push_back(&smp);

  // Divergence: strict growth of more than 1% per point over the last quarter.
  const std::size_t window = std::max<std::size_t>(2, geometric.size() / 4);
  bool increasing = true;
  for (std::size_t i = geometric.size() - window + 1; i < geometric.size(); ++i) {
    if (!(geometric[i]->ratio > geometric[i - 1]->ratio * 1.01)) {
      increasing = false;
      break;
    }
  }
  report.verdict = increasing ? CarlesonVerdict::DivergesAtOne : CarlesonVerdict::Bounded;

  // Least-squares slope of log tail against log(1-t) over the finer half.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = geometric.size() / 2; i < geometric.size(); ++i) {
    if (geometric[i]->tail <= 0.0) continue;
    const double x = std::log(geometric[i]->one_minus_t);
    const double y = std::log(geometric[i]->tail);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) {
    report.slope_estimate = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  } else {
    report.slope_estimate = std::numeric_limits<double>::infinity();
  }
  return report;
}

CarlesonIntegralTest carleson_integral_test(const MeasureModel& m, double gamma, double alpha,
                                            double beta, std::span<const double> radii) {
  if (!(alpha >= 0.0 && alpha < gamma)) {
    throw PreconditionError(kModule, "carleson_integral_test", "requires 0 <= alpha < gamma");
  }
  if (!(beta > 0.0)) throw PreconditionError(kModule, "carleson_integral_test", "requires beta > 0");

  CarlesonIntegralTest out;
  const bool integrable = weighted_mass_finite(m, -alpha, 0.0);
  const double exponent = gamma + beta - alpha;
  for (double rho : radii) {
    if (!(rho >= 0.0 && rho < 1.0)) {
      throw PreconditionError(kModule, "carleson_integral_test", "radii must lie in [0,1)");
    }
    out.radii.push_back(rho);
    if (!integrable) {
      out.values.push_back(std::numeric_limits<double>::infinity());
      out.failures.push_back("radius " + format_number(rho) +
                             ": integral of (1-x)^-alpha diverges");
      continue;
    }
    const double one_minus_rho = 1.0 - rho;
    auto weight = [&](double, double one_minus_x) {
      const double denom = one_minus_rho + rho * one_minus_x;  // 1 - rho x
      return std::pow(one_minus_rho, beta) * std::pow(one_minus_x, -alpha) *
             std::pow(denom, -exponent);
    };
    auto r = m.integrate(weight, 0.0, {1e-12, 1e-10});
    if (!r.converged) {
      out.values.push_back(r.value);
      out.failures.push_back("radius " + format_number(rho) + ": quadrature error " +
                             format_number(r.error));
      continue;
    }
    out.values.push_back(r.value);
  }
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (out.values[i] > out.sup || i == 0) {
      out.sup = out.values[i];
      out.argmax_radius = out.radii[i];
    }
  }
  return out;
}

MeasureModel parse_measure(std::string_view text) {
  constexpr const char* op = "parse_measure";
  if (text.starts_with("atomic:")) {
    std::string_view body = text.substr(7);
    if (body.empty()) throw ParseError(kModule, op, "atomic measure needs at least one (t,w) pair");
    std::vector<Atom> atoms;
    while (!body.empty()) {
      const auto semi = body.find(';');
      std::string_view item = body.substr(0, semi);
      if (item.size() < 5 || item.front() != '(' || item.back() != ')') {
        throw ParseError(kModule, op, "expected (t,w) but got '" + std::string(item) + "'");
      }
      item = item.substr(1, item.size() - 2);
      const auto comma = item.find(',');
      if (comma == std::string_view::npos || item.find(',', comma + 1) != std::string_view::npos) {
        throw ParseError(kModule, op, "expected exactly two entries in (t,w)");
      }
      atoms.push_back({parse_real(item.substr(0, comma), op), parse_real(item.substr(comma + 1), op)});
      if (semi == std::string_view::npos) break;
      body = body.substr(semi + 1);
      if (body.empty()) throw ParseError(kModule, op, "trailing ';' in atomic measure");
    }
    try {
      return MeasureModel::atomic(std::move(atoms));
    } catch (const PreconditionError& e) {
      throw ParseError(kModule, op, e.what());
    }
  }
  if (text.starts_with("density:")) {
    std::string_view body = text.substr(8);
    std::map<std::string, double, std::less<>> values;
    while (true) {
      const auto comma = body.find(',');
      std::string_view item = body.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(kModule, op, "expected key=value but got '" + std::string(item) + "'");
      }
      std::string key(item.substr(0, eq));
      if (key != "gamma" && key != "delta" && key != "scale") {
        throw ParseError(kModule, op, "unknown density key '" + key + "'");
      }
      if (values.count(key)) throw ParseError(kModule, op, "duplicate density key '" + key + "'");
      values[key] = parse_real(item.substr(eq + 1), op);
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    if (!values.count("gamma") || !values.count("delta")) {
      throw ParseError(kModule, op, "density needs both gamma= and delta=");
    }
    const double scale = values.count("scale") ? values["scale"] : 1.0;
    try {
      return MeasureModel::power_log(values["gamma"], values["delta"], scale);
    } catch (const PreconditionError& e) {
      throw ParseError(kModule, op, e.what());
    }
  }
  throw ParseError(kModule, op,
                   "measure spec must start with 'atomic:' or 'density:' but got '" +
                       std::string(text) + "'");
}

std::string to_string(CarlesonVerdict verdict) {
  return verdict == CarlesonVerdict::Bounded ? "Bounded" : "DivergesAtOne";
}

}  // namespace dhlab
