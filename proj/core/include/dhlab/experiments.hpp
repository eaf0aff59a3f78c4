#pragma once

// Theorem-level experiments: the duality pairing, the necessity chain with
// test pairs (f_b, g_b), and boundedness sweeps along a ladder of b -> 1.

#include <optional>
#include <string>
#include <vector>

#include "dhlab/norms.hpp"
#include "dhlab/operators.hpp"

namespace dhlab {

enum class Theorem { BmoaToBmoa, BlochSmallToBmoa, BlochToBmoa, BlochLargeToBmoa };

/// "T2.5", "T3.4", "T3.5", "T3.6"
std::string to_string(Theorem t);
Theorem parse_theorem(std::string_view id);

/// Carleson exponents (s, beta) that decide boundedness for the theorem.
struct Threshold {
  double s;
  double beta;
};
Threshold threshold(Theorem t, double alpha);

/// Source space of the operator.
Space source_space(Theorem t, double alpha);

/// Validates alpha for the theorem and returns the value actually used
/// (T2.5 and T3.5 ignore it).
double checked_alpha(Theorem t, double alpha);

/// int conj(f(t)) (g(rt) + rt g'(rt)) dmu(t)
cd duality_pairing_rhs(const MeasureModel& m, const TaylorSeries& f, const TaylorSeries& g, double r);

struct PairingLhs {
  cd value;
  bool truncation_warning = false;
  std::string warning;
};

/// (1/2pi) int conj(DH_mu f(r e^{i theta})) g(e^{i theta}) d theta by the trapezoid rule.
PairingLhs duality_pairing_lhs(const MeasureModel& m, const TaylorSeries& f, const TaylorSeries& g, double r,
                               int n_theta = 4096, int N = kDefaultTruncation);
PairingLhs duality_pairing_lhs(const SeriesResult& dh, const TaylorSeries& g, double r, int n_theta = 4096);

struct NecessityRow {
  double b = 0.0;
  double r = 0.0;
  cd pairing;
  double pairing_abs = 0.0;
  double tail_mass = 0.0;
  double tail_ratio = 0.0;  // mu([b,1)) W(b) / (1-b^2)^s
  double ratio = 0.0;       // pairing_abs / tail_ratio, NaN when the tail vanishes
};

struct NecessityOptions {
  double alpha = 0.5;
  std::optional<double> fixed_r;  // otherwise r_b = 1 - (1-b)/r_offset
  double r_offset = 100.0;
};

std::vector<NecessityRow> necessity_lower_bound(const MeasureModel& m, std::span<const double> b_ladder,
                                                Theorem theorem, const NecessityOptions& options = {});

enum class SweepVerdict { ConsistentBounded, ConsistentUnbounded, Unstable };
std::string to_string(SweepVerdict v);

struct ExperimentConfig {
  Theorem theorem = Theorem::BmoaToBmoa;
  double alpha = 0.5;
  std::vector<double> b_ladder = {0.9, 0.99, 0.999, 0.9999};
  int grid_nr = 48;
  int grid_ntheta = 128;
  int a_angles = 2;
  double dilation_offset = 100.0;  // rho_b = 1 - (1-b)/dilation_offset
  double a_offset = 10.0;          // a-grid reaches 1 - (1-b)/a_offset
  std::optional<double> pairing_r;  // fixed r for the necessity rows, else r_b
};

/// One corpus function at one rung of the ladder.
struct SweepCell {
  double b = 0.0;
  std::string function;
  double numerator = 0.0;  // BMOA norm of the dilated image
  double numerator_refinement = 1.0;
  cd numerator_argmax;
  double source = 0.0;
  double source_refinement = 1.0;
  bool accepted = true;
  double ratio = 0.0;
};

struct SweepRung {
  double b = 0.0;
  double rho = 0.0;
  double a_max = 0.0;
  double ratio = 0.0;  // max over the corpus
  std::string argmax_function;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string measure;
  Threshold carleson{};
  CarlesonVerdict classifier = CarlesonVerdict::Bounded;
  std::vector<SweepCell> cells;
  std::vector<SweepRung> rungs;
  std::vector<NecessityRow> necessity;
  double growth = 0.0;   // ratio(last) / ratio(first)
  double plateau = 0.0;  // max ratio / ratio(first)
  SweepVerdict verdict = SweepVerdict::Unstable;
  bool agrees = false;   // verdict matches the classifier
  std::vector<std::string> notes;
};

inline constexpr double kUnboundedGrowth = 2.0;
inline constexpr double kBoundedPlateau = 1.3;

/// Verdict rule on a ratio ladder; `stable` is false when any norm was flagged.
SweepVerdict decide(std::span<const double> ratios, bool stable, double* growth = nullptr,
                    double* plateau = nullptr);

ExperimentReport boundedness_sweep(const MeasureModel& m, const ExperimentConfig& config);

struct BatteryMeasure {
  std::string name;
  MeasureModel measure;
};

/// Point masses at 0.5 and 0.9, and densities (gamma, delta) in
/// {(1,0), (1,1), (1,2), (0.5,0), (1.5,0), (2,0)}.
std::vector<BatteryMeasure> standard_battery();

}  // namespace dhlab
