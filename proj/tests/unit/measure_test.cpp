#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <random>

#include "dhlab/measure.hpp"

using namespace dhlab;

namespace {

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

// Independent route: tanh-sinh directly in t on [0,1].
double oracle_moment(double gamma, double delta, int n) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(
      [&](double t, double tc) {
        const double one_minus_t = t > 0.5 ? tc : 1.0 - t;
        if (one_minus_t <= 0.0) return 0.0;
        return std::pow(t, n) * std::pow(one_minus_t, gamma) * std::pow(1.0 - std::log(one_minus_t), -delta);
      },
      0.0, 1.0);
}

}  // namespace

TEST(Moment, WorkedExamples) {
  EXPECT_DOUBLE_EQ(moment(MeasureModel::atomic({{0.5, 1.0}}), 3), 0.125);
  EXPECT_NEAR(moment(MeasureModel::power_log(0, 0), 4), 0.2, 1e-12);
  EXPECT_NEAR(moment(MeasureModel::power_log(1, 0), 2), 1.0 / 12.0, 1e-12);
}

TEST(Moment, BetaOracleForPureDensities) {
  for (double gamma : {-0.5, 0.0, 0.5, 1.0, 2.0, 3.5}) {
    const auto m = MeasureModel::power_log(gamma, 0.0, 1.7);
    for (int n = 0; n <= 40; ++n) {
      EXPECT_NEAR(moment(m, n), 1.7 * beta_fn(n + 1, gamma + 1), 1e-9) << gamma << " " << n;
    }
  }
}

TEST(Moment, LogWeightedAgainstTanhSinh) {
  for (double delta : {-1.0, 1.0, 2.0}) {
    const auto m = MeasureModel::power_log(1.0, delta);
    for (int n : {0, 1, 5, 20}) {
      EXPECT_NEAR(moment(m, n), oracle_moment(1.0, delta, n), 1e-9) << delta << " " << n;
    }
  }
}

TEST(Moment, SequenceIsNonincreasingAndHankelPsd) {
  for (const auto& m : {MeasureModel::atomic({{0.2, 0.3}, {0.9, 1.0}}), MeasureModel::power_log(0.5, 1.0),
                        MeasureModel::power_log(2.0, -1.0)}) {
    const auto seq = moments(m, 50);
    for (int n = 0; n < 50; ++n) {
      EXPECT_GE(seq[n], 0.0);
      EXPECT_LE(seq[n + 1], seq[n] + seq.absolute_tolerance);
    }
    // 2x2 and 3x3 leading minors of (mu_{i+j}) on windows starting at n.
    for (int n = 0; n < 20; ++n) {
      const double a = seq[n], b = seq[n + 1], c = seq[n + 2], d = seq[n + 3], e = seq[n + 4];
      EXPECT_GE(a * c - b * b, -1e-12);
      const double det3 = a * (c * e - d * d) - b * (b * e - d * c) + c * (b * d - c * c);
      EXPECT_GE(det3, -1e-12);
    }
  }
}

TEST(Moment, AtomicExactness) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> loc(0.0, 0.999), w(0.1, 2.0);
  std::vector<Atom> atoms;
  for (int i = 0; i < 6; ++i) atoms.push_back({loc(rng), w(rng)});
  const auto m = MeasureModel::atomic(atoms);
  for (int n = 0; n < 30; ++n) {
    double direct = 0.0;
    for (const auto& a : atoms) direct += a.weight * std::pow(a.location, n);
    EXPECT_EQ(moment(m, n), direct);
  }
  for (double t : {0.0, 0.3, 0.77}) {
    double direct = 0.0;
    for (const auto& a : atoms)
      if (a.location >= t) direct += a.weight;
    EXPECT_EQ(tail_mass(m, t), direct);
  }
}

TEST(TailMass, WorkedExamples) {
  const auto atom = MeasureModel::atomic({{0.5, 1.0}});
  EXPECT_EQ(tail_mass(atom, 0.7), 0.0);
  EXPECT_EQ(tail_mass(atom, 0.3), 1.0);
  EXPECT_NEAR(tail_mass(MeasureModel::power_log(1, 0, 2), 0.9), 0.01, 1e-15);
}

TEST(TailMass, QuadratureMatchesOracleDeepIntoTheTail) {
  const auto m = MeasureModel::power_log(1.0, 2.0);
  boost::math::quadrature::tanh_sinh<double> ts;
  for (int k : {1, 5, 10, 20, 30}) {
    const double h = std::ldexp(1.0, -k);
    // In u: e^{-2u}(1+u)^{-2} on [k log 2, inf).
    const double oracle = ts.integrate(
        [](double u) { return std::exp(-2.0 * u) / ((1.0 + u) * (1.0 + u)); },
        k * std::log(2.0), std::numeric_limits<double>::infinity());
    EXPECT_NEAR(tail_mass(m, 1.0 - h) / oracle, 1.0, 1e-7) << k;
  }
}

TEST(Weighting, LogAndPower) {
  const auto lebesgue_log = weight_by_log(MeasureModel::power_log(0, 1));
  EXPECT_EQ(lebesgue_log.gamma(), 0.0);
  EXPECT_EQ(lebesgue_log.delta(), 0.0);
  const auto atom = weight_by_log(MeasureModel::atomic({{0.5, 1.0}}));
  EXPECT_NEAR(atom.atoms()[0].weight, std::log(2.0 * std::exp(1.0)), 1e-15);
  // int log(e/(1-t)) dt = 2
  EXPECT_NEAR(moment(weight_by_log(MeasureModel::power_log(0, 0)), 0), 2.0, 1e-10);

  EXPECT_EQ(weight_by_power(MeasureModel::power_log(1, 0), -0.5).gamma(), 0.5);
  EXPECT_NEAR(weight_by_power(MeasureModel::atomic({{0.9, 1.0}}), 1).atoms()[0].weight, 0.1, 1e-15);
  EXPECT_THROW(weight_by_power(MeasureModel::power_log(0, 0), -1), PreconditionError);
}

TEST(Weighting, PowerComposition) {
  for (const auto& m : {MeasureModel::power_log(1.5, 1.0), MeasureModel::atomic({{0.3, 1.0}, {0.8, 0.5}})}) {
    for (auto [p, q] : {std::pair{-0.5, 0.25}, std::pair{1.0, -1.2}}) {
      const auto a = weight_by_power(weight_by_power(m, p), q);
      const auto b = weight_by_power(m, p + q);
      for (int n : {0, 3, 10}) EXPECT_NEAR(moment(a, n), moment(b, n), 1e-10);
    }
  }
}

TEST(Carleson, WorkedExamples) {
  auto atom = carleson_classify(MeasureModel::atomic({{0.9, 1.0}}), 2, 0);
  EXPECT_EQ(atom.verdict, CarlesonVerdict::Bounded);
  EXPECT_NEAR(atom.sup_constant, 100.0, 1e-9);
  EXPECT_EQ(atom.argmax_t, 0.9);

  auto diverging = carleson_classify(MeasureModel::power_log(1, 0), 2, 1);
  EXPECT_EQ(diverging.verdict, CarlesonVerdict::DivergesAtOne);
  EXPECT_NEAR(diverging.slope_estimate, 2.0, 1e-9);

  auto bounded = carleson_classify(MeasureModel::power_log(1, 2), 2, 1);
  EXPECT_EQ(bounded.verdict, CarlesonVerdict::Bounded);
}

TEST(Carleson, SupDominatesEverySample) {
  for (const auto& m : {MeasureModel::power_log(0.5, 0), MeasureModel::power_log(2, 1),
                        MeasureModel::atomic({{0.1, 1}, {0.95, 2}})}) {
    const auto r = carleson_classify(m, 1.5, 0.5);
    for (const auto& s : r.samples) EXPECT_GE(r.sup_constant, s.ratio);
  }
}

TEST(Carleson, SmallerExponentIsWeaker) {
  for (const auto& m : {MeasureModel::power_log(1, 0), MeasureModel::power_log(1.5, 2),
                        MeasureModel::power_log(0.5, -1), MeasureModel::atomic({{0.5, 1}})}) {
    for (double s : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
      if (carleson_classify(m, s, 0).verdict != CarlesonVerdict::Bounded) continue;
      for (double smaller : {0.25 * s, 0.5 * s, 0.9 * s}) {
        EXPECT_EQ(carleson_classify(m, smaller, 0).verdict, CarlesonVerdict::Bounded) << m.spec() << " " << s;
      }
    }
  }
}

TEST(CarlesonIntegral, PointMassAtOrigin) {
  const auto radii = radial_ladder(12);
  auto r = carleson_integral_test(MeasureModel::atomic({{0.0, 1.0}}), 2.0, 0.5, 1.0, radii);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_DOUBLE_EQ(r.sup, 1.0);
  EXPECT_EQ(r.argmax_radius, 0.0);
}

TEST(CarlesonIntegral, AgreesWithClassifier) {
  // gamma-Carleson density: gamma = 2 with a (1-t)^1 density.
  const auto carleson = MeasureModel::power_log(1, 0);
  const auto coarse = carleson_integral_test(carleson, 2.0, 0.5, 1.0, radial_ladder(15));
  const auto fine = carleson_integral_test(carleson, 2.0, 0.5, 1.0, radial_ladder(30));
  EXPECT_TRUE(fine.failures.empty());
  EXPECT_LT(std::abs(fine.sup / coarse.sup - 1.0), 1e-3);
  EXPECT_EQ(carleson_classify(carleson, 2.0, 0).verdict, CarlesonVerdict::Bounded);

  const auto not_carleson = MeasureModel::power_log(0.5, 0);
  EXPECT_EQ(carleson_classify(not_carleson, 2.0, 0).verdict, CarlesonVerdict::DivergesAtOne);
  const auto a = carleson_integral_test(not_carleson, 2.0, 0.5, 1.0, radial_ladder(10));
  const auto b = carleson_integral_test(not_carleson, 2.0, 0.5, 1.0, radial_ladder(20));
  EXPECT_GT(b.sup, 10.0 * a.sup);
}

TEST(CarlesonIntegral, NonIntegrableWeightIsReportedPerRadius) {
  const auto r = carleson_integral_test(MeasureModel::power_log(0, 0), 2.0, 1.5, 1.0, radial_ladder(3));
  EXPECT_EQ(r.failures.size(), 4u);
  EXPECT_TRUE(std::isinf(r.sup));
}

TEST(Parse, AcceptsCanonicalForms) {
  const auto a = parse_measure("atomic:(0.5,1);(0.9,2.5)");
  ASSERT_EQ(a.atoms().size(), 2u);
  EXPECT_EQ(a.atoms()[1].weight, 2.5);
  const auto d = parse_measure("density:gamma=1,delta=2");
  EXPECT_EQ(d.scale(), 1.0);
  EXPECT_EQ(parse_measure(d.spec()).delta(), 2.0);
  EXPECT_EQ(parse_measure(a.spec()).spec(), a.spec());
}

TEST(Parse, RejectsMalformedInput) {
  for (const char* bad : {"", "atomic:", "atomic:(0.5,1);", "atomic:(1.0,1)", "atomic:(0.5,-1)", "atomic:(0.5)",
                          "atomic:0.5,1", "density:gamma=1", "density:gamma=1,delta=0,gamma=2",
                          "density:gamma=-1,delta=0", "density:gamma=1,delta=x", "density:gamma=1,delta=0,foo=1",
                          "lebesgue", "density:gamma=1,delta=0,scale=0"}) {
    EXPECT_THROW(parse_measure(bad), ParseError) << bad;
  }
}
