#pragma once

// Analytic functions on the unit disk as truncated Taylor series, with an
// optional closed form for the test families used throughout.

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dhlab {

using cd = std::complex<double>;

inline constexpr int kDefaultTruncation = 512;

/// log(e / (1 - b z))
struct LogFamily {
  double b;
};

/// prefactor * (1 - b z)^(-exponent)
struct CauchyFamily {
  double b;
  double exponent;
  double prefactor;
};

using ClosedForm = std::variant<std::monostate, LogFamily, CauchyFamily>;

class TaylorSeries {
 public:
  TaylorSeries() : coefficients_{cd{0.0}} {}
  explicit TaylorSeries(std::vector<cd> coefficients, ClosedForm closed_form = {},
                        bool truncated = false);

  std::span<const cd> coefficients() const noexcept { return coefficients_; }
  int order() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
  const ClosedForm& closed_form() const noexcept { return closed_form_; }
  bool has_closed_form() const noexcept { return !std::holds_alternative<std::monostate>(closed_form_); }

  /// True when the coefficients were cut from an infinite expansion that has
  /// no closed form here; false for exact polynomials.
  bool truncated() const noexcept { return truncated_; }

  cd coefficient(int k) const { return k <= order() ? coefficients_[k] : cd{0.0}; }

  /// The function value is exactly representable at radius r: closed form,
  /// exact polynomial, or a truncation whose last term is negligible there.
  bool certified_at(double r) const;

 private:
  std::vector<cd> coefficients_;
  ClosedForm closed_form_;
  bool truncated_ = false;
};

class MobiusParam {
 public:
  explicit MobiusParam(cd a);
  cd value() const noexcept { return a_; }

 private:
  cd a_;
};

/// Value at |z| < 1; closed form when available, Horner otherwise.
cd evaluate(const TaylorSeries& f, cd z);

/// Horner on the stored coefficients, ignoring any closed form.
cd evaluate_series(const TaylorSeries& f, cd z);

/// Value on [0,1] for the integrands over the support of a measure. t = 1 is
/// accepted because every family here is continuous up to it.
cd evaluate_on_interval(const TaylorSeries& f, double t);

/// Boundary value f(e^{i theta}); requires a closed form or an exact polynomial.
cd boundary_value(const TaylorSeries& f, double theta);

TaylorSeries derivative(const TaylorSeries& f);

/// Closed-form value of a family (no truncation error).
cd evaluate_closed_form(const ClosedForm& form, cd z);
ClosedForm differentiate_closed_form(const ClosedForm& form);

TaylorSeries make_polynomial(std::vector<cd> coefficients);

/// log(e/(1-bz)): a_0 = 1, a_k = b^k / k.
TaylorSeries make_f_log(double b, int order = kDefaultTruncation);

/// (1-b^2)/(1-bz)^exponent with exponent >= 1.
TaylorSeries make_g_cauchy(double b, double exponent, int order = kDefaultTruncation);

/// prefactor * (1-bz)^(-exponent) for any real exponent.
TaylorSeries make_cauchy_family(double b, double exponent, double prefactor,
                                int order = kDefaultTruncation);

/// Generalised binomial coefficient C(k+e-1, k), computed through lgamma.
double rising_binomial(double exponent, int k);

/// (a - z) / (1 - conj(a) z)
cd mobius(const MobiusParam& a, cd z);

/// Strict parser for `flog:b=<b>`, `cauchy:b=<b>,e=<e>`, `poly:a0,a1,...`.
TaylorSeries parse_function(std::string_view text, int order = kDefaultTruncation);

/// Canonical label for reports (round-trips through parse_function for the families).
std::string describe(const TaylorSeries& f);

}  // namespace dhlab
