#include "dhlab/function_space.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "dhlab/errors.hpp"
#include "dhlab/measure.hpp"

namespace dhlab {
namespace {

constexpr const char* kModule = "function_space";

double parse_real(std::string_view text, const char* op) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ParseError(kModule, op, "not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

void check_b(double b, const char* op) {
  if (!(b > 0.0 && b < 1.0)) {
    throw PreconditionError(kModule, op, "family parameter b must lie in (0,1): " + format_number(b));
  }
}

}  // namespace

TaylorSeries::TaylorSeries(std::vector<cd> coefficients, ClosedForm closed_form, bool truncated)
    : coefficients_(std::move(coefficients)), closed_form_(closed_form), truncated_(truncated) {
  if (coefficients_.empty()) coefficients_.push_back(cd{0.0});
  for (const cd& c : coefficients_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw PreconditionError(kModule, "TaylorSeries", "coefficients must be finite");
    }
  }
}

bool TaylorSeries::certified_at(double r) const {
  if (has_closed_form() || !truncated_) return true;
  double largest = 0.0;
  for (const cd& c : coefficients_) largest = std::max(largest, std::abs(c));
  const int n = order();
  return std::abs(coefficients_[n]) * std::pow(r, n) * (n + 1) <= 1e-10 * std::max(largest, 1e-300);
}

MobiusParam::MobiusParam(cd a) : a_(a) {
  if (!(std::abs(a) < 1.0)) throw PreconditionError(kModule, "MobiusParam", "|a| must be < 1");
}

cd evaluate_closed_form(const ClosedForm& form, cd z) {
  if (const auto* f = std::get_if<LogFamily>(&form)) {
    return 1.0 - std::log(1.0 - f->b * z);
  }
  if (const auto* f = std::get_if<CauchyFamily>(&form)) {
    return f->prefactor * std::pow(1.0 - f->b * z, -f->exponent);
  }
  return cd{0.0};
}

ClosedForm differentiate_closed_form(const ClosedForm& form) {
  if (const auto* f = std::get_if<LogFamily>(&form)) {
    return CauchyFamily{f->b, 1.0, f->b};
  }
  if (const auto* f = std::get_if<CauchyFamily>(&form)) {
    return CauchyFamily{f->b, f->exponent + 1.0, f->prefactor * f->exponent * f->b};
  }
  return std::monostate{};
}

cd evaluate_series(const TaylorSeries& f, cd z) {
  const auto c = f.coefficients();
  cd acc{0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

cd evaluate(const TaylorSeries& f, cd z) {
  if (!(std::abs(z) < 1.0)) throw PreconditionError(kModule, "evaluate", "|z| must be < 1");
  if (f.has_closed_form()) return evaluate_closed_form(f.closed_form(), z);
  return evaluate_series(f, z);
}

cd evaluate_on_interval(const TaylorSeries& f, double t) {
  if (f.has_closed_form()) return evaluate_closed_form(f.closed_form(), cd{t});
  return evaluate_series(f, cd{t});
}

cd boundary_value(const TaylorSeries& f, double theta) {
  const cd z = std::polar(1.0, theta);
  if (f.has_closed_form()) return evaluate_closed_form(f.closed_form(), z);
  if (f.truncated()) {
    throw PreconditionError(kModule, "boundary_value",
                            "truncated series without closed form has no certified boundary values");
  }
  return evaluate_series(f, z);
}

TaylorSeries derivative(const TaylorSeries& f) {
  const auto c = f.coefficients();
  std::vector<cd> d;
  if (c.size() <= 1) {
    d.push_back(cd{0.0});
  } else {
    d.resize(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  }
  return TaylorSeries(std::move(d), differentiate_closed_form(f.closed_form()), f.truncated());
}

TaylorSeries make_polynomial(std::vector<cd> coefficients) {
  return TaylorSeries(std::move(coefficients));
}

TaylorSeries make_f_log(double b, int order) {
  check_b(b, "make_f_log");
  if (order < 0) throw PreconditionError(kModule, "make_f_log", "order must be >= 0");
  std::vector<cd> c(order + 1);
  c[0] = 1.0;
  double power = 1.0;
  for (int k = 1; k <= order; ++k) {
    power *= b;
    c[k] = power / k;
  }
  return TaylorSeries(std::move(c), LogFamily{b});
}

double rising_binomial(double exponent, int k) {
  if (k == 0) return 1.0;
  if (exponent == 0.0) return 0.0;
  if (exponent > 0.0) {
    return std::exp(std::lgamma(k + exponent) - std::lgamma(exponent) - std::lgamma(k + 1.0));
  }
  // Gamma(e) changes sign for e < 0, so fall back to the running product.
  double value = 1.0;
  for (int j = 0; j < k; ++j) value *= (exponent + j) / (j + 1.0);
  return value;
}

TaylorSeries make_cauchy_family(double b, double exponent, double prefactor, int order) {
  check_b(b, "make_cauchy_family");
  if (order < 0) throw PreconditionError(kModule, "make_cauchy_family", "order must be >= 0");
  if (!std::isfinite(exponent) || !std::isfinite(prefactor)) {
    throw PreconditionError(kModule, "make_cauchy_family", "parameters must be finite");
  }
  std::vector<cd> c(order + 1);
  if (exponent >= 0.0) {
    const double log_b = std::log(b);
    for (int k = 0; k <= order; ++k) {
      c[k] = prefactor * rising_binomial(exponent, k) * std::exp(k * log_b);
    }
  } else {
    double term = prefactor;
    for (int k = 0; k <= order; ++k) {
      c[k] = term;
      term *= (k + exponent) / (k + 1.0) * b;
    }
  }
  return TaylorSeries(std::move(c), CauchyFamily{b, exponent, prefactor});
}

TaylorSeries make_g_cauchy(double b, double exponent, int order) {
  check_b(b, "make_g_cauchy");
  if (!(exponent >= 1.0)) {
    throw PreconditionError(kModule, "make_g_cauchy", "exponent must be >= 1");
  }
  return make_cauchy_family(b, exponent, 1.0 - b * b, order);
}

cd mobius(const MobiusParam& a, cd z) {
  const cd av = a.value();
  return (av - z) / (1.0 - std::conj(av) * z);
}

TaylorSeries parse_function(std::string_view text, int order) {
  constexpr const char* op = "parse_function";
  auto key_values = [&](std::string_view body) {
    std::map<std::string, double, std::less<>> kv;
    while (true) {
      const auto comma = body.find(',');
      const std::string_view item = body.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(kModule, op, "expected key=value but got '" + std::string(item) + "'");
      }
      std::string key(item.substr(0, eq));
      if (kv.count(key)) throw ParseError(kModule, op, "duplicate key '" + key + "'");
      kv[key] = parse_real(item.substr(eq + 1), op);
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    return kv;
  };
  auto wrap = [&](auto&& build) -> TaylorSeries {
    try {
      return build();
    } catch (const PreconditionError& e) {
      throw ParseError(kModule, op, e.what());
    }
  };

  if (text.starts_with("flog:")) {
    auto kv = key_values(text.substr(5));
    if (kv.size() != 1 || !kv.count("b")) throw ParseError(kModule, op, "flog takes exactly b=<b>");
    return wrap([&] { return make_f_log(kv["b"], order); });
  }
  if (text.starts_with("cauchy:")) {
    auto kv = key_values(text.substr(7));
    if (kv.size() != 2 || !kv.count("b") || !kv.count("e")) {
      throw ParseError(kModule, op, "cauchy takes exactly b=<b>,e=<e>");
    }
    return wrap([&] { return make_g_cauchy(kv["b"], kv["e"], order); });
  }
  if (text.starts_with("poly:")) {
    std::string_view body = text.substr(5);
    std::vector<cd> coefficients;
    while (true) {
      const auto comma = body.find(',');
      coefficients.emplace_back(parse_real(body.substr(0, comma), op));
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    return make_polynomial(std::move(coefficients));
  }
  throw ParseError(kModule, op,
                   "function spec must start with flog:, cauchy: or poly: but got '" +
                       std::string(text) + "'");
}

std::string describe(const TaylorSeries& f) {
  if (const auto* g = std::get_if<LogFamily>(&f.closed_form())) {
    return "flog:b=" + format_number(g->b);
  }
  if (const auto* g = std::get_if<CauchyFamily>(&f.closed_form())) {
    if (std::abs(g->prefactor - (1.0 - g->b * g->b)) <= 1e-15) {
      return "cauchy:b=" + format_number(g->b) + ",e=" + format_number(g->exponent);
    }
    return "cauchy_family:b=" + format_number(g->b) + ",e=" + format_number(g->exponent) +
           ",c=" + format_number(g->prefactor);
  }
  std::string s = f.truncated() ? "series:" : "poly:";
  const auto c = f.coefficients();
  const std::size_t shown = std::min<std::size_t>(c.size(), 8);
  for (std::size_t k = 0; k < shown; ++k) {
    if (k) s += ',';
    s += format_number(c[k].real());
    if (c[k].imag() != 0.0) s += (c[k].imag() > 0 ? "+" : "") + format_number(c[k].imag()) + "i";
  }
  if (shown < c.size()) s += ",...";
  return s;
}

}  // namespace dhlab
