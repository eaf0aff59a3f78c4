#pragma once

// One-dimensional quadrature: Gauss-Legendre rules, adaptive Gauss-Kronrod
// (7/15) on finite intervals, and a semi-infinite driver used for every
// integral over [c,1) after the substitution t = 1 - exp(-u).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <vector>

namespace dhlab::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

/// n-point Gauss-Legendre rule mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

/// Composite rule: `per_panel` Gauss-Legendre nodes on each [edges[i], edges[i+1]].
Rule composite_gauss_legendre(std::span<const double> edges, int per_panel);

struct Tolerance {
  double absolute = 1e-10;
  double relative = 1e-12;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

namespace detail {

// Kronrod 15-point abscissae on [0,1] (symmetric), the odd-indexed ones are the
// 7-point Gauss nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const T sum = f(center - dx) + f(center + dx);
    kronrod += sum * kWgk[j];
    if (j % 2 == 1) gauss += sum * kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod on [a, b]. Converged when the summed
/// error estimate is below max(absolute, relative*|I|).
template <class F>
auto adaptive(F&& f, double a, double b, Tolerance tol = {}, int max_segments = 4000)
    -> Result<std::invoke_result_t<F&, double>> {
  using T = std::invoke_result_t<F&, double>;
  Result<T> out;
  if (!(b > a)) return out;

  std::priority_queue<detail::Segment<T>> heap;
  auto first = detail::gauss_kronrod_15<T>(f, a, b);
  out.evaluations = 15;
  T total = first.value;
  double total_error = first.error;
  heap.push(first);

  auto target = [&] {
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(total);
    return std::max({tol.absolute, tol.relative * std::abs(total), floor});
  };

  while (total_error > target()) {
    if (static_cast<int>(heap.size()) >= max_segments) {
      out.converged = false;
      break;
    }
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;
      break;
    }
    heap.pop();
    auto left = detail::gauss_kronrod_15<T>(f, worst.a, mid);
    auto right = detail::gauss_kronrod_15<T>(f, mid, worst.b);
    out.evaluations += 30;
    total += (left.value + right.value) - worst.value;
    total_error += (left.error + right.error) - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Resum to shed the drift of the running updates.
  T sum{};
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = err;
  return out;
}

/// Integral over [a, inf) by adaptive panels of doubling length. Stops once a
/// panel and the integrand at its right end both fall below `cutoff` times the
/// running integral.
template <class F>
auto adaptive_semi_infinite(F&& f, double a, Tolerance tol = {}, double cutoff = 1e-16,
                            int max_panels = 64)
    -> Result<std::invoke_result_t<F&, double>> {
  using T = std::invoke_result_t<F&, double>;
  Result<T> out;
  out.converged = false;
  double x = a;
  double length = 1.0;
  T running{};
  for (int panel = 0; panel < max_panels; ++panel) {
    Tolerance local = tol;
    local.absolute = tol.absolute / std::ldexp(1.0, panel + 1);
    auto seg = adaptive(f, x, x + length, local);
    out.evaluations += seg.evaluations + 1;
    out.error += seg.error;
    running += seg.value;
    x += length;
    const double scale = std::abs(running);
    const T end_value = f(x);
    if (!seg.converged) {
      out.value = running;
      return out;
    }
    if (scale > 0.0) {
      if (std::abs(seg.value) <= cutoff * scale && std::abs(end_value) <= cutoff * scale) {
        out.converged = true;
        break;
      }
    } else if (x - a > 1e6) {
      // Integrand vanished numerically everywhere we looked.
      out.converged = true;
      break;
    }
    length *= 2.0;
  }
  out.value = running;
  return out;
}

}  // namespace dhlab::quad
