#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "roadcov/errors.hpp"

namespace roadcov {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-6;
  int max_intervals = 4000;
  std::string label = "integral";
};

/// Value and (componentwise) error estimate of an adaptive integral.
template <class Value>
struct QuadratureResult {
  Value value;
  Value error;
  int intervals = 0;
  int evaluations = 0;
};

namespace detail {

inline double abs_of(double x) { return std::abs(x); }
template <class Derived>
auto abs_of(const Eigen::ArrayBase<Derived>& x) {
  return x.abs().eval();
}

inline double zero_like(double) { return 0.0; }
template <class Derived>
auto zero_like(const Eigen::ArrayBase<Derived>& x) {
  using Plain = typename Derived::PlainObject;
  return Plain::Zero(x.rows(), x.cols()).eval();
}

// max over components of err / max(abs_tol, rel_tol * |value|)
inline double tolerance_ratio(double err, double value, const QuadratureOptions& o) {
  const double tol = std::max(o.abs_tol, o.rel_tol * std::abs(value));
  if (err == 0.0) return 0.0;
  return tol > 0.0 ? err / tol : std::numeric_limits<double>::infinity();
}
template <class A>
double tolerance_ratio(const Eigen::ArrayBase<A>& err, const Eigen::ArrayBase<A>& value,
                       const QuadratureOptions& o) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i)
    worst = std::max(worst, tolerance_ratio(err(i), value(i), o));
  return worst;
}

inline bool all_finite(double x) { return std::isfinite(x); }
template <class A>
bool all_finite(const Eigen::ArrayBase<A>& x) {
  return x.allFinite();
}

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class Value>
struct Panel {
  double a, b;
  Value value;
  Value error;
};

template <class F>
auto kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  auto center = f(c);
  using Value = std::decay_t<decltype(abs_of(center))>;
  Value kronrod = center * kKronrodWeights[7];
  Value gauss = center * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    Value pair = f(c - dx);
    pair += f(c + dx);
    kronrod += pair * kKronrodWeights[j];
    if (j % 2 == 1) gauss += pair * kGaussWeights[j / 2];
  }
  Value k = kronrod * h;
  Value err = abs_of(Value(k - gauss * h));
  return Panel<Value>{a, b, k, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) integration over consecutive
/// breakpoints. `f` may return `double` or any fixed-shape Eigen array; the
/// stopping test is applied component by component.
template <class F>
auto integrate(F&& f, const std::vector<double>& breakpoints, const QuadratureOptions& opts = {}) {
  using Panel = decltype(detail::kronrod15(f, 0.0, 1.0));
  using Value = decltype(Panel::value);
  if (breakpoints.size() < 2) throw ParameterError(opts.label + ": need at least two breakpoints");

  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b >= a)) throw ParameterError(opts.label + ": breakpoints must be sorted");
    if (b > a) panels.push_back(detail::kronrod15(f, a, b));
  }
  if (panels.empty()) {
    // degenerate range; shape the zero from a single evaluation
    auto probe = detail::abs_of(f(breakpoints.front()));
    auto zero = detail::zero_like(probe);
    return QuadratureResult<Value>{zero, zero, 0, 1};
  }

  int evaluations = static_cast<int>(panels.size()) * 15;
  while (true) {
    Value total = panels.front().value;
    Value total_err = panels.front().error;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      total += panels[i].value;
      total_err += panels[i].error;
    }
    if (!detail::all_finite(total)) {
      std::ostringstream msg;
      msg << opts.label << ": non-finite integrand on [" << breakpoints.front() << ", "
          << breakpoints.back() << "]";
      throw NumericError(msg.str());
    }
    if (detail::tolerance_ratio(total_err, total, opts) <= 1.0)
      return QuadratureResult<Value>{total, total_err, static_cast<int>(panels.size()), evaluations};

    if (static_cast<int>(panels.size()) >= opts.max_intervals) {
      std::ostringstream msg;
      msg << opts.label << ": no convergence after " << panels.size()
          << " intervals (error/tolerance ratio " << detail::tolerance_ratio(total_err, total, opts)
          << ")";
      throw NumericError(msg.str());
    }

    // bisect the panel contributing the most to the tolerance violation
    std::size_t worst = 0;
    double worst_score = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const double score = detail::tolerance_ratio(panels[i].error, total, opts);
      if (score > worst_score) {
        worst_score = score;
        worst = i;
      }
    }
    const double a = panels[worst].a;
    const double b = panels[worst].b;
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) {
      std::ostringstream msg;
      msg << opts.label << ": interval [" << a << ", " << b << "] can no longer be bisected";
      throw NumericError(msg.str());
    }
    panels[worst] = detail::kronrod15(f, a, mid);
    panels.push_back(detail::kronrod15(f, mid, b));
    evaluations += 30;
  }
}

template <class F>
auto integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  return integrate(std::forward<F>(f), std::vector<double>{a, b}, opts);
}

/// Integral over [a, inf) through x = a + scale * t / (1 - t).
template <class F>
auto integrate_to_infinity(F&& f, double a, double scale, const QuadratureOptions& opts = {}) {
  if (!(scale > 0.0)) throw ParameterError(opts.label + ": scale must be positive");
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + scale * t / one_minus;
    const double jacobian = scale / (one_minus * one_minus);
    auto y = f(x);
    y *= jacobian;
    return y;
  };
  return integrate(mapped, std::vector<double>{0.0, 0.5, 1.0}, opts);
}

}  // namespace roadcov
