#pragma once

// Statistics helpers for the test suites: regularized incomplete gamma,
// chi-square tail probabilities and critical values. Self-contained so the
// oracles stay independent of the library under test.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace testsupport {

inline double gamma_series(double a, double x) {
  double sum = 1.0 / a, term = sum;
  for (int n = 1; n < 1000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_cont_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 1000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

/// Regularized upper incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q domain");
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_cont_fraction(a, x);
}

/// P(chi2_df > x).
inline double chi_square_p_value(double x, double df) {
  return gamma_q(df / 2.0, x / 2.0);
}

/// Smallest x with P(chi2_df > x) <= alpha, by bisection.
inline double chi_square_critical(double df, double alpha) {
  double lo = 0, hi = df + 10.0 * std::sqrt(2.0 * df) + 100.0;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2;
    if (chi_square_p_value(mid, df) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

/// Chi-square statistic of observed counts against uniform expectation.
inline double chi_square_uniform(const std::vector<std::size_t>& counts, double total) {
  double expected = total / static_cast<double>(counts.size());
  double stat = 0;
  for (std::size_t c : counts) {
    double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

inline double mean(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace testsupport
