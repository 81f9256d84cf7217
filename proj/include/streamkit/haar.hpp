#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "streamkit/errors.hpp"

namespace streamkit {

/// Haar wavelet transform of a power-of-two-length vector in the
/// unnormalized averaging convention: coefficients[0] is the overall
/// average, then detail coefficients coarsest level first, each detail
/// being (first - second)/2 of an adjacent pair at its level.
///
/// Layout: index 0 = average; index i >= 1 sits at level floor(log2(i))
/// (0 = coarsest) and affects n / 2^level input positions. Because the
/// coefficients are unnormalized, the squared L2 error of dropping a
/// coefficient c is support(c) * c^2, and drops are orthogonal, so
/// ||A - A~||^2 = sum over dropped of support * c^2.
struct HaarTransform {
  std::vector<double> coefficients;

  std::size_t size() const noexcept { return coefficients.size(); }
};

/// Number of input positions a coefficient influences.
inline std::size_t haar_support(std::size_t index, std::size_t n) {
  if (index == 0) return n;
  std::size_t level = 0;
  while ((std::size_t{2} << level) <= index) ++level;
  return n >> level;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline HaarTransform haar_forward(const std::vector<double>& values) {
  if (!is_power_of_two(values.size()))
    throw Error("shape", "input length must be a power of two");
  std::size_t n = values.size();
  std::vector<double> coeffs(n);
  std::vector<double> current = values;
  std::size_t width = n;
  while (width > 1) {
    std::size_t half = width / 2;
    std::vector<double> averages(half), details(half);
    for (std::size_t i = 0; i < half; ++i) {
      averages[i] = (current[2 * i] + current[2 * i + 1]) / 2.0;
      details[i] = (current[2 * i] - current[2 * i + 1]) / 2.0;
    }
    std::copy(details.begin(), details.end(), coeffs.begin() + static_cast<std::ptrdiff_t>(half));
    current = std::move(averages);
    width = half;
  }
  coeffs[0] = current[0];
  return HaarTransform{std::move(coeffs)};
}

inline std::vector<double> haar_inverse(const HaarTransform& transform) {
  std::size_t n = transform.size();
  if (!is_power_of_two(n)) throw Error("shape", "coefficient count must be a power of two");
  std::vector<double> current{transform.coefficients[0]};
  std::size_t width = 1;
  while (width < n) {
    std::vector<double> expanded(width * 2);
    for (std::size_t i = 0; i < width; ++i) {
      double detail = transform.coefficients[width + i];
      expanded[2 * i] = current[i] + detail;
      expanded[2 * i + 1] = current[i] - detail;
    }
    current = std::move(expanded);
    width *= 2;
  }
  return current;
}

/// Keep the average plus the keep-1 largest-magnitude details (ties to the
/// lower index), zeroing the rest.
inline HaarTransform haar_threshold(const HaarTransform& transform, std::size_t keep) {
  std::size_t n = transform.size();
  if (keep < 1) throw Error("validation", "must keep at least one coefficient");
  keep = std::min(keep, n);
  std::vector<std::size_t> detail_indices(n > 0 ? n - 1 : 0);
  std::iota(detail_indices.begin(), detail_indices.end(), 1);
  std::stable_sort(detail_indices.begin(), detail_indices.end(),
                   [&](std::size_t a, std::size_t b) {
                     double ma = std::abs(transform.coefficients[a]);
                     double mb = std::abs(transform.coefficients[b]);
                     if (ma != mb) return ma > mb;
                     return a < b;
                   });
  HaarTransform out{std::vector<double>(n, 0.0)};
  out.coefficients[0] = transform.coefficients[0];
  for (std::size_t i = 0; i + 1 < keep && i < detail_indices.size(); ++i)
    out.coefficients[detail_indices[i]] = transform.coefficients[detail_indices[i]];
  return out;
}

inline std::size_t haar_kept_count(const HaarTransform& t) {
  std::size_t kept = 1;  // the average always survives thresholding
  for (std::size_t i = 1; i < t.size(); ++i) kept += (t.coefficients[i] != 0.0);
  return kept;
}

// Reconstruction error metrics over (original, approximation) pairs.
// Measurement only; nothing optimizes these except the L2 rule above.

inline double l2_error(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("shape", "vectors differ in length");
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum);
}

inline double max_abs_error(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("shape", "vectors differ in length");
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

/// Maximum relative error; positions where the reference is zero are
/// skipped (the ratio is undefined there).
inline double max_rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("shape", "vectors differ in length");
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(a[i]));
  return worst;
}

inline double lp_error(const std::vector<double>& a, const std::vector<double>& b, double p) {
  if (a.size() != b.size()) throw Error("shape", "vectors differ in length");
  if (p <= 0) throw Error("validation", "norm order must be positive");
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::pow(std::abs(a[i] - b[i]), p);
  return std::pow(sum, 1.0 / p);
}

inline double weighted_lp_error(const std::vector<double>& a, const std::vector<double>& b,
                                const std::vector<double>& weights, double p) {
  if (a.size() != b.size() || a.size() != weights.size())
    throw Error("shape", "vectors differ in length");
  if (p <= 0) throw Error("validation", "norm order must be positive");
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += weights[i] * std::pow(std::abs(a[i] - b[i]), p);
  return std::pow(sum, 1.0 / p);
}

}  // namespace streamkit
