#pragma once

#include <vector>

#include "conelab/linalg.hpp"

namespace conelab {

struct MinNormResult {
  Vec point;                   // nearest point of conv(columns) to x
  std::vector<Index> support;  // indices with positive weight
  Vec weights;                 // aligned with support, sums to 1
  double gap = 0.0;            // ||y||^2 - min_i <q_i, y>, bounds ||y - y*||^2
  int iterations = 0;
};

// Wolfe's minimum-norm-point method on the translated points q_i = p_i - x.
// `warm` seeds the corral; indices that are out of range are ignored.
MinNormResult min_norm_point(const Mat& points, const Vec& x,
                             const std::vector<Index>& warm = {}, int max_iter = 10000);

struct NnlsResult {
  Vec coefficients;            // length = columns of A
  std::vector<Index> passive;  // indices with positive coefficient
  int iterations = 0;
};

// Lawson-Hanson active set method for min ||A c - b|| subject to c >= 0.
NnlsResult nnls(const Mat& a, const Vec& b, const std::vector<Index>& warm = {},
                int max_iter = 10000);

// Affine minimizer of ||sum_i c_i q_i|| subject to sum c = 1 (columns q_i).
Vec affine_min_norm_weights(const Mat& q);

// Root of a nondecreasing function on [lo, hi] by bisection; f(lo) <= 0 <= f(hi).
template <class F>
double bisect_increasing(F&& f, double lo, double hi, int iters = 200) {
  for (int i = 0; i < iters && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_section_min(F&& f, double lo, double hi, int iters = 200) {
  const double g = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace conelab
