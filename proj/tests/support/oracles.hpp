#pragma once

// Brute-force reference computations. They share no code with the library
// beyond vector types, so agreement is evidence rather than tautology.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Compass search: halve the step whenever no coordinate move improves f.
inline Vec pattern_search(const std::function<double(const Vec&)>& f, Vec x, double step,
                          double min_step = 1e-12) {
  double fx = f(x);
  while (step > min_step) {
    bool improved = false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      for (double s : {step, -step}) {
        Vec y = x;
        y(i) += s;
        const double fy = f(y);
        if (fy < fx) {
          x = y;
          fx = fy;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return x;
}

// Best start of a coarse grid over a box, then pattern search.
inline Vec grid_then_search(const std::function<double(const Vec&)>& f, const Vec& lo, const Vec& hi,
                            int per_axis) {
  const Eigen::Index d = lo.size();
  Vec best = lo;
  double fbest = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Vec x(d);
    for (Eigen::Index i = 0; i < d; ++i)
      x(i) = lo(i) + (hi(i) - lo(i)) * idx[static_cast<std::size_t>(i)] / (per_axis - 1);
    const double fx = f(x);
    if (fx < fbest) {
      fbest = fx;
      best = x;
    }
    Eigen::Index k = 0;
    while (k < d && ++idx[static_cast<std::size_t>(k)] == per_axis) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == d) break;
  }
  return pattern_search(f, best, (hi - lo).maxCoeff() / per_axis);
}

// Nearest PSD 2x2 matrix to x (Frobenius) over factors L L^T, L lower triangular.
inline Mat psd2_nearest(const Mat& x) {
  auto make = [](const Vec& p) {
    Mat l(2, 2);
    l << p(0), 0.0, p(1), p(2);
    return Mat(l * l.transpose());
  };
  const double r = 2.0 * std::sqrt(std::max(1.0, x.norm()));
  const Vec p = grid_then_search([&](const Vec& q) { return (make(q) - x).squaredNorm(); },
                                 Vec::Constant(3, -r), Vec::Constant(3, r), 21);
  return make(p);
}

// Nearest point of {(v, t) : ||v|| <= t} in R^3 by searching the boundary
// parameterization (r cos a, r sin a, r), r >= 0, together with the interior.
inline Vec soc3_nearest(const Vec& x) {
  if (std::hypot(x(0), x(1)) <= x(2)) return x;
  auto pt = [](const Vec& q) {
    const double r = std::max(q(0), 0.0);
    return Vec((Vec(3) << r * std::cos(q(1)), r * std::sin(q(1)), r).finished());
  };
  const double r = 2.0 * x.norm() + 1.0;
  const Vec lo = (Vec(2) << 0.0, -std::numbers::pi).finished();
  const Vec hi = (Vec(2) << r, std::numbers::pi).finished();
  return pt(grid_then_search([&](const Vec& q) { return (pt(q) - x).squaredNorm(); }, lo, hi, 61));
}

// Nearest doubly nonnegative 2x2 matrix. Candidates: x itself when feasible,
// the clipped diagonal, and the best rank-one v v^T with v >= 0 (angle grid
// refined by golden section). For unit u the best multiple of u u^T is
// max(0, u^T x u) u u^T.
inline Mat dnn2_nearest(const Mat& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(x);
  if (es.eigenvalues().minCoeff() >= 0.0 && x(0, 1) >= 0.0) return x;
  Mat best = Mat::Zero(2, 2);
  best(0, 0) = std::max(x(0, 0), 0.0);
  best(1, 1) = std::max(x(1, 1), 0.0);
  double fbest = (best - x).squaredNorm();
  auto rank_one = [&](double th) {
    const Vec u = (Vec(2) << std::cos(th), std::sin(th)).finished();
    const double c = std::max(0.0, u.dot(x * u));
    return Mat(c * u * u.transpose());
  };
  auto f = [&](double th) { return (rank_one(th) - x).squaredNorm(); };
  const int n = 2000;
  const double h = 0.5 * std::numbers::pi / n;
  for (int i = 0; i <= n; ++i) {
    double a = std::max(0.0, (i - 1) * h), b = std::min(0.5 * std::numbers::pi, (i + 1) * h);
    if (f(i * h) > f(a) || f(i * h) > f(b)) continue;
    const double g = 0.6180339887498949;
    for (int k = 0; k < 200; ++k) {
      const double c = b - g * (b - a), d = a + g * (b - a);
      if (f(c) < f(d)) b = d; else a = c;
    }
    const double th = 0.5 * (a + b);
    if (f(th) < fbest) {
      fbest = f(th);
      best = rank_one(th);
    }
  }
  return best;
}

}  // namespace oracle
