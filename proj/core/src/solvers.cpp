#include "conelab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conelab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Mat gather(const Mat& m, const std::vector<Index>& idx) {
  Mat out(m.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Index>(k)) = m.col(idx[k]);
  return out;
}

std::vector<Index> clean_indices(const std::vector<Index>& warm, Index n) {
  std::vector<Index> out;
  for (Index i : warm)
    if (i >= 0 && i < n && std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  return out;
}

Vec least_squares(const Mat& a, const Vec& b) {
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
  cod.setThreshold(1e-12);
  return cod.solve(b);
}

}  // namespace

Vec affine_min_norm_weights(const Mat& q) {
  const Index k = q.cols();
  if (k == 1) return Vec::Ones(1);
  const Mat d = q.rightCols(k - 1).colwise() - q.col(0);
  const Vec c = -least_squares(d, q.col(0));
  Vec w(k);
  w(0) = 1.0 - c.sum();
  w.tail(k - 1) = c;
  return w;
}

MinNormResult min_norm_point(const Mat& points, const Vec& x, const std::vector<Index>& warm,
                             int max_iter) {
  const Index n = points.cols();
  require_dim(points.rows(), x.size(), "min_norm_point");
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "min_norm_point: empty point set");
  const Mat q = points.colwise() - x;
  const double qmax = std::sqrt(q.colwise().squaredNorm().maxCoeff());

  std::vector<Index> s = clean_indices(warm, n);
  Vec lam;
  if (s.empty()) {
    Index i0 = 0;
    q.colwise().squaredNorm().minCoeff(&i0);
    s = {i0};
    lam = Vec::Ones(1);
  } else {
    lam = Vec::Constant(static_cast<Index>(s.size()), 1.0 / static_cast<double>(s.size()));
  }
  Vec y = gather(q, s) * lam;

  MinNormResult res;
  double gap = 0.0;
  int it = 0;
  Index last_added = -1;
  for (; it < max_iter; ++it) {
    const Vec g = q.transpose() * y;
    Index j = 0;
    const double gmin = g.minCoeff(&j);
    const double yy = y.squaredNorm();
    gap = std::max(0.0, yy - gmin);
    const double floor = 16.0 * kEps * qmax * std::sqrt(yy) + 1e-13 * yy;
    if (gap <= floor) break;
    if (std::find(s.begin(), s.end(), j) != s.end()) break;
    if (j == last_added) break;
    s.push_back(j);
    lam.conservativeResize(lam.size() + 1);
    lam(lam.size() - 1) = 0.0;
    last_added = j;

    for (int minor = 0; minor < 1000; ++minor) {
      const Vec a = affine_min_norm_weights(gather(q, s));
      if (a.minCoeff() > 0.0) {
        lam = a;
        break;
      }
      double theta = 1.0;
      for (Index i = 0; i < a.size(); ++i)
        if (a(i) <= 0.0) theta = std::min(theta, lam(i) / (lam(i) - a(i)));
      lam += theta * (a - lam);
      std::vector<Index> keep_s;
      std::vector<double> keep_l;
      for (Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > 1e-15) {
          keep_s.push_back(s[static_cast<std::size_t>(i)]);
          keep_l.push_back(lam(i));
        }
      }
      if (keep_s.empty()) {
        Index best = 0;
        lam.maxCoeff(&best);
        keep_s = {s[static_cast<std::size_t>(best)]};
        keep_l = {1.0};
      }
      s = keep_s;
      lam = Eigen::Map<Vec>(keep_l.data(), static_cast<Index>(keep_l.size()));
      lam /= lam.sum();
    }
    y = gather(q, s) * lam;
  }
  res.point = x + y;
  res.support = s;
  res.weights = lam;
  res.gap = gap;
  res.iterations = it;
  return res;
}

NnlsResult nnls(const Mat& a, const Vec& b, const std::vector<Index>& warm, int max_iter) {
  const Index n = a.cols();
  require_dim(a.rows(), b.size(), "nnls");
  NnlsResult res;
  res.coefficients = Vec::Zero(n);
  if (n == 0) return res;
  const double amax = std::sqrt(a.colwise().squaredNorm().maxCoeff());
  const double tolw = 1e-13 * amax * std::max(b.norm(), 1e-300);

  Vec& c = res.coefficients;
  std::vector<Index> p;
  std::vector<char> in_p(static_cast<std::size_t>(n), 0);

  auto inner = [&](Index just_added) -> bool {
    for (int guard = 0; guard < 1000; ++guard) {
      const Vec sp = least_squares(gather(a, p), b);
      if (sp.size() == 0 || sp.minCoeff() > 0.0) {
        for (std::size_t k = 0; k < p.size(); ++k) c(p[k]) = sp(static_cast<Index>(k));
        return true;
      }
      double alpha = 1.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double ck = c(p[k]), sk = sp(static_cast<Index>(k));
        if (sk <= 0.0) alpha = std::min(alpha, ck / (ck - sk));
      }
      for (std::size_t k = 0; k < p.size(); ++k) c(p[k]) += alpha * (sp(static_cast<Index>(k)) - c(p[k]));
      std::vector<Index> keep;
      bool dropped_new = false;
      for (Index i : p) {
        if (c(i) > 1e-15 * std::max(1.0, c.cwiseAbs().maxCoeff())) {
          keep.push_back(i);
        } else {
          c(i) = 0.0;
          in_p[static_cast<std::size_t>(i)] = 0;
          if (i == just_added) dropped_new = true;
        }
      }
      p = keep;
      if (dropped_new && alpha == 0.0) return false;
    }
    return true;
  };

  for (Index i : clean_indices(warm, n)) {
    p.push_back(i);
    in_p[static_cast<std::size_t>(i)] = 1;
  }
  if (!p.empty()) inner(-1);

  int it = 0;
  Index last = -1;
  for (; it < max_iter; ++it) {
    const Vec w = a.transpose() * (b - a * c);
    Index j = -1;
    double best = tolw;
    for (Index i = 0; i < n; ++i)
      if (!in_p[static_cast<std::size_t>(i)] && w(i) > best) {
        best = w(i);
        j = i;
      }
    if (j < 0 || j == last) break;
    p.push_back(j);
    in_p[static_cast<std::size_t>(j)] = 1;
    last = j;
    if (!inner(j)) break;
  }
  res.passive = p;
  res.iterations = it;
  return res;
}

}  // namespace conelab
