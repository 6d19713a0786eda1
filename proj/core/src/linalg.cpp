#include "conelab/linalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace conelab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kDualUnavailable: return "dual_unavailable";
    case ErrorCode::kNotRescalable: return "not_rescalable";
    case ErrorCode::kNonConvergence: return "non_convergence";
    case ErrorCode::kHypothesis: return "hypothesis";
    case ErrorCode::kNotSeparable: return "not_separable";
    case ErrorCode::kVerification: return "verification";
  }
  return "unknown";
}

void require_dim(Index expected, Index actual, const char* what) {
  if (expected != actual) {
    std::ostringstream os;
    os << what << ": expected dimension " << expected << ", got " << actual;
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
}

Index numerical_rank(const Mat& columns) {
  if (columns.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(columns);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > kRankCutoff * s(0)) ++r;
  return r;
}

Mat orthonormalize(const Mat& columns) {
  const Index d = columns.rows();
  Mat q(d, 0);
  if (columns.cols() == 0) return q;
  Eigen::JacobiSVD<Mat> svd(columns);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  if (smax == 0.0) return q;
  const double cutoff = kRankCutoff * smax;
  for (Index j = 0; j < columns.cols(); ++j) {
    Vec r = columns.col(j);
    for (int pass = 0; pass < 2; ++pass) r -= q * (q.transpose() * r);
    const double n = r.norm();
    if (n > cutoff) {
      q.conservativeResize(d, q.cols() + 1);
      q.col(q.cols() - 1) = r / n;
    }
  }
  return q;
}

Mat orthonormalize(std::span<const Vec> vectors, Index ambient_dim) {
  if (vectors.empty()) return Mat(std::max<Index>(ambient_dim, 0), 0);
  const Index d = vectors.front().size();
  if (ambient_dim >= 0) require_dim(ambient_dim, d, "orthonormalize");
  Mat m(d, static_cast<Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    require_dim(d, vectors[j].size(), "orthonormalize");
    m.col(static_cast<Index>(j)) = vectors[j];
  }
  return orthonormalize(m);
}

Mat orthogonal_complement(const Mat& basis, Index ambient_dim) {
  if (basis.cols() == 0) return Mat::Identity(ambient_dim, ambient_dim);
  require_dim(ambient_dim, basis.rows(), "orthogonal_complement");
  Mat q = orthonormalize(basis);
  Mat out(ambient_dim, 0);
  for (Index i = 0; i < ambient_dim; ++i) {
    Vec r = Vec::Unit(ambient_dim, i);
    for (int pass = 0; pass < 2; ++pass) {
      r -= q * (q.transpose() * r);
      r -= out * (out.transpose() * r);
    }
    const double n = r.norm();
    if (n > 1e-8) {
      out.conservativeResize(ambient_dim, out.cols() + 1);
      out.col(out.cols() - 1) = r / n;
    }
    if (q.cols() + out.cols() == ambient_dim) break;
  }
  return out;
}

AffineSubspace::AffineSubspace(Vec basepoint, Mat basis)
    : base_(std::move(basepoint)), basis_(std::move(basis)) {
  if (basis_.cols() > 0) require_dim(base_.size(), basis_.rows(), "AffineSubspace");
  if (basis_.cols() == 0) basis_.resize(base_.size(), 0);
  if (basis_.cols() > base_.size())
    throw Error(ErrorCode::kInvalidArgument, "AffineSubspace: more basis vectors than ambient dimension");
  const Mat gram = basis_.transpose() * basis_;
  if (basis_.cols() > 0 &&
      (gram - Mat::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff() > 1e-12)
    throw Error(ErrorCode::kInvalidArgument, "AffineSubspace: basis is not orthonormal");
  // Keep the basepoint as the point of minimal norm so equal sets compare equal.
  base_ -= basis_ * (basis_.transpose() * base_);
}

AffineSubspace AffineSubspace::through_origin(const Mat& spanning_columns) {
  return AffineSubspace(Vec::Zero(spanning_columns.rows()), orthonormalize(spanning_columns));
}

AffineSubspace AffineSubspace::hyperplane(const Vec& normal, double offset) {
  const double nn = normal.squaredNorm();
  if (nn == 0.0) throw Error(ErrorCode::kInvalidArgument, "hyperplane: zero normal");
  return AffineSubspace(normal * (offset / nn), orthogonal_complement(normal, normal.size()));
}

AffineSubspace AffineSubspace::point(const Vec& p) { return AffineSubspace(p, Mat(p.size(), 0)); }

AffineSubspace AffineSubspace::whole_space(Index ambient_dim) {
  return AffineSubspace(Vec::Zero(ambient_dim), Mat::Identity(ambient_dim, ambient_dim));
}

Vec AffineSubspace::project(const Vec& x) const {
  require_dim(ambient_dim(), x.size(), "AffineSubspace::project");
  return base_ + basis_ * (basis_.transpose() * (x - base_));
}

double AffineSubspace::distance(const Vec& x) const { return (x - project(x)).norm(); }

bool AffineSubspace::contains(const Vec& x, const Tolerance& tol) const {
  return tol.is_zero(distance(x), x.norm());
}

Vec AffineSubspace::to_local(const Vec& x) const { return basis_.transpose() * (x - base_); }

Vec AffineSubspace::from_local(const Vec& c) const { return base_ + basis_ * c; }

double distance_to_affine(const Vec& x, const AffineSubspace& a) { return a.distance(x); }

BoundedRegion BoundedRegion::ball(Vec center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "ball radius must be positive");
  return BoundedRegion(Ball{std::move(center), radius});
}

BoundedRegion BoundedRegion::box(Vec lower, Vec upper) {
  require_dim(lower.size(), upper.size(), "box");
  for (Index i = 0; i < lower.size(); ++i)
    if (!(lower(i) <= upper(i))) throw Error(ErrorCode::kInvalidArgument, "box interval is empty");
  return BoundedRegion(Box{std::move(lower), std::move(upper)});
}

Index BoundedRegion::ambient_dim() const {
  return is_ball() ? as_ball().center.size() : as_box().lower.size();
}

Vec BoundedRegion::center() const {
  return is_ball() ? as_ball().center : Vec(0.5 * (as_box().lower + as_box().upper));
}

double BoundedRegion::bounding_radius() const {
  return is_ball() ? as_ball().radius : 0.5 * (as_box().upper - as_box().lower).norm();
}

bool BoundedRegion::contains(const Vec& x, double slack) const {
  require_dim(ambient_dim(), x.size(), "BoundedRegion::contains");
  if (is_ball()) return (x - as_ball().center).norm() <= as_ball().radius + slack;
  const Box& b = as_box();
  return ((x.array() >= b.lower.array() - slack) && (x.array() <= b.upper.array() + slack)).all();
}

Vec BoundedRegion::sample(Rng& rng) const {
  if (is_ball()) return as_ball().center + uniform_in_ball(ambient_dim(), as_ball().radius, rng);
  const Box& b = as_box();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec x(ambient_dim());
  for (Index i = 0; i < x.size(); ++i) x(i) = b.lower(i) + u(rng) * (b.upper(i) - b.lower(i));
  return x;
}

bool BoundedRegion::intersects(const AffineSubspace& a) const {
  const Vec c = center();
  const Vec p = a.project(c);
  if (is_ball()) return (p - c).norm() <= as_ball().radius;
  if (contains(p)) return true;
  Rng rng(7);
  const double rho = bounding_radius();
  for (int i = 0; i < 2000; ++i) {
    Vec y = a.from_local(a.to_local(p) + uniform_in_ball(a.dim(), rho, rng));
    if (contains(y)) return true;
  }
  return false;
}

Vec BoundedRegion::sample_in(const AffineSubspace& a, Rng& rng) const {
  require_dim(ambient_dim(), a.ambient_dim(), "BoundedRegion::sample_in");
  const Vec c = center();
  const Vec p = a.project(c);
  if (is_ball()) {
    const double d = (p - c).norm();
    const double r = as_ball().radius;
    if (d > r) throw Error(ErrorCode::kInvalidArgument, "region does not meet the affine hull");
    const double rho = std::sqrt(std::max(0.0, r * r - d * d));
    return p + a.basis() * uniform_in_ball(a.dim(), rho, rng);
  }
  const double rho = bounding_radius();
  for (int i = 0; i < 100000; ++i) {
    Vec y = p + a.basis() * uniform_in_ball(a.dim(), rho, rng);
    if (contains(y)) return y;
  }
  throw Error(ErrorCode::kInvalidArgument, "region does not meet the affine hull");
}

BoundedRegion BoundedRegion::scaled(double factor) const {
  if (is_ball()) return ball(as_ball().center * factor, as_ball().radius * factor);
  return box(as_box().lower * factor, as_box().upper * factor);
}

Index svec_dim(Index n) { return n * (n + 1) / 2; }

Index smat_order(Index m) {
  const Index n = static_cast<Index>(std::llround((std::sqrt(8.0 * m + 1.0) - 1.0) / 2.0));
  if (svec_dim(n) != m) throw Error(ErrorCode::kDimensionMismatch, "length is not a triangular number");
  return n;
}

Vec svec(const Mat& s) {
  if (s.rows() != s.cols()) throw Error(ErrorCode::kDimensionMismatch, "svec: matrix is not square");
  const Index n = s.rows();
  Vec v(svec_dim(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j)
      v(k++) = (i == j) ? s(i, i) : std::numbers::sqrt2 * 0.5 * (s(i, j) + s(j, i));
  return v;
}

Mat smat(const Vec& v) {
  const Index n = smat_order(v.size());
  Mat s(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      const double val = (i == j) ? v(k) : v(k) / std::numbers::sqrt2;
      s(i, j) = val;
      s(j, i) = val;
      ++k;
    }
  return s;
}

Vec gaussian_vector(Index dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = n(rng);
  return v;
}

Vec uniform_in_ball(Index dim, double radius, Rng& rng) {
  if (dim == 0) return Vec(0);
  Vec g = gaussian_vector(dim, rng);
  double n = g.norm();
  while (n == 0.0) {
    g = gaussian_vector(dim, rng);
    n = g.norm();
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return g * (radius * std::pow(u(rng), 1.0 / static_cast<double>(dim)) / n);
}

Mat sphere_grid(Index dim, int count) {
  if (dim <= 0) return Mat(0, 0);
  if (dim == 1) {
    Mat m(1, 2);
    m << 1.0, -1.0;
    return m;
  }
  Mat m(dim, count);
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      const double th = 2.0 * std::numbers::pi * k / count;
      m(0, k) = std::cos(th);
      m(1, k) = std::sin(th);
    }
    return m;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      m(0, i) = r * std::cos(phi);
      m(1, i) = r * std::sin(phi);
      m(2, i) = z;
    }
    return m;
  }
  Rng rng(0x5eedULL + static_cast<std::uint64_t>(dim));
  for (int i = 0; i < count; ++i) {
    Vec g = gaussian_vector(dim, rng);
    m.col(i) = g / g.norm();
  }
  return m;
}

double sphere_grid_resolution(Index dim, int count) {
  if (dim <= 1) return 0.0;
  if (dim == 2) return std::numbers::pi / count;
  if (dim == 3) return std::sqrt(4.0 * std::numbers::pi / count);
  return 2.0 * std::pow(static_cast<double>(count), -1.0 / static_cast<double>(dim - 1));
}

}  // namespace conelab
