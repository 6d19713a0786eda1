#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "conelab/error.hpp"

namespace conelab {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

// One tolerance record shared by every module. A quantity v measured at
// magnitude s counts as zero when |v| <= abs + rel * |s|.
struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-8;

  double bound(double scale = 0.0) const { return abs + rel * std::abs(scale); }
  bool is_zero(double v, double scale = 0.0) const {
    return std::abs(v) <= bound(scale);
  }
  bool close(double a, double b) const {
    return std::abs(a - b) <= bound(std::max(std::abs(a), std::abs(b)));
  }
};

inline constexpr Tolerance kDefaultTolerance{};

// Singular values below kRankCutoff * sigma_max are treated as zero.
inline constexpr double kRankCutoff = 1e-10;

// Gram-Schmidt (two passes) with an SVD-based rank threshold. Returns the
// basis as columns, in input order; dependent inputs are dropped.
Mat orthonormalize(const Mat& columns);
Mat orthonormalize(std::span<const Vec> vectors, Index ambient_dim = -1);

// Orthonormal basis of the orthogonal complement of span(basis) in R^ambient.
Mat orthogonal_complement(const Mat& basis, Index ambient_dim);

// Numerical rank with the relative cutoff above.
Index numerical_rank(const Mat& columns);

class AffineSubspace {
 public:
  AffineSubspace() = default;
  // `basis` must have orthonormal columns (checked to 1e-12).
  AffineSubspace(Vec basepoint, Mat basis);

  static AffineSubspace through_origin(const Mat& spanning_columns);
  static AffineSubspace hyperplane(const Vec& normal, double offset);
  static AffineSubspace point(const Vec& p);
  static AffineSubspace whole_space(Index ambient_dim);

  const Vec& basepoint() const { return base_; }
  const Mat& basis() const { return basis_; }
  Index dim() const { return basis_.cols(); }
  Index ambient_dim() const { return base_.size(); }

  Vec project(const Vec& x) const;
  double distance(const Vec& x) const;
  bool contains(const Vec& x, const Tolerance& tol = kDefaultTolerance) const;
  Vec to_local(const Vec& x) const;
  Vec from_local(const Vec& c) const;

 private:
  Vec base_;
  Mat basis_;
};

double distance_to_affine(const Vec& x, const AffineSubspace& a);

class BoundedRegion {
 public:
  struct Ball {
    Vec center;
    double radius;
  };
  struct Box {
    Vec lower;
    Vec upper;
  };

  static BoundedRegion ball(Vec center, double radius);
  static BoundedRegion box(Vec lower, Vec upper);

  bool is_ball() const { return std::holds_alternative<Ball>(shape_); }
  const Ball& as_ball() const { return std::get<Ball>(shape_); }
  const Box& as_box() const { return std::get<Box>(shape_); }
  Index ambient_dim() const;
  Vec center() const;
  double bounding_radius() const;

  bool contains(const Vec& x, double slack = 0.0) const;
  Vec sample(Rng& rng) const;
  // Uniform sample of region ∩ A in A's coordinates; throws when empty.
  Vec sample_in(const AffineSubspace& a, Rng& rng) const;
  bool intersects(const AffineSubspace& a) const;
  BoundedRegion scaled(double factor) const;

 private:
  explicit BoundedRegion(std::variant<Ball, Box> s) : shape_(std::move(s)) {}
  std::variant<Ball, Box> shape_;
};

// Symmetric matrices are stored as the row-major upper triangle with
// off-diagonal entries scaled by sqrt(2); the Euclidean inner product of two
// such vectors equals the Frobenius inner product of the matrices.
Index svec_dim(Index n);
Index smat_order(Index m);  // inverse of svec_dim, throws if m is not triangular
Vec svec(const Mat& s);
Mat smat(const Vec& v);

Vec gaussian_vector(Index dim, Rng& rng);
Vec uniform_in_ball(Index dim, double radius, Rng& rng);

// Deterministic unit-sphere grids in R^dim (columns). dim 1 gives ±1, dim 2 a
// uniform circle, dim 3 a Fibonacci lattice, higher dims a fixed-seed cloud.
Mat sphere_grid(Index dim, int count);
// Rough covering radius of sphere_grid(dim, count); used as an error bar.
double sphere_grid_resolution(Index dim, int count);

}  // namespace conelab
