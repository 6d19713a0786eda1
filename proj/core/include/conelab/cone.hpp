#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conelab/linalg.hpp"

namespace conelab {

enum class ProjectionMethod {
  kClosedForm,
  kEigenClip,
  kDykstra,
  kHullQp,
  kActiveSet,
  kProjectedGradient,
  kComposite,
};
const char* to_string(ProjectionMethod m);

struct ProjectionResult {
  Vec point;
  double distance = 0.0;
  ProjectionMethod method = ProjectionMethod::kClosedForm;
  int iterations = 0;
  // Upper bound on the suboptimality of `point`; 0 for closed forms.
  double certificate_gap = 0.0;
};

enum class Location { kInside, kBoundary, kOutside };
const char* to_string(Location l);

struct MembershipResult {
  Location location = Location::kOutside;
  // Amount by which x fails the defining inequalities (or its distance when
  // decided by projection). Nonpositive values mean slack.
  double violation = 0.0;
  bool projection_based = false;
};

// One parametric curve of extreme points. Points live in the ambient space of
// the set being generated.
struct Curve {
  std::string name;
  std::function<Vec(double)> point;
  double t0 = 0.0;
  double t1 = 1.0;
  bool periodic = false;  // t1 is identified with t0 and not sampled twice
  std::vector<double> anchors;  // parameters always included in the sample
};

struct HullSample {
  Mat points;                  // columns
  std::vector<int> curve;      // -1 for fixed points
  std::vector<double> param;
  std::vector<double> spacing; // parameter gap to the neighbours
};

// Generator of a compact convex set as the hull of curve samples and fixed points.
struct HullSampler {
  std::vector<Curve> curves;
  Mat points;  // fixed extreme points as columns (may be empty)
  int density = 2048;

  Index ambient_dim() const;
  HullSample sample() const { return sample(density); }
  HullSample sample(int per_curve) const;
};

// Compact slice C = K ∩ {<e,x> = level} generating K = cone(C).
struct SliceSpec {
  Vec e;
  double level = 1.0;
  HullSampler generator;
  Index hull_dim = 0;

  Index ambient_dim() const { return e.size(); }
};

class ConeSpec;

// Hand-written set with its own oracles; used for the closed-form gallery
// objects and for faces without an algebraic description.
class SetOracle {
 public:
  virtual ~SetOracle() = default;
  virtual std::string name() const = 0;
  virtual Index dim() const = 0;
  virtual bool is_cone() const = 0;
  virtual ProjectionResult project(const Vec& x) const = 0;
  virtual MembershipResult membership(const Vec& x, const Tolerance& tol) const;
  virtual std::optional<ConeSpec> dual() const;
  // Unit extreme directions (cones) or extreme points (compact sets) on a
  // parameter grid of the given resolution; nullopt when not enumerable.
  virtual std::optional<Mat> extreme_grid(int count) const;
};

struct ConeNode;

class ConeSpec {
 public:
  ConeSpec();  // the zero cone {0} in R^0
  explicit ConeSpec(std::shared_ptr<const ConeNode> node) : node_(std::move(node)) {}

  static ConeSpec halfspace(Vec normal, double offset = 0.0);
  static ConeSpec subspace(const Mat& spanning_columns, Index ambient_dim);
  static ConeSpec polyhedral(Mat rows);
  static ConeSpec generated(Mat generators, Index ambient_dim = -1);
  static ConeSpec second_order(Index dim);
  static ConeSpec psd(Index n);
  static ConeSpec orthant(Index dim);
  static ConeSpec product(std::vector<ConeSpec> factors);
  static ConeSpec intersection(std::vector<ConeSpec> parts);
  static ConeSpec image(Mat map, ConeSpec inner);
  static ConeSpec conic_hull(SliceSpec slice);
  static ConeSpec convex_hull(HullSampler sampler);
  static ConeSpec affine(AffineSubspace a);
  static ConeSpec named(std::shared_ptr<const SetOracle> oracle);

  const ConeNode& node() const { return *node_; }
  template <class T>
  const T* get_if() const;

  Index dim() const;
  // True when the set is a cone (closed under nonnegative scaling).
  bool is_cone() const;
  std::string kind() const;
  std::string describe() const;

 private:
  std::shared_ptr<const ConeNode> node_;
};

namespace spec {

struct Halfspace {
  Vec normal;
  double offset = 0.0;  // {x : <normal, x> <= offset}
};
struct LinearSubspace {
  Mat basis;  // orthonormal columns
  Index ambient_dim;
};
struct Polyhedral {
  Mat rows;  // {x : rows * x <= 0}
};
struct FinitelyGenerated {
  Mat generators;  // cone of the columns
};
struct SecondOrder {
  Index dim;  // {(x, t) : ||x|| <= t}, t last
};
struct Psd {
  Index n;  // svec coordinates of dimension n(n+1)/2
};
struct NonnegativeOrthant {
  Index dim;
};
struct Product {
  std::vector<ConeSpec> factors;
};
struct Intersection {
  std::vector<ConeSpec> parts;
};
struct LinearImage {
  Mat map;  // full column rank
  ConeSpec inner;
  bool orthonormal = false;
};
struct ConicHull {
  SliceSpec slice;
};
struct ConvexHull {
  HullSampler sampler;
};
struct Affine {
  AffineSubspace subspace;
};
struct Named {
  std::shared_ptr<const SetOracle> oracle;
};

}  // namespace spec

struct ConeNode {
  std::variant<spec::Halfspace, spec::LinearSubspace, spec::Polyhedral, spec::FinitelyGenerated,
               spec::SecondOrder, spec::Psd, spec::NonnegativeOrthant, spec::Product,
               spec::Intersection, spec::LinearImage, spec::ConicHull, spec::ConvexHull,
               spec::Affine, spec::Named>
      v;
};

template <class T>
const T* ConeSpec::get_if() const {
  return std::get_if<T>(&node_->v);
}

template <class F>
decltype(auto) visit(const ConeSpec& k, F&& f) {
  return std::visit(std::forward<F>(f), k.node().v);
}

MembershipResult membership(const ConeSpec& k, const Vec& x,
                            const Tolerance& tol = kDefaultTolerance);
bool contains(const ConeSpec& k, const Vec& x, const Tolerance& tol = kDefaultTolerance);

// Dual cone K* = {s : <s, x> >= 0 for all x in K}. Throws kDualUnavailable for
// conic hulls of sampled slices and general intersections.
ConeSpec dual_cone(const ConeSpec& k);
bool has_dual(const ConeSpec& k);

// Unit vectors of K* obtained from Moreau splits of Gaussian samples; usable
// when dual_cone is unavailable.
Mat sampled_polar(const ConeSpec& k, int count, Rng& rng);

// x / <e, x> for a conic hull over a slice; throws kNotRescalable when <e,x> <= 0.
Vec rescale_to_slice(const SliceSpec& slice, const Vec& x);
Vec rescale_to_slice(const ConeSpec& k, const Vec& x);

// Random element: the projection of a Gaussian sample (scaled by `scale`).
Vec sample_element(const ConeSpec& k, Rng& rng, double scale = 1.0);

}  // namespace conelab
