#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conelab/cone.hpp"

namespace conelab {

enum class FaceKind {
  kWhole,           // F = K
  kZero,            // F = {0}
  kCoordinate,      // orthant face: indices = coordinates allowed to be nonzero
  kPsdRange,        // {X psd : range X ⊆ range}, range has orthonormal columns
  kRay,             // cone of `generator`
  kActiveRows,      // polyhedral face: indices = rows forced to equality
  kGeneratorSubset, // finitely generated face: indices = generators in F
  kProduct,         // factors[i] is a face of the i-th factor
  kIntersection,    // factors[i] is a face of the i-th part
  kGeneric,         // described only by `set`
};
const char* to_string(FaceKind k);

// A face F of `parent`. `set` is F itself with its own projection oracle;
// span_basis is an orthonormal basis of span F (for cones aff F = span F).
struct FaceHandle {
  ConeSpec parent;
  ConeSpec set;
  Mat span_basis;
  AffineSubspace affine_hull;
  FaceKind kind = FaceKind::kGeneric;
  std::vector<Index> indices;
  Mat range;
  Vec generator;
  std::vector<FaceHandle> factors;
  std::string label;
  // Supporting data for sets that are not cones: a normal n with
  // <n, f> = <n, x> maximal over the parent exactly on F.
  std::optional<Vec> exposing_hint;
  // Closed form for s ∈ K* + F^⊥, returning (u, v) with u ∈ K*, v ∈ F^⊥, or
  // nullopt when s is outside the sum.
  std::function<std::optional<std::pair<Vec, Vec>>(const Vec&)> dual_sum;

  Index dim() const { return affine_hull.dim(); }
  Index ambient_dim() const { return parent.dim(); }
  bool contains(const Vec& x, const Tolerance& tol = kDefaultTolerance) const;
  ProjectionResult project(const Vec& x) const;
  double distance(const Vec& x) const;
  // Orthogonal projector onto span F.
  Mat span_projector() const { return span_basis * span_basis.transpose(); }
};

// Structured constructors. Each validates its descriptor against the parent.
FaceHandle whole_face(const ConeSpec& k);
FaceHandle zero_face(const ConeSpec& k);
FaceHandle coordinate_face(const ConeSpec& orthant, std::vector<Index> support);
FaceHandle psd_range_face(const ConeSpec& psd, const Mat& range_columns);
FaceHandle ray_face(const ConeSpec& k, const Vec& generator);
FaceHandle active_rows_face(const ConeSpec& polyhedral, std::vector<Index> rows);
FaceHandle generator_subset_face(const ConeSpec& generated, std::vector<Index> columns);
FaceHandle product_face(const ConeSpec& product, std::vector<FaceHandle> factors);
// A face known only through its set; the span is taken from `span_columns`.
FaceHandle generic_face(const ConeSpec& parent, ConeSpec set, const Mat& span_columns,
                        std::string label);

// The smallest face containing x (x in its relative interior). Supported for
// orthant, psd, second-order, halfspace, subspace, polyhedral, products and
// intersections of these; throws kUnsupported otherwise.
FaceHandle minimal_face(const ConeSpec& k, const Vec& x, const Tolerance& tol = kDefaultTolerance);

// F^Δ = K* ∩ F^⊥ as a face of dual_cone(K).
FaceHandle conjugate_face(const ConeSpec& k, const FaceHandle& f);
// F^ΔΔ = K ∩ (F^Δ)^⊥ as a face of K.
FaceHandle double_conjugate(const ConeSpec& k, const FaceHandle& f);

struct ExposureOptions {
  int samples = 1000;
  double margin = 1e-7;      // below this the verdict is undecided
  double far_fraction = 1e-2;  // only points at distance >= this (relative) from F count
  std::uint64_t seed = 1;
};

struct ExposureResult {
  enum class Verdict { kExposed, kNotExposed, kUndecided } verdict = Verdict::kUndecided;
  Vec witness;        // s with <s, x> = offset on F and > offset elsewhere
  double offset = 0.0;
  double margin = 0.0;  // min over samples of <s, x> - offset, normalized
  int samples_checked = 0;
  // kNotExposed: a point of F^ΔΔ at positive distance from F.
  std::optional<Vec> certificate;
  double certificate_distance = 0.0;
};
const char* to_string(ExposureResult::Verdict v);

ExposureResult is_exposed(const ConeSpec& k, const FaceHandle& f, const ExposureOptions& opt = {});

struct DualSumResult {
  bool in_sum = false;
  Vec u;  // in K*
  Vec v;  // in F^⊥
  double residual = 0.0;  // ||s - u - v|| plus the distance of u to K*
  bool closed_form = false;
  int iterations = 0;
};

// Decides s ∈ K* + F^⊥. Uses the face's closed form when present, otherwise
// alternating projections between K* and s + F^⊥.
DualSumResult dual_sum_membership(const ConeSpec& k, const FaceHandle& f, const Vec& s,
                                  double tol = 1e-9, int max_iter = 20000);

// Sampled check of the face property: pairs x, y ∈ K with midpoint in F must
// both lie in F. Returns the number of violating pairs.
int face_property_violations(const ConeSpec& k, const FaceHandle& f, int pairs, Rng& rng,
                             double tol = 1e-6);

// Random element of F (projection of a Gaussian onto the face set).
Vec sample_face_element(const FaceHandle& f, Rng& rng);

}  // namespace conelab
