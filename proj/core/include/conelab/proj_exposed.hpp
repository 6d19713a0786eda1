#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conelab/amenability.hpp"
#include "conelab/face.hpp"

namespace conelab {

// An idempotent linear map with P(K) = F, certified on samples.
struct ProjectionMap {
  Mat matrix;
  FaceHandle target_face;
  double idempotency_residual = 0.0;  // max |(P^2 - P)_ij|
  int containment_violations = 0;     // sampled x ∈ K with P x ∉ F
  int fixed_violations = 0;           // sampled f ∈ F with P f != f
  int samples_checked = 0;
  bool certified() const {
    return idempotency_residual < 1e-12 && containment_violations == 0 && fixed_violations == 0;
  }
};

// Fills the residual and violation counts from n cone samples and n face samples.
void certify_projection(ProjectionMap& p, const ConeSpec& k, int n_samples, std::uint64_t seed = 1,
                        double tol = 1e-9);

struct ProjectionBuildOptions {
  int certify_samples = 10000;
  std::uint64_t seed = 1;
  int pointedness_samples = 200;
  int conjugate_samples = 64;
};

// P = x z^T with z ∈ K*, <x, z> = 1. Requires K pointed (checked on samples).
ProjectionMap build_rank_one_projection(const ConeSpec& k, const Vec& x, const ProjectionBuildOptions& opt = {});

// P = x z2^T + y z1^T for the 2-dimensional face F = cone{x, y}, with
// z1 ∈ F_x^Δ \ F_y^Δ, z2 ∈ F_y^Δ \ F_x^Δ normalized so that <x,z1> = 0,
// <x,z2> = 1, <y,z1> = 1, <y,z2> = 0. Throws kNotSeparable when the sampled
// conjugate faces do not separate the rays.
ProjectionMap build_rank_two_projection(const ConeSpec& k, const FaceHandle& f, const Vec& x, const Vec& y,
                                        const ProjectionBuildOptions& opt = {});

struct SungTamOptions {
  // Neighbourhood radii around w; default 0.5 * 2^-k for k = 0..12.
  std::vector<double> radii;
  // converging_extreme_rays requires a finding at every level k <= this.
  int required_depth = 8;
  int generator_count = 2048;  // extreme-grid resolution for gallery oracles
  int max_spacing = 64;        // hinge spacings 1, 2, 4, ... up to this
  double face_tol = 1e-13;     // |<w, g>| below this puts g in F
  double active_tol = 1e-12;   // <s, g> below this makes g active for s
};

struct ExtremeRayFinding {
  Vec ray;                  // unit extreme direction of K*
  double distance = 0.0;    // ||ray - w||
  std::vector<Index> hinge; // generator indices the hyperplane turned around
  int active = 0;           // generators on the new hyperplane
};

struct SungTamLevel {
  int k = 0;
  double radius = 0.0;
  bool found = false;
  double nearest = 0.0;  // distance of the nearest finding, if any
};

struct SungTamResult {
  enum class Outcome { kNoConvergingSequence, kConvergingExtremeRays } outcome = Outcome::kNoConvergingSequence;
  Vec w;  // unit generator of F^Δ
  std::vector<SungTamLevel> levels;
  std::vector<ExtremeRayFinding> rays;  // sorted by distance to w
  int generators = 0;
  int face_generators = 0;
  int deepest_level = -1;  // largest k with a finding at every level up to k
};
const char* to_string(SungTamResult::Outcome o);

// Searches for extreme rays of K* distinct from F^Δ inside shrinking
// neighbourhoods of w. K* rays are produced by turning the supporting
// hyperplane w^⊥ around hinges of d - 2 generators of F until it meets
// another generator of K. Requires F of codimension 1 with F^Δ a ray, and
// a generator sample of K (orthant, finitely generated, conic hull, or a
// gallery oracle with an extreme grid).
SungTamResult sung_tam_probe(const ConeSpec& k, const FaceHandle& f, const SungTamOptions& opt = {});

struct Codim1Report {
  ProbeVerdict amenability = ProbeVerdict::kInconclusive;
  double kappa_hat = 0.0;
  SungTamResult sung_tam;
  // False only when amenability looks bounded and converging rays were
  // found. Amenable codimension-one faces are projectionally exposed, so
  // that combination flags a bug or insufficient sampling.
  bool consistent = true;
  std::string summary;
};

Codim1Report codim1_amenable_implies_pexp_check(const ConeSpec& k, const FaceHandle& f, const BoundedRegion& region,
                                                const ProbeOptions& probe = {}, const SungTamOptions& st = {});

}  // namespace conelab
