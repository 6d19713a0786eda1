#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conelab/face.hpp"
#include "conelab/projection.hpp"

// Sampled error-bound probes. A probe can only ever produce evidence: the
// ratios are lower bounds on any valid constant, and the verdict is a finite
// decision rule applied to them.
namespace conelab {

enum class ProbeVerdict { kBounded, kGrowthDetected, kInconclusive };
const char* to_string(ProbeVerdict v);

struct ProbeOptions {
  int n_samples = 1000;
  std::uint64_t seed = 1;
  // bounded: refined maxima of the first half and of all samples differ by
  // less than this fraction.
  double drift_threshold = 0.10;
  // growth_detected: refinement raises the ratio by more than this factor.
  double growth_factor = 10.0;
  int refine_rounds = 3;          // 0 disables refinement
  int evals_per_round = 400;
  double initial_step = 0.25;     // relative to the region radius
  // Optional start of the refinement instead of the worst random sample.
  std::optional<Vec> refine_seed;
  // Denominators below floor * max(1, region scale) make the sample count as 0.
  double denominator_floor = 1e-10;
  ProjectionOptions projection;
};

struct ErrorBoundSample {
  Vec point;
  double dist_face = 0.0;
  double dist_cone = 0.0;
  double dist_aff = 0.0;
  double ratio = 0.0;
  bool refined = false;  // produced by the local search rather than drawn at random
};

struct ErrorBoundEstimate {
  ErrorBoundEstimate(ConeSpec k, FaceHandle f, BoundedRegion r)
      : cone(std::move(k)), face(std::move(f)), region(std::move(r)) {}

  ConeSpec cone;
  FaceHandle face;
  BoundedRegion region;
  std::string route;  // "definition", "blr" or "subtransversality"
  std::uint64_t seed = 0;
  // Max ratio over every recorded sample, refined points included.
  double kappa_hat = 0.0;
  // Max ratio over the random samples only; nondecreasing in n_samples.
  double kappa_sampled = 0.0;
  double kappa_half = 0.0;  // refined max started from the first half
  double kappa_full = 0.0;  // refined max started from all samples
  double drift = 0.0;
  // Ratio at the refinement start followed by the best after each round.
  std::vector<double> refinement;
  std::vector<ErrorBoundSample> samples;
  ProbeVerdict verdict = ProbeVerdict::kInconclusive;
};

// Samples x ∈ aff F ∩ region and measures dist(x, F) / dist(x, K).
ErrorBoundEstimate estimate_kappa(const ConeSpec& k, const FaceHandle& f, const BoundedRegion& region,
                                  const ProbeOptions& opt = {});
// Samples x ∈ region and measures dist(x, F) / max(dist(x, aff F), dist(x, K)).
ErrorBoundEstimate blr_check(const ConeSpec& k, const FaceHandle& f, const BoundedRegion& region,
                             const ProbeOptions& opt = {});
// Samples the ball of `radius` around x_star ∈ F and measures
// dist(x, F) / (dist(x, aff F) + dist(x, K)).
ErrorBoundEstimate subtransversality_check(const ConeSpec& k, const FaceHandle& f, const Vec& x_star,
                                           double radius, const ProbeOptions& opt = {});

struct WitnessCurve {
  std::string name;
  std::function<Vec(double)> point;  // t ↦ point of aff F
  std::vector<double> t_grid;        // decreasing, positive
  double fitted_growth_exponent = 0.0;
};

struct WitnessRow {
  double t = 0.0;
  Vec point;
  double dist_face = 0.0;
  double dist_cone = 0.0;
  double ratio = 0.0;  // dist_face / dist_cone
  bool used_in_fit = true;
};

struct WitnessReport {
  WitnessCurve curve;  // fitted_growth_exponent filled in
  std::vector<WitnessRow> rows;
  // Least-squares slope of log(dist_face / dist_cone) against log t.
  double ratio_slope = 0.0;
  // Least-squares slope of log(dist_cone^2 / dist_face^2) against log t.
  double inverse_sq_slope = 0.0;
  std::vector<std::string> warnings;
};

// Distances below 1e-12 are excluded from the fit with a warning. Throws
// kInvalidArgument when a curve point leaves aff F by more than 1e-10.
WitnessReport evaluate_witness(const ConeSpec& k, const FaceHandle& f, const WitnessCurve& w,
                               const ProjectionOptions& popt = {});

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace conelab
