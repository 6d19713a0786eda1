#pragma once

#include <cstdint>
#include <vector>

#include "conelab/face.hpp"

// Constants that carry an error bound for a compact slice C = K ∩ {<e,x> = 1}
// over to the cone K, and pointwise checks of the inequalities behind them.
namespace conelab {

// Max norm over the sampled slice. Nondecreasing under sample refinement.
double slice_radius(const SliceSpec& slice);
// Same for a compact set given as a convex hull or a gallery oracle with an
// extreme-point grid (`count` points).
double slice_radius(const ConeSpec& compact, int count = 4096);

struct AlphaEstimate {
  double alpha = 0.0;
  double resolution = 0.0;  // covering radius of the direction grid
  int n_dirs = 0;
};

// min over unit x ∈ span F of max over unit y ∈ F of <x, y>, both on
// deterministic sphere grids of span F (the y grid projected onto F), with
// the worst grid x refined by a compass search.
// Throws kHypothesis when dim F <= 1.
AlphaEstimate antipodality_alpha(const FaceHandle& f, int n_dirs = 4096);

// Unit y ∈ F maximizing <x, y> over the same grid.
Vec face_argmax(const FaceHandle& f, const Vec& x, int n_dirs = 4096);

// beta = max(1, 1 / sqrt(1 - alpha^2)).
double beta_from_alpha(double alpha);

struct HullConstants {
  double r = 0.0;
  double alpha = 0.0;
  double alpha_resolution = 0.0;
  double beta = 1.0;
  double kappa_slice = 0.0;
  double e_norm = 0.0;
  double gamma = 0.0;  // beta * kappa_slice * r * e_norm
};

HullConstants make_hull_constants(double r, double alpha, double kappa_slice, double e_norm,
                                  double alpha_resolution = 0.0);
// r from the slice sample and alpha from the face of the cone.
HullConstants measure_hull_constants(const SliceSpec& slice, const FaceHandle& cone_face, double kappa_slice,
                                     int n_dirs = 4096);

struct SliceBoundReport {
  int samples = 0;   // accepted points of H \ (-K*)
  int rejected = 0;  // draws whose projection onto K vanished
  int violations = 0;
  double r = 0.0;
  double e_norm = 0.0;
  // max over samples of dist(x, C) - |e| r dist(x, K); <= tol means no violation.
  double worst_margin = 0.0;
};

// Draws x on H = {<e, x> = level} around the slice (spread * r wide), keeps
// those with nonzero projection onto K and checks
// dist(x, C) <= |e| r dist(x, K) + tol.
SliceBoundReport verify_slice_bound(const ConeSpec& conic_hull, int n_samples, std::uint64_t seed = 1,
                                    double tol = 1e-8, double spread = 2.0);

struct MonotoneShiftRow {
  double t = 0.0;
  double dist_shifted_cone = 0.0;  // dist(x + t y, K)
  double dist_cone = 0.0;          // dist(x, K)
  double dist_face = 0.0;          // dist(x, F)
  double dist_shifted_face = 0.0;  // dist(x + t y, F)
  bool cone_holds = false;         // dist(x + t y, K) <= dist(x, K)
  bool face_holds = false;         // dist(x, F) <= beta dist(x + t y, F)
};

struct MonotoneShiftReport {
  Vec y;
  double beta = 1.0;
  std::vector<MonotoneShiftRow> rows;
  bool all_hold = false;
};

// x must lie in span F; y is face_argmax(f, x). beta <= 0 means "measure it".
MonotoneShiftReport verify_monotone_shift(const ConeSpec& k, const FaceHandle& f, const Vec& x,
                                          const std::vector<double>& t_grid, double beta = 0.0,
                                          int n_dirs = 4096, double tol = 1e-9);

}  // namespace conelab
