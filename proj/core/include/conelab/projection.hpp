#pragma once

#include <span>

#include "conelab/cone.hpp"

namespace conelab {

struct ProjectionOptions {
  int max_iter = 50000;      // Dykstra cycles / iterative solver budget
  double tol = 1e-13;        // stopping threshold, relative to max(1, ||x||)
  bool refine_curves = false;  // exchange refinement of curve samples in hull solves
  int refine_rounds = 30;
};

ProjectionResult project(const ConeSpec& k, const Vec& x, const ProjectionOptions& opt = {});
double distance(const ConeSpec& k, const Vec& x, const ProjectionOptions& opt = {});

struct MoreauSplit {
  Vec original;
  Vec cone_part;   // in K
  Vec polar_part;  // in -K*
  double residual = 0.0;  // ||original - cone_part - polar_part||
  double orthogonality = 0.0;  // |<cone_part, polar_part>|
};

MoreauSplit moreau_decompose(const ConeSpec& k, const Vec& x, const ProjectionOptions& opt = {});

// Dykstra's cyclic projections onto the intersection of the parts. Throws
// NonConvergenceError (carrying the last iterate) when max_iter is exhausted.
ProjectionResult dykstra_intersection(std::span<const ConeSpec> parts, const Vec& x,
                                      int max_iter = 50000, double tol = 1e-13);

// Nearest point of conv(columns of samples).
ProjectionResult project_hull(const Mat& samples, const Vec& x);
// Same, with exchange refinement along the curves of the sampler.
ProjectionResult project_hull(const HullSampler& sampler, const Vec& x,
                              const ProjectionOptions& opt = {});
// Nearest point of cone(columns of generators).
ProjectionResult project_generated(const Mat& generators, const Vec& x);
ProjectionResult project_conic_hull(const SliceSpec& slice, const Vec& x,
                                    const ProjectionOptions& opt = {});
// Nearest point of {x : rows * x <= 0}.
ProjectionResult project_polyhedral(const Mat& rows, const Vec& x);

// Closed-form atoms.
Vec project_orthant(const Vec& x);
Vec project_soc(const Vec& x);
Vec project_psd_svec(const Vec& x);
Mat project_psd(const Mat& s);
// Nearest point of the norm cone {(v, t) : ||v||_blocks <= t} where the
// block norm is the max of the Euclidean norms of consecutive blocks.
Vec project_max_block_norm_cone(const Vec& x, std::span<const Index> block_sizes);

}  // namespace conelab
