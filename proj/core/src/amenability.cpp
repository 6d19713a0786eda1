#include "conelab/amenability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conelab/parallel.hpp"

namespace conelab {

const char* to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::kBounded: return "bounded";
    case ProbeVerdict::kGrowthDetected: return "growth_detected";
    case ProbeVerdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

enum class Route { kDefinition, kBlr, kSubtransversality };

const char* route_name(Route r) {
  switch (r) {
    case Route::kDefinition: return "definition";
    case Route::kBlr: return "blr";
    case Route::kSubtransversality: return "subtransversality";
  }
  return "?";
}

struct Probe {
  const ConeSpec& k;
  const FaceHandle& f;
  const BoundedRegion& region;
  const ProbeOptions& opt;
  Route route;
  // Search frame x = base + basis * c. The first aff_dims columns span the
  // directions of aff F; the definition route has no others.
  Vec base;
  Mat basis;
  Index aff_dims = 0;
  double floor = 0.0;

  ErrorBoundSample evaluate(const Vec& x) const {
    ErrorBoundSample s;
    s.point = x;
    s.dist_face = f.distance(x);
    // F ⊆ K, so points of F need no cone projection.
    s.dist_cone = s.dist_face <= floor ? 0.0 : distance(k, x, opt.projection);
    s.dist_aff = route == Route::kDefinition ? 0.0 : f.affine_hull.distance(x);
    double den = 0.0;
    switch (route) {
      case Route::kDefinition: den = s.dist_cone; break;
      case Route::kBlr: den = std::max(s.dist_aff, s.dist_cone); break;
      case Route::kSubtransversality: den = s.dist_aff + s.dist_cone; break;
    }
    s.ratio = den > floor ? s.dist_face / den : 0.0;
    return s;
  }

  // Pattern search on the frame coordinates: a step that improves the ratio
  // is taken and the step doubles, otherwise it halves. Each round restarts
  // with a smaller initial step. Returns the best sample after every round.
  std::vector<ErrorBoundSample> refine(const ErrorBoundSample& start) const {
    const Mat dirs = search_directions(aff_dims, basis.cols());
    std::vector<ErrorBoundSample> out;
    ErrorBoundSample best = start;
    // A zero-dimensional frame (aff F a point) leaves nothing to search.
    if (dirs.cols() == 0) return std::vector<ErrorBoundSample>(static_cast<std::size_t>(opt.refine_rounds), best);
    Vec c = basis.transpose() * (start.point - base);
    double step0 = opt.initial_step * region.bounding_radius();
    std::vector<ErrorBoundSample> trial(dirs.cols());
    for (int round = 0; round < opt.refine_rounds; ++round) {
      double h = step0;
      int evals = 0;
      while (evals < opt.evals_per_round && h > step0 * 1e-6) {
        parallel_for(trial.size(), [&](std::size_t j) {
          const Vec x = base + basis * (c + h * dirs.col(j));
          trial[j] = region.contains(x) ? evaluate(x) : ErrorBoundSample{x, 0, 0, 0, -1.0, false};
        });
        evals += static_cast<int>(trial.size());
        std::size_t arg = 0;
        for (std::size_t j = 1; j < trial.size(); ++j)
          if (trial[j].ratio > trial[arg].ratio) arg = j;
        if (trial[arg].ratio > best.ratio) {
          best = trial[arg];
          c += h * dirs.col(arg);
          h = std::min(2.0 * h, step0);
        } else {
          h *= 0.5;
        }
      }
      best.refined = true;
      out.push_back(best);
      step0 *= 0.25;
    }
    return out;
  }

  // Unit directions: a dense grid (circle or sphere in dimension <= 3, axes
  // and pairwise diagonals above) inside the aff F block, plus the same for
  // the whole frame. Ridges of the ratio often run inside aff F.
  static Mat dense_directions(Index d) {
    if (d == 1) return (Mat(1, 2) << 1.0, -1.0).finished();
    if (d == 2) return sphere_grid(2, 32);
    if (d == 3) return sphere_grid(3, 64);
    Mat dirs(d, 2 * d * d);
    Index col = 0;
    for (Index i = 0; i < d; ++i)
      for (double s : {1.0, -1.0}) dirs.col(col++) = s * Vec::Unit(d, i);
    for (Index i = 0; i < d; ++i)
      for (Index j = i + 1; j < d; ++j)
        for (double a : {1.0, -1.0})
          for (double b : {1.0, -1.0}) dirs.col(col++) = (a * Vec::Unit(d, i) + b * Vec::Unit(d, j)) / std::sqrt(2.0);
    return dirs;
  }

  static Mat search_directions(Index aff_dims, Index d) {
    const Mat whole = dense_directions(d);
    if (aff_dims == 0 || aff_dims == d) return whole;
    const Mat inner = dense_directions(aff_dims);
    Mat dirs = Mat::Zero(d, inner.cols() + whole.cols());
    dirs.topLeftCorner(aff_dims, inner.cols()) = inner;
    dirs.rightCols(whole.cols()) = whole;
    return dirs;
  }
};

// Directions of aff F followed by its orthogonal complement.
Mat full_frame(const FaceHandle& f) {
  const Mat& b = f.affine_hull.basis();
  Mat frame(b.rows(), b.rows());
  frame << b, orthogonal_complement(b, b.rows());
  return frame;
}

ErrorBoundEstimate run_probe(Probe& p) {
  const ProbeOptions& opt = p.opt;
  if (opt.n_samples < 2) throw Error(ErrorCode::kInvalidArgument, "probe: need at least two samples");
  require_dim(p.k.dim(), p.region.ambient_dim(), "probe region");
  require_dim(p.k.dim(), p.f.ambient_dim(), "probe face");
  if (!p.region.intersects(p.f.affine_hull))
    throw Error(ErrorCode::kInvalidArgument, "probe: aff F does not meet the region");
  p.floor = opt.denominator_floor * std::max(1.0, p.region.center().norm() + p.region.bounding_radius());

  ErrorBoundEstimate est(p.k, p.f, p.region);
  est.route = route_name(p.route);
  est.seed = opt.seed;

  // Points are drawn sequentially from one stream, so a run with n samples
  // contains the run with n/2 as a prefix.
  Rng rng(opt.seed);
  std::vector<Vec> points(opt.n_samples);
  for (auto& x : points) x = p.route == Route::kDefinition ? p.region.sample_in(p.f.affine_hull, rng) : p.region.sample(rng);
  est.samples.resize(points.size());
  parallel_for(points.size(), [&](std::size_t i) { est.samples[i] = p.evaluate(points[i]); });

  auto argmax = [&](std::size_t n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (est.samples[i].ratio > est.samples[best].ratio) best = i;
    return best;
  };
  const std::size_t worst_half = argmax(points.size() / 2);
  const std::size_t worst_full = argmax(points.size());
  est.kappa_sampled = est.samples[worst_full].ratio;

  std::vector<ErrorBoundSample> refined;
  auto refined_max = [&](const ErrorBoundSample& s) {
    if (opt.refine_rounds <= 0) return s.ratio;
    auto rounds = p.refine(s);
    refined.insert(refined.end(), rounds.begin(), rounds.end());
    return rounds.back().ratio;
  };
  est.kappa_full = refined_max(est.samples[worst_full]);
  est.kappa_half = worst_half == worst_full ? est.kappa_full : refined_max(est.samples[worst_half]);
  const double top = std::max(est.kappa_half, est.kappa_full);
  est.drift = top > 0.0 ? std::abs(est.kappa_full - est.kappa_half) / top : 0.0;

  bool growth = false;
  if (opt.refine_rounds > 0) {
    ErrorBoundSample start = est.samples[worst_full];
    if (opt.refine_seed) {
      Vec x = *opt.refine_seed;
      require_dim(p.k.dim(), x.size(), "refine_seed");
      if (p.route == Route::kDefinition) x = p.f.affine_hull.project(x);
      if (!p.region.contains(x, 1e-12)) throw Error(ErrorCode::kInvalidArgument, "probe: refine_seed outside the region");
      start = p.evaluate(x);
    }
    auto rounds = p.refine(start);
    est.refinement.push_back(start.ratio);
    for (const auto& r : rounds) est.refinement.push_back(r.ratio);
    refined.insert(refined.end(), rounds.begin(), rounds.end());
    growth = start.ratio > 0.0 && est.refinement.back() > opt.growth_factor * start.ratio;
  }
  est.samples.insert(est.samples.end(), refined.begin(), refined.end());
  for (const auto& s : est.samples) est.kappa_hat = std::max(est.kappa_hat, s.ratio);

  if (growth)
    est.verdict = ProbeVerdict::kGrowthDetected;
  else if (est.drift < opt.drift_threshold)
    est.verdict = ProbeVerdict::kBounded;
  else
    est.verdict = ProbeVerdict::kInconclusive;
  return est;
}

}  // namespace

ErrorBoundEstimate estimate_kappa(const ConeSpec& k, const FaceHandle& f, const BoundedRegion& region,
                                  const ProbeOptions& opt) {
  Probe p{k, f, region, opt, Route::kDefinition, f.affine_hull.basepoint(), f.affine_hull.basis(),
          f.affine_hull.dim()};
  return run_probe(p);
}

ErrorBoundEstimate blr_check(const ConeSpec& k, const FaceHandle& f, const BoundedRegion& region,
                             const ProbeOptions& opt) {
  Probe p{k, f, region, opt, Route::kBlr, f.affine_hull.basepoint(), full_frame(f), f.affine_hull.dim()};
  return run_probe(p);
}

ErrorBoundEstimate subtransversality_check(const ConeSpec& k, const FaceHandle& f, const Vec& x_star,
                                           double radius, const ProbeOptions& opt) {
  require_dim(k.dim(), x_star.size(), "subtransversality_check");
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "subtransversality_check: radius must be positive");
  if (f.distance(x_star) > kDefaultTolerance.bound(x_star.norm()))
    throw Error(ErrorCode::kInvalidArgument, "subtransversality_check: x_star is not in F");
  const BoundedRegion ball = BoundedRegion::ball(x_star, radius);
  Probe p{k, f, ball, opt, Route::kSubtransversality, f.affine_hull.basepoint(), full_frame(f), f.affine_hull.dim()};
  return run_probe(p);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::kInvalidArgument, "fit_slope: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kInvalidArgument, "fit_slope: abscissae coincide");
  return sxy / sxx;
}

WitnessReport evaluate_witness(const ConeSpec& k, const FaceHandle& f, const WitnessCurve& w,
                               const ProjectionOptions& popt) {
  if (!w.point) throw Error(ErrorCode::kInvalidArgument, "evaluate_witness: curve has no parameterization");
  WitnessReport rep;
  rep.curve = w;
  rep.rows.resize(w.t_grid.size());
  for (std::size_t i = 0; i < w.t_grid.size(); ++i) {
    const double t = w.t_grid[i];
    if (!(t > 0.0) || (i > 0 && !(t < w.t_grid[i - 1])))
      throw Error(ErrorCode::kInvalidArgument, "evaluate_witness: t_grid must be positive and decreasing");
    const Vec x = w.point(t);
    require_dim(k.dim(), x.size(), "evaluate_witness");
    if (f.affine_hull.distance(x) > 1e-10)
      throw Error(ErrorCode::kInvalidArgument, "evaluate_witness: curve point at t = " + std::to_string(t) + " leaves aff F");
    rep.rows[i].t = t;
    rep.rows[i].point = x;
  }
  parallel_for(rep.rows.size(), [&](std::size_t i) {
    WitnessRow& r = rep.rows[i];
    r.dist_face = f.distance(r.point);
    r.dist_cone = distance(k, r.point, popt);
  });
  std::vector<double> lt, lr, lq;
  for (auto& r : rep.rows) {
    if (r.dist_face < 1e-12 || r.dist_cone < 1e-12) {
      r.used_in_fit = false;
      rep.warnings.push_back("t = " + std::to_string(r.t) + ": distance below 1e-12, excluded from the fit");
      continue;
    }
    r.ratio = r.dist_face / r.dist_cone;
    lt.push_back(std::log(r.t));
    lr.push_back(std::log(r.ratio));
    lq.push_back(-2.0 * std::log(r.ratio));
  }
  if (lt.size() >= 2) {
    rep.ratio_slope = fit_slope(lt, lr);
    rep.inverse_sq_slope = fit_slope(lt, lq);
    rep.curve.fitted_growth_exponent = -rep.ratio_slope;
  } else {
    rep.warnings.push_back("fewer than two usable points; no slope fitted");
  }
  return rep;
}

}  // namespace conelab
