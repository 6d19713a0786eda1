#include "conelab/hull_constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conelab/parallel.hpp"
#include "conelab/projection.hpp"

namespace conelab {

double slice_radius(const SliceSpec& slice) {
  const HullSample s = slice.generator.sample();
  if (s.points.cols() == 0) throw Error(ErrorCode::kInvalidArgument, "slice_radius: empty slice sample");
  return s.points.colwise().norm().maxCoeff();
}

double slice_radius(const ConeSpec& compact, int count) {
  if (const auto* h = compact.get_if<spec::ConvexHull>()) {
    const HullSample s = h->sampler.sample();
    if (s.points.cols() == 0) throw Error(ErrorCode::kInvalidArgument, "slice_radius: empty sample");
    return s.points.colwise().norm().maxCoeff();
  }
  if (const auto* n = compact.get_if<spec::Named>()) {
    if (!n->oracle->is_cone())
      if (auto g = n->oracle->extreme_grid(count)) return g->colwise().norm().maxCoeff();
  }
  if (const auto* a = compact.get_if<spec::Affine>())
    if (a->subspace.dim() == 0) return a->subspace.basepoint().norm();
  throw Error(ErrorCode::kUnsupported, "slice_radius: needs a sampled compact set, got " + compact.kind());
}

namespace {

// Unit directions of F: a sphere grid of span F projected onto F.
Mat face_directions(const FaceHandle& f, int n_dirs) {
  const Mat grid = f.span_basis * sphere_grid(f.span_basis.cols(), n_dirs);
  std::vector<Vec> cols(grid.cols());
  parallel_for(cols.size(), [&](std::size_t j) { cols[j] = f.project(grid.col(static_cast<Index>(j))).point; });
  Mat out(grid.rows(), 0);
  for (const Vec& y : cols) {
    const double n = y.norm();
    if (n > 1e-12) {
      out.conservativeResize(Eigen::NoChange, out.cols() + 1);
      out.col(out.cols() - 1) = y / n;
    }
  }
  if (out.cols() == 0) throw Error(ErrorCode::kInvalidArgument, "face directions: F has no nonzero sampled element");
  return out;
}

void require_face_dim(const FaceHandle& f, const char* what) {
  if (f.span_basis.cols() <= 1)
    throw Error(ErrorCode::kHypothesis, std::string(what) +
                                            ": dim F <= 1; the zero face and rays are handled by the "
                                            "low-dimensional cases, which need no antipodality constant");
}

}  // namespace

AlphaEstimate antipodality_alpha(const FaceHandle& f, int n_dirs) {
  require_face_dim(f, "antipodality_alpha");
  const Mat y = face_directions(f, n_dirs);
  const Mat x = f.span_basis * sphere_grid(f.span_basis.cols(), n_dirs);
  std::vector<double> best(x.cols());
  parallel_for(best.size(), [&](std::size_t i) { best[i] = (y.transpose() * x.col(static_cast<Index>(i))).maxCoeff(); });
  // The x grid limits the estimate to its covering radius; a compass search on
  // the sphere of span F from the worst grid points closes most of that gap.
  // It only ever lowers the value, so alpha stays nonincreasing in n_dirs.
  const Index m = f.span_basis.cols();
  auto g = [&](const Vec& c) { return (y.transpose() * (f.span_basis * c.normalized())).maxCoeff(); };
  std::vector<std::size_t> order(best.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t starts = std::min<std::size_t>(4, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                    [&](std::size_t i, std::size_t j) { return best[i] < best[j] || (best[i] == best[j] && i < j); });
  double alpha = best[order[0]];
  const double res = sphere_grid_resolution(m, n_dirs);
  for (std::size_t s = 0; s < starts; ++s) {
    Vec c = f.span_basis.transpose() * x.col(static_cast<Index>(order[s]));
    double val = best[order[s]];
    for (double step = res; step > 1e-9; step *= 0.5) {
      bool moved = true;
      for (int sweep = 0; moved && sweep < 64; ++sweep) {
        moved = false;
        for (Index i = 0; i < m; ++i) {
          for (double sign : {1.0, -1.0}) {
            Vec trial = c;
            trial(i) += sign * step;
            trial.normalize();
            const double v = g(trial);
            if (v < val - 1e-15) {
              val = v;
              c = trial;
              moved = true;
            }
          }
        }
      }
    }
    alpha = std::min(alpha, val);
  }
  AlphaEstimate a;
  a.alpha = alpha;
  a.resolution = sphere_grid_resolution(f.span_basis.cols(), n_dirs);
  a.n_dirs = n_dirs;
  return a;
}

Vec face_argmax(const FaceHandle& f, const Vec& x, int n_dirs) {
  require_face_dim(f, "face_argmax");
  require_dim(f.ambient_dim(), x.size(), "face_argmax");
  const Mat y = face_directions(f, n_dirs);
  Index j = 0;
  (y.transpose() * x).maxCoeff(&j);
  return y.col(j);
}

double beta_from_alpha(double alpha) {
  if (!(alpha > -1.0)) throw Error(ErrorCode::kInvalidArgument, "beta_from_alpha: alpha must exceed -1");
  return std::max(1.0, 1.0 / std::sqrt(1.0 - alpha * alpha));
}

HullConstants make_hull_constants(double r, double alpha, double kappa_slice, double e_norm, double alpha_resolution) {
  HullConstants h;
  h.r = r;
  h.alpha = alpha;
  h.alpha_resolution = alpha_resolution;
  h.beta = beta_from_alpha(alpha);
  h.kappa_slice = kappa_slice;
  h.e_norm = e_norm;
  h.gamma = h.beta * kappa_slice * r * e_norm;
  return h;
}

HullConstants measure_hull_constants(const SliceSpec& slice, const FaceHandle& cone_face, double kappa_slice,
                                     int n_dirs) {
  const AlphaEstimate a = antipodality_alpha(cone_face, n_dirs);
  return make_hull_constants(slice_radius(slice), a.alpha, kappa_slice, slice.e.norm(), a.resolution);
}

SliceBoundReport verify_slice_bound(const ConeSpec& conic_hull, int n_samples, std::uint64_t seed, double tol,
                                    double spread) {
  const auto* ch = conic_hull.get_if<spec::ConicHull>();
  if (!ch) throw Error(ErrorCode::kInvalidArgument, "verify_slice_bound: needs a conic hull, got " + conic_hull.kind());
  const SliceSpec& slice = ch->slice;
  const Mat points = slice.generator.sample().points;
  SliceBoundReport rep;
  rep.r = points.colwise().norm().maxCoeff();
  rep.e_norm = slice.e.norm();
  rep.worst_margin = -std::numeric_limits<double>::infinity();

  const Index d = slice.ambient_dim();
  const Vec foot = slice.level * slice.e / slice.e.squaredNorm();
  const Mat plane = orthogonal_complement(slice.e / rep.e_norm, d);
  Rng rng(seed);
  std::vector<Vec> xs;
  int draws = 0;
  while (static_cast<int>(xs.size()) < n_samples) {
    if (++draws > 100 * n_samples + 100)
      throw Error(ErrorCode::kInvalidArgument, "verify_slice_bound: H \\ (-K*) is not reached by the sampler");
    const Vec x = foot + plane * uniform_in_ball(plane.cols(), spread * rep.r, rng);
    if (project(conic_hull, x).point.norm() <= 1e-12 * (1.0 + x.norm())) {
      ++rep.rejected;
      continue;
    }
    xs.push_back(x);
  }
  std::vector<double> margin(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const double dc = project_hull(points, xs[i]).distance;
    const double dk = distance(conic_hull, xs[i]);
    margin[i] = dc - rep.e_norm * rep.r * dk;
  });
  rep.samples = static_cast<int>(xs.size());
  for (double m : margin) {
    rep.worst_margin = std::max(rep.worst_margin, m);
    if (m > tol) ++rep.violations;
  }
  return rep;
}

MonotoneShiftReport verify_monotone_shift(const ConeSpec& k, const FaceHandle& f, const Vec& x,
                                          const std::vector<double>& t_grid, double beta, int n_dirs, double tol) {
  require_dim(k.dim(), x.size(), "verify_monotone_shift");
  if ((x - f.span_projector() * x).norm() > 1e-9 * (1.0 + x.norm()))
    throw Error(ErrorCode::kInvalidArgument, "verify_monotone_shift: x is not in span F");
  for (double t : t_grid)
    if (!(t >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "verify_monotone_shift: t must be nonnegative");
  MonotoneShiftReport rep;
  rep.y = face_argmax(f, x, n_dirs);
  rep.beta = beta > 0.0 ? beta : beta_from_alpha(antipodality_alpha(f, n_dirs).alpha);
  const double dk = distance(k, x);
  const double df = f.distance(x);
  rep.rows.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    MonotoneShiftRow& r = rep.rows[i];
    r.t = t_grid[i];
    const Vec xt = x + r.t * rep.y;
    r.dist_cone = dk;
    r.dist_face = df;
    r.dist_shifted_cone = distance(k, xt);
    r.dist_shifted_face = f.distance(xt);
    r.cone_holds = r.dist_shifted_cone <= dk + tol * (1.0 + dk);
    r.face_holds = df <= rep.beta * r.dist_shifted_face + tol * (1.0 + df);
  });
  rep.all_hold = std::all_of(rep.rows.begin(), rep.rows.end(),
                             [](const MonotoneShiftRow& r) { return r.cone_holds && r.face_holds; });
  return rep;
}

}  // namespace conelab
