#include "conelab/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "conelab/solvers.hpp"

namespace conelab {

Vec project_orthant(const Vec& x) { return x.cwiseMax(0.0); }

Vec project_soc(const Vec& x) {
  const Index n = x.size();
  const double t = x(n - 1);
  const double nv = x.head(n - 1).norm();
  if (nv <= t) return x;
  if (nv <= -t) return Vec::Zero(n);
  const double a = 0.5 * (nv + t);
  Vec p(n);
  p.head(n - 1) = x.head(n - 1) * (a / nv);
  p(n - 1) = a;
  return p;
}

Mat project_psd(const Mat& s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (s + s.transpose()));
  const Vec lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

Vec project_psd_svec(const Vec& x) {
  const Mat s = smat(x);
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  if (es.eigenvalues().minCoeff() >= 0.0) return x;
  const Vec lam = es.eigenvalues().cwiseMax(0.0);
  return svec(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose());
}

Vec project_max_block_norm_cone(const Vec& x, std::span<const Index> block_sizes) {
  Index total = 0;
  for (Index b : block_sizes) total += b;
  require_dim(total + 1, x.size(), "project_max_block_norm_cone");
  const double t = x(total);
  std::vector<double> norms;
  for (Index off = 0, i = 0; i < static_cast<Index>(block_sizes.size()); off += block_sizes[i], ++i)
    norms.push_back(x.segment(off, block_sizes[i]).norm());
  if (*std::max_element(norms.begin(), norms.end()) <= t) return x;
  // s solves s = t + sum_i (n_i - s)_+, a monotone piecewise-linear equation.
  // The first k whose candidate clears the next norm is the solution; the
  // candidate then stays below sorted[k] by induction, so testing that bound
  // as well only lets rounding at ties skip the right k.
  std::vector<double> sorted = norms;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double s = t, acc = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    acc += sorted[k];
    const double cand = (t + acc) / static_cast<double>(k + 2);
    const double next = k + 1 < sorted.size() ? sorted[k + 1] : -std::numeric_limits<double>::infinity();
    if (cand >= next) {
      s = cand;
      break;
    }
  }
  if (s <= 0.0) return Vec::Zero(x.size());
  Vec p = x;
  for (Index off = 0, i = 0; i < static_cast<Index>(block_sizes.size()); off += block_sizes[i], ++i) {
    const double n = norms[static_cast<std::size_t>(i)];
    if (n > s) p.segment(off, block_sizes[i]) *= s / n;
  }
  p(total) = s;
  return p;
}

namespace {

ProjectionResult finish(const Vec& x, Vec p, ProjectionMethod m, int iters = 0, double gap = 0.0) {
  ProjectionResult r;
  r.distance = (x - p).norm();
  r.point = std::move(p);
  r.method = m;
  r.iterations = iters;
  r.certificate_gap = gap;
  return r;
}

// Optimality residual of p = A c as the projection of x onto cone(A).
double cone_gap(const Mat& a, const Vec& x, const Vec& p) {
  const Vec r = x - p;
  double g = std::abs(p.dot(r));
  if (a.cols() > 0) {
    const Vec w = a.transpose() * r;
    const Vec n = a.colwise().norm();
    for (Index i = 0; i < w.size(); ++i)
      if (n(i) > 0.0) g = std::max(g, w(i) / n(i));
  }
  return std::max(g, 0.0);
}

// Exchange refinement: insert curve parameters next to the support of the
// current solution until the distance stops decreasing.
template <class Solve>
ProjectionResult refine_on_curves(const HullSampler& sampler, HullSample s,
                                  const Solve& solve, const ProjectionOptions& opt) {
  std::vector<Index> support;
  ProjectionResult best = solve(s.points, std::vector<Index>{}, support);
  if (!opt.refine_curves) return best;
  int stalls = 0;
  int total_iters = best.iterations;
  for (int round = 0; round < opt.refine_rounds; ++round) {
    std::vector<Vec> added;
    std::vector<int> added_curve;
    std::vector<double> added_param, added_spacing;
    for (Index i : support) {
      const int c = s.curve[static_cast<std::size_t>(i)];
      if (c < 0) continue;
      const Curve& cv = sampler.curves[static_cast<std::size_t>(c)];
      double& h = s.spacing[static_cast<std::size_t>(i)];
      if (h < 1e-13 * (cv.t1 - cv.t0)) continue;
      h *= 0.5;
      for (double sign : {-1.0, 1.0}) {
        double t = s.param[static_cast<std::size_t>(i)] + sign * h;
        if (cv.periodic) {
          const double len = cv.t1 - cv.t0;
          t = cv.t0 + std::fmod(std::fmod(t - cv.t0, len) + len, len);
        } else if (t < cv.t0 || t > cv.t1) {
          continue;
        }
        added.push_back(cv.point(t));
        added_curve.push_back(c);
        added_param.push_back(t);
        added_spacing.push_back(h);
      }
    }
    if (added.empty()) break;
    const Index old = s.points.cols();
    s.points.conservativeResize(s.points.rows(), old + static_cast<Index>(added.size()));
    for (std::size_t k = 0; k < added.size(); ++k) {
      s.points.col(old + static_cast<Index>(k)) = added[k];
      s.curve.push_back(added_curve[k]);
      s.param.push_back(added_param[k]);
      s.spacing.push_back(added_spacing[k]);
    }
    std::vector<Index> next_support;
    ProjectionResult r = solve(s.points, support, next_support);
    total_iters += r.iterations;
    if (r.distance < best.distance * (1.0 - 1e-13)) {
      stalls = 0;
    } else if (++stalls >= 2) {
      if (r.distance < best.distance) best = r;
      break;
    }
    if (r.distance <= best.distance) {
      best = r;
      support = next_support;
    } else {
      support.insert(support.end(), next_support.begin(), next_support.end());
    }
  }
  best.iterations = total_iters;
  return best;
}

ProjectionResult project_linear_image(const spec::LinearImage& l, const Vec& x,
                                      const ProjectionOptions& opt) {
  if (l.orthonormal) {
    const ProjectionResult inner = project(l.inner, l.map.transpose() * x, opt);
    return finish(x, l.map * inner.point, ProjectionMethod::kComposite, inner.iterations,
                  inner.certificate_gap);
  }
  // Accelerated projected gradient on 0.5 ||A y - x||^2 over y in the inner cone.
  Eigen::JacobiSVD<Mat> svd(l.map, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double lip = svd.singularValues()(0) * svd.singularValues()(0);
  Vec y = project(l.inner, svd.solve(x), opt).point;
  Vec z = y;
  double tk = 1.0;
  const double tol = opt.tol * std::max(1.0, x.norm());
  double step_norm = 0.0;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    const Vec grad = l.map.transpose() * (l.map * z - x);
    const Vec y_next = project(l.inner, z - grad / lip, opt).point;
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    z = y_next + ((tk - 1.0) / tn) * (y_next - y);
    step_norm = (y_next - y).norm();
    y = y_next;
    tk = tn;
    if (step_norm * std::sqrt(lip) <= tol) break;
  }
  if (it == opt.max_iter)
    throw NonConvergenceError("linear_image projection did not converge", l.map * y, step_norm, it);
  return finish(x, l.map * y, ProjectionMethod::kProjectedGradient, it, step_norm * std::sqrt(lip));
}

}  // namespace

ProjectionResult project_hull(const Mat& samples, const Vec& x) {
  const MinNormResult r = min_norm_point(samples, x);
  return finish(x, r.point, ProjectionMethod::kHullQp, r.iterations, r.gap);
}

ProjectionResult project_hull(const HullSampler& sampler, const Vec& x, const ProjectionOptions& opt) {
  require_dim(sampler.ambient_dim(), x.size(), "project_hull");
  auto solve = [&](const Mat& pts, const std::vector<Index>& warm, std::vector<Index>& support) {
    const MinNormResult r = min_norm_point(pts, x, warm);
    support = r.support;
    return finish(x, r.point, ProjectionMethod::kHullQp, r.iterations, r.gap);
  };
  return refine_on_curves(sampler, sampler.sample(), solve, opt);
}

ProjectionResult project_generated(const Mat& generators, const Vec& x) {
  require_dim(generators.rows(), x.size(), "project_generated");
  if (generators.cols() == 0) return finish(x, Vec::Zero(x.size()), ProjectionMethod::kClosedForm);
  const NnlsResult r = nnls(generators, x);
  const Vec p = generators * r.coefficients;
  return finish(x, p, ProjectionMethod::kActiveSet, r.iterations, cone_gap(generators, x, p));
}

ProjectionResult project_conic_hull(const SliceSpec& slice, const Vec& x, const ProjectionOptions& opt) {
  require_dim(slice.e.size(), x.size(), "project_conic_hull");
  auto solve = [&](const Mat& pts, const std::vector<Index>& warm, std::vector<Index>& support) {
    const NnlsResult r = nnls(pts, x, warm);
    support = r.passive;
    const Vec p = pts * r.coefficients;
    return finish(x, p, ProjectionMethod::kHullQp, r.iterations, cone_gap(pts, x, p));
  };
  return refine_on_curves(slice.generator, slice.generator.sample(), solve, opt);
}

ProjectionResult project_polyhedral(const Mat& rows, const Vec& x) {
  require_dim(rows.cols(), x.size(), "project_polyhedral");
  if (rows.rows() == 0) return finish(x, x, ProjectionMethod::kClosedForm);
  // Moreau: the polar of {rows x <= 0} is cone(rows^T).
  const Mat g = rows.transpose();
  const NnlsResult r = nnls(g, x);
  const Vec polar = g * r.coefficients;
  Vec p = x - polar;
  double gap = std::abs(p.dot(polar));
  const Vec viol = rows * p;
  const Vec n = rows.rowwise().norm();
  for (Index i = 0; i < viol.size(); ++i)
    if (n(i) > 0.0) gap = std::max(gap, viol(i) / n(i));
  return finish(x, std::move(p), ProjectionMethod::kActiveSet, r.iterations, gap);
}

ProjectionResult dykstra_intersection(std::span<const ConeSpec> parts, const Vec& x, int max_iter,
                                      double tol) {
  if (parts.empty()) throw Error(ErrorCode::kInvalidArgument, "dykstra_intersection: no parts");
  for (const auto& p : parts) require_dim(p.dim(), x.size(), "dykstra_intersection");
  if (parts.size() == 1) return project(parts.front(), x);
  const double scale = std::max(1.0, x.norm());
  const double bound = tol * scale;
  bool all_cones = true;
  for (const auto& p : parts) all_cones = all_cones && p.is_cone();
  Vec y = x;
  std::vector<Vec> corr(parts.size(), Vec::Zero(x.size()));
  double change = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const Vec y_start = y;
    double corr_change = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const Vec z = y + corr[i];
      Vec y_next = project(parts[i], z).point;
      Vec c_next = z - y_next;
      corr_change = std::max(corr_change, (c_next - corr[i]).norm());
      corr[i] = std::move(c_next);
      y = std::move(y_next);
    }
    change = (y - y_start).norm();
    if (change > bound) continue;
    if (corr_change <= bound) return finish(x, y, ProjectionMethod::kDykstra, it, change);
    if (!all_cones) continue;
    // Corrections of cone parts lie in the polars, so x - y is in the polar of
    // the intersection; feasibility plus complementarity certify optimality.
    double infeas = 0.0;
    for (const auto& p : parts) infeas = std::max(infeas, distance(p, y));
    const double comp = std::abs((x - y).dot(y)) / scale;
    if (infeas <= bound && comp <= bound)
      return finish(x, y, ProjectionMethod::kDykstra, it, std::max({change, infeas, comp}));
  }
  throw NonConvergenceError("dykstra_intersection: max_iter exhausted", y, change, max_iter);
}

ProjectionResult project(const ConeSpec& k, const Vec& x, const ProjectionOptions& opt) {
  require_dim(k.dim(), x.size(), "project");
  struct {
    const Vec& x;
    const ProjectionOptions& opt;

    ProjectionResult operator()(const spec::Halfspace& h) const {
      const double v = h.normal.dot(x) - h.offset;
      if (v <= 0.0) return finish(x, x, ProjectionMethod::kClosedForm);
      return finish(x, x - (v / h.normal.squaredNorm()) * h.normal, ProjectionMethod::kClosedForm);
    }
    ProjectionResult operator()(const spec::LinearSubspace& s) const {
      return finish(x, s.basis * (s.basis.transpose() * x), ProjectionMethod::kClosedForm);
    }
    ProjectionResult operator()(const spec::Polyhedral& p) const { return project_polyhedral(p.rows, x); }
    ProjectionResult operator()(const spec::FinitelyGenerated& g) const {
      return project_generated(g.generators, x);
    }
    ProjectionResult operator()(const spec::SecondOrder&) const {
      return finish(x, project_soc(x), ProjectionMethod::kClosedForm);
    }
    ProjectionResult operator()(const spec::Psd&) const {
      return finish(x, project_psd_svec(x), ProjectionMethod::kEigenClip);
    }
    ProjectionResult operator()(const spec::NonnegativeOrthant&) const {
      return finish(x, project_orthant(x), ProjectionMethod::kClosedForm);
    }
    ProjectionResult operator()(const spec::Product& p) const {
      Vec out(x.size());
      int iters = 0;
      double gap = 0.0;
      Index off = 0;
      for (const auto& f : p.factors) {
        const ProjectionResult r = project(f, x.segment(off, f.dim()), opt);
        out.segment(off, f.dim()) = r.point;
        iters += r.iterations;
        gap += r.certificate_gap;
        off += f.dim();
      }
      return finish(x, out, ProjectionMethod::kComposite, iters, gap);
    }
    ProjectionResult operator()(const spec::Intersection& in) const {
      return dykstra_intersection(in.parts, x, opt.max_iter, opt.tol);
    }
    ProjectionResult operator()(const spec::LinearImage& l) const { return project_linear_image(l, x, opt); }
    ProjectionResult operator()(const spec::ConicHull& c) const { return project_conic_hull(c.slice, x, opt); }
    ProjectionResult operator()(const spec::ConvexHull& c) const { return project_hull(c.sampler, x, opt); }
    ProjectionResult operator()(const spec::Affine& a) const {
      return finish(x, a.subspace.project(x), ProjectionMethod::kClosedForm);
    }
    ProjectionResult operator()(const spec::Named& n) const { return n.oracle->project(x); }
  } v{x, opt};
  return visit(k, v);
}

double distance(const ConeSpec& k, const Vec& x, const ProjectionOptions& opt) {
  return project(k, x, opt).distance;
}

MoreauSplit moreau_decompose(const ConeSpec& k, const Vec& x, const ProjectionOptions& opt) {
  if (!k.is_cone()) throw Error(ErrorCode::kInvalidArgument, "moreau_decompose: set is not a cone");
  MoreauSplit m;
  m.original = x;
  m.cone_part = project(k, x, opt).point;
  m.polar_part = x - m.cone_part;
  m.residual = (x - m.cone_part - m.polar_part).norm();
  m.orthogonality = std::abs(m.cone_part.dot(m.polar_part));
  return m;
}

}  // namespace conelab
