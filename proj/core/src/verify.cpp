#include "conelab/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "conelab/amenability.hpp"
#include "conelab/gallery.hpp"
#include "conelab/hull_constants.hpp"
#include "conelab/parallel.hpp"
#include "conelab/proj_exposed.hpp"
#include "conelab/projection.hpp"
#include "conelab/solvers.hpp"

namespace conelab::verify {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

struct Recorder {
  CheckResult& r;
  void add(std::string name, double value, std::string expected, bool ok) {
    r.measurements.push_back({std::move(name), value, std::move(expected), ok});
  }
  void at_most(std::string name, double value, double bound) {
    add(std::move(name), value, "<= " + num(bound), value <= bound);
  }
  void below(std::string name, double value, double bound) {
    add(std::move(name), value, "< " + num(bound), value < bound);
  }
  void at_least(std::string name, double value, double bound) {
    add(std::move(name), value, ">= " + num(bound), value >= bound);
  }
  void above(std::string name, double value, double bound) {
    add(std::move(name), value, "> " + num(bound), value > bound);
  }
  void within(std::string name, double value, double lo, double hi) {
    add(std::move(name), value, "in [" + num(lo) + ", " + num(hi) + "]", value >= lo && value <= hi);
  }
  void zero(std::string name, int count) { add(std::move(name), count, "== 0", count == 0); }
  void flag(std::string name, bool ok, const std::string& expected) { add(std::move(name), ok ? 1.0 : 0.0, expected, ok); }
};

Vec v4(double a, double b, double c, double d) { return (Vec(4) << a, b, c, d).finished(); }

// ---------------------------------------------------------------------------

void witness_asymptotics(const CheckOptions& opt, Recorder& rec) {
  const std::vector<double> ts{0.2, 0.1, 0.05, 0.025};
  const ConeSpec c = gallery::nice_not_amenable_C(opt.density);
  const FaceHandle f = gallery::disk_alpha_face(c);
  double worst = 0.0;
  for (double t : ts) {
    const double closed = std::pow(1.0 - std::sqrt(5.0 - 4.0 * std::cos(2.0 * t)), 2);
    worst = std::max(worst, std::abs(std::pow(f.distance(gallery::witness_w(t)), 2) - closed));
  }
  rec.at_most("face_distance_sq_error", worst, 1e-10);
  ProjectionOptions po;
  po.refine_curves = true;
  const WitnessReport w = evaluate_witness(c, f, WitnessCurve{"w", gallery::witness_w, ts}, po);
  rec.within("slope_log_dist_C_sq_over_dist_F_sq", w.inverse_sq_slope, 3.7, 4.3);
  for (const WitnessRow& r : w.rows)
    rec.at_most("dist_C_sq_vs_gamma_bound_t=" + num(r.t), r.dist_cone * r.dist_cone - gallery::witness_hull_bound_sq(r.t),
                1e-12);
  rec.r.notes.push_back("hull distances use curve-exchange refinement on " + std::to_string(opt.density) +
                        " samples per curve");
}

void det_m(const CheckOptions&, Recorder& rec) {
  double worst = 0.0, min_bracket = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const double t = kPi * (i + 1) / 52.0;
    for (int j = 0; j < 50; ++j) {
      const double s = t + (kPi - t) * (j + 1) / 51.0;
      const gallery::DetM d = gallery::det_M(t, s);
      worst = std::max(worst, std::abs(d.numeric - d.closed_form));
      min_bracket = std::min(min_bracket, d.bracket);
    }
  }
  rec.at_most("max_abs_difference", worst, 1e-8);
  rec.at_least("min_bracket", min_bracket, 2.0);
}

void exposing_normals(const CheckOptions&, Recorder& rec) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 64; ++k) worst = std::min(worst, gallery::exposing_normal(2.0 * kPi * k / 64).worst_gap);
  rec.above("min_exposing_gap", worst, 0.0);
}

void dual_sum(const CheckOptions& opt, Recorder& rec) {
  const gallery::CylinderObjects o = gallery::cylinder_hull_objects();
  FaceHandle f = o.lifted_disk;
  f.dual_sum = nullptr;  // decide through alternating projections, not the formula
  // Odd multiples of 2/9: no grid point lies on the boundary of the formula set.
  std::vector<Vec> grid;
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b)
      for (int c = 0; c < 10; ++c)
        for (int d = 0; d < 10; ++d) {
          auto g = [](int i) { return -2.0 + 4.0 * i / 9.0; };
          grid.push_back(v4(g(a), g(b), g(c), g(d)));
        }
  std::vector<int> disagree(grid.size(), 0);
  parallel_for(grid.size(), [&](std::size_t i) {
    const Vec& s = grid[i];
    const bool formula = std::hypot(s(0), s(1)) <= s(2) + s(3) + 1e-9;
    disagree[i] = dual_sum_membership(o.k_tilde, f, s, 1e-9).in_sum != formula;
  });
  int n = 0;
  for (int x : disagree) n += x;
  rec.zero("membership_disagreements_on_1e4_grid", n);

  const HullSample g = gallery::curve_sampler(opt.density, {}, true).sample();
  double worst_res = 0.0, worst_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 32; ++k)
    for (double z : {-1.5, -0.5, 0.0, 0.75, 1.5})
      for (double a : {0.5, 2.0}) {
        const double th = 2.0 * kPi * (k + 0.5) / 32;
        const gallery::BoundaryDecomposition d =
            gallery::decompose_dual_sum_boundary(v4(a * std::cos(th), a * std::sin(th), z, a - z), g.points);
        worst_res = std::max(worst_res, d.residual);
        worst_margin = std::min(worst_margin, d.dual_margin);
      }
  rec.below("boundary_decomposition_residual", worst_res, 1e-9);
  rec.at_least("boundary_dual_part_margin", worst_margin, -1e-9);
}

void sturm(const CheckOptions& opt, Recorder& rec) {
  for (double kappa : {1.0, 10.0, 100.0}) {
    const double eps = gallery::sturm_eps_star(kappa);
    const gallery::SturmPoint p = gallery::sturm_family(eps);
    const std::string tag = "kappa=" + num(kappa);
    rec.above(tag + "_dist_F_minus_kappa_bound", p.dist_to_F - kappa * (p.dist_to_C + p.dist_to_aff), 0.0);
    rec.above(tag + "_nearest_y11_minus_lower_bound", p.nearest_y11 - gallery::sturm_y11_bound(eps, kappa), -1e-6);
  }
  const ConeSpec s = gallery::sturm_slice();
  ProbeOptions po;
  po.seed = opt.seed;
  const ErrorBoundEstimate e =
      estimate_kappa(s, gallery::sturm_face(s), BoundedRegion::ball(svec(Mat::Identity(2, 2)), 3.0), po);
  rec.flag("ball_radius_3_verdict_bounded", e.verdict == ProbeVerdict::kBounded, "bounded");
  rec.r.notes.push_back("ball probe kappa_hat " + num(e.kappa_hat));
}

void slice_bound(const CheckOptions& opt, Recorder& rec) {
  const SliceBoundReport g = verify_slice_bound(gallery::nice_not_amenable_K(opt.density), 1000, opt.seed);
  rec.zero("gallery_slice_violations", g.violations);
  Rng rng(opt.seed);
  HullSampler poly;
  poly.points.resize(4, 12);
  for (Index j = 0; j < 12; ++j) poly.points.col(j) << gaussian_vector(3, rng), 1.0;
  SliceSpec slice{Vec::Unit(4, 3), 1.0, poly, 3};
  const SliceBoundReport p = verify_slice_bound(ConeSpec::conic_hull(slice), 1000, opt.seed + 1);
  rec.zero("random_polytope_slice_violations", p.violations);
}

void moreau(const CheckOptions& opt, Recorder& rec) {
  struct Family {
    std::string name;
    std::vector<ConeSpec> cones;
  };
  std::vector<Family> fams(3);
  fams[0].name = "orthant";
  fams[1].name = "second_order";
  fams[2].name = "psd";
  for (Index d = 1; d <= 10; ++d) fams[0].cones.push_back(ConeSpec::orthant(d));
  for (Index d = 2; d <= 10; ++d) fams[1].cones.push_back(ConeSpec::second_order(d));
  for (Index n = 1; n <= 5; ++n) fams[2].cones.push_back(ConeSpec::psd(n));
  for (std::size_t fi = 0; fi < fams.size(); ++fi) {
    const Family& fam = fams[fi];
    const int n = 10000;
    std::vector<Vec> xs(n);
    std::vector<std::size_t> which(n);
    Rng rng(opt.seed + fi);
    for (int i = 0; i < n; ++i) {
      which[i] = static_cast<std::size_t>(i) % fam.cones.size();
      xs[i] = 2.0 * gaussian_vector(fam.cones[which[i]].dim(), rng);
    }
    std::vector<double> res(n), orth(n), polar(n);
    parallel_for(n, [&](std::size_t i) {
      const ConeSpec& k = fam.cones[which[i]];
      const MoreauSplit m = moreau_decompose(k, xs[i]);
      const double scale = std::max(1.0, xs[i].norm());
      res[i] = m.residual / scale;
      orth[i] = std::abs(m.cone_part.dot(m.polar_part)) / (scale * scale);
      // The cones are self-dual: -q must lie in K.
      polar[i] = distance(k, -m.polar_part) / scale;
    });
    rec.at_most(fam.name + "_residual", *std::max_element(res.begin(), res.end()), 1e-10);
    rec.at_most(fam.name + "_orthogonality", *std::max_element(orth.begin(), orth.end()), 1e-10);
    rec.at_most(fam.name + "_polar_membership", *std::max_element(polar.begin(), polar.end()), 1e-10);
  }
  rec.r.notes.push_back("errors are relative to max(1, ||x||) (orthogonality to max(1, ||x||^2))");
}

// Nearest doubly nonnegative 2x2 matrix by enumeration: x itself, the
// clipped diagonal, and the best nonnegative rank-one v v^T over an angle
// grid refined by golden section.
Mat dnn2_brute_force(const Mat& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(x);
  if (es.eigenvalues().minCoeff() >= 0.0 && x(0, 1) >= 0.0) return x;
  Mat best = Mat::Zero(2, 2);
  best(0, 0) = std::max(x(0, 0), 0.0);
  best(1, 1) = std::max(x(1, 1), 0.0);
  auto rank_one = [&](double th) {
    const Vec u = (Vec(2) << std::cos(th), std::sin(th)).finished();
    return Mat(std::max(0.0, u.dot(x * u)) * u * u.transpose());
  };
  auto f = [&](double th) { return (rank_one(th) - x).squaredNorm(); };
  double fbest = (best - x).squaredNorm();
  const int n = 4000;
  const double h = 0.5 * kPi / n;
  for (int i = 0; i <= n; ++i) {
    const double a = std::max(0.0, (i - 1) * h), b = std::min(0.5 * kPi, (i + 1) * h);
    if (f(i * h) > f(a) || f(i * h) > f(b)) continue;
    const double th = golden_section_min(f, a, b);
    if (f(th) < fbest) {
      fbest = f(th);
      best = rank_one(th);
    }
  }
  return best;
}

void dykstra_dnn(const CheckOptions& opt, Recorder& rec) {
  const ConeSpec dnn = ConeSpec::intersection({ConeSpec::psd(2), ConeSpec::orthant(3)});
  Rng rng(opt.seed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Mat x = smat(2.0 * gaussian_vector(3, rng));
    const ProjectionResult p = project(dnn, svec(x));
    worst = std::max(worst, (p.point - svec(dnn2_brute_force(x))).norm());
  }
  rec.at_most("max_distance_to_brute_force", worst, 1e-6);
}

void projections_dim4(const CheckOptions& opt, Recorder& rec) {
  ProjectionBuildOptions bo;
  bo.seed = opt.seed;
  auto record = [&](const std::string& tag, const ProjectionMap& p) {
    rec.below(tag + "_idempotency", p.idempotency_residual, 1e-12);
    rec.zero(tag + "_containment_violations", p.containment_violations);
    rec.zero(tag + "_fixed_violations", p.fixed_violations);
  };
  const ConeSpec o3 = ConeSpec::orthant(3);
  record("orthant3_rank_one", build_rank_one_projection(o3, Vec::Unit(3, 0), bo));
  record("orthant3_rank_two",
         build_rank_two_projection(o3, coordinate_face(o3, {0, 1}), Vec::Unit(3, 0), Vec::Unit(3, 1), bo));
  const ConeSpec p2 = ConeSpec::psd(2);
  Mat e11 = Mat::Zero(2, 2);
  e11(0, 0) = 1.0;
  record("psd2_diagonal_ray_rank_one", build_rank_one_projection(p2, svec(e11), bo));
  const gallery::CylinderObjects o = gallery::cylinder_hull_objects();
  const FaceHandle seg = gallery::cylinder_segment_face(o.k_tilde);
  record("cylinder_face_rank_two",
         build_rank_two_projection(o.k_tilde, seg, v4(1, 0, 1, 1), v4(1, 0, -1, 1), bo));
}

void sung_tam_gallery(const CheckOptions& opt, Recorder& rec) {
  const ConeSpec o3 = ConeSpec::orthant(3);
  for (const std::vector<Index>& facet : std::vector<std::vector<Index>>{{0, 1}, {0, 2}, {1, 2}}) {
    const SungTamResult r = sung_tam_probe(o3, coordinate_face(o3, facet));
    rec.flag("orthant_facet_" + std::to_string(facet[0]) + std::to_string(facet[1]) + "_no_converging_rays",
             r.outcome == SungTamResult::Outcome::kNoConvergingSequence, "no_converging_sequence_found");
  }
  SungTamOptions so;
  so.generator_count = opt.density;
  const ConeSpec k = gallery::nice_not_amenable_K(opt.density);
  const SungTamResult g = sung_tam_probe(k, gallery::lifted_disk_alpha_face(k), so);
  rec.flag("gallery_disk_dual_converging_rays", g.outcome == SungTamResult::Outcome::kConvergingExtremeRays,
           "converging_extreme_rays");
  rec.at_least("gallery_deepest_level", g.deepest_level, 8);
  if (!g.rays.empty()) rec.r.notes.push_back("nearest ray at distance " + num(g.rays.front().distance));
}

// A random (cone, face, region) triple over the atoms with structured faces.
struct Triple {
  std::string label;
  ConeSpec k;
  FaceHandle f;
  BoundedRegion region = BoundedRegion::ball(Vec::Zero(1), 1.0);
};

Vec random_face_point(int kind, Index dim, Rng& rng, std::string& label) {
  std::uniform_int_distribution<int> coin(0, 1);
  switch (kind) {
    case 0: {  // orthant: random zero pattern
      Vec x = gaussian_vector(dim, rng).cwiseAbs();
      for (Index i = 0; i < dim; ++i)
        if (coin(rng)) x(i) = 0.0;
      if (x.isZero()) x(0) = 1.0;
      label = "orthant(" + std::to_string(dim) + ")";
      return x;
    }
    case 1: {  // second-order: interior, boundary ray, apex rarely
      const int which = std::uniform_int_distribution<int>(0, 5)(rng) == 0 ? 2 : std::uniform_int_distribution<int>(0, 1)(rng);
      Vec x = gaussian_vector(dim, rng);
      const double n = x.head(dim - 1).norm();
      x(dim - 1) = which == 0 ? 2.0 * n + 1.0 : n;
      if (which == 2) x.setZero();
      label = "second_order(" + std::to_string(dim) + ")";
      return x;
    }
    case 2: {  // psd: V V^T with random rank, the zero face rarely
      const Index n = smat_order(dim);
      const Index r = std::uniform_int_distribution<Index>(0, 5)(rng) == 0 ? 0 : std::uniform_int_distribution<Index>(1, n)(rng);
      Mat v(n, r);
      for (Index j = 0; j < r; ++j) v.col(j) = gaussian_vector(n, rng);
      label = "psd(" + std::to_string(n) + ")";
      return svec(v * v.transpose());
    }
    default: {  // 2x2 doubly nonnegative: nonnegative rank one, a diagonal, or interior
      const int which = std::uniform_int_distribution<int>(0, 2)(rng);
      const Vec g = gaussian_vector(2, rng).cwiseAbs();
      Mat x = which == 0 ? Mat(g * g.transpose()) : Mat(g.asDiagonal());
      if (which == 1 && coin(rng)) x(1, 1) = 0.0;
      if (which == 2) x = Mat::Identity(2, 2) + 0.5 * (g * g.transpose()) / g.squaredNorm();
      label = "dnn(2)";
      return svec(x);
    }
  }
}

ConeSpec atom(int kind, Index dim) {
  if (kind == 0) return ConeSpec::orthant(dim);
  if (kind == 1) return ConeSpec::second_order(dim);
  if (kind == 2) return ConeSpec::psd(smat_order(dim));
  return ConeSpec::intersection({ConeSpec::psd(2), ConeSpec::orthant(3)});
}

Index atom_dim(int kind, Rng& rng) {
  if (kind == 0) return std::uniform_int_distribution<Index>(2, 5)(rng);
  if (kind == 1) return std::uniform_int_distribution<Index>(3, 5)(rng);
  if (kind == 2) return svec_dim(std::uniform_int_distribution<Index>(2, 3)(rng));
  return 3;
}

Triple random_triple(Rng& rng) {
  Triple t;
  const bool product = std::uniform_int_distribution<int>(0, 3)(rng) == 0;
  const int n_factors = product ? 2 : 1;
  std::vector<ConeSpec> cones;
  std::vector<Vec> points;
  for (int i = 0; i < n_factors; ++i) {
    const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
    const Index dim = atom_dim(kind, rng);
    std::string label;
    points.push_back(random_face_point(kind, dim, rng, label));
    cones.push_back(atom(kind, dim));
    t.label += (i ? " x " : "") + label;
  }
  t.k = product ? ConeSpec::product(cones) : cones.front();
  Vec x(t.k.dim());
  Index off = 0;
  for (const Vec& p : points) {
    x.segment(off, p.size()) = p;
    off += p.size();
  }
  t.f = minimal_face(t.k, x);
  const double radius = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
  Vec center = x;
  if (x.norm() > 0.0) center *= std::uniform_real_distribution<double>(0.2, 1.5)(rng) / x.norm();
  t.region = BoundedRegion::ball(center, radius);
  t.label += " face dim " + std::to_string(t.f.dim());
  return t;
}

void equivalence(const CheckOptions& opt, Recorder& rec) {
  Rng rng(opt.seed);
  int disagreements = 0;
  for (int i = 0; i < 20; ++i) {
    const Triple t = random_triple(rng);
    ProbeOptions po;
    po.seed = opt.seed + static_cast<std::uint64_t>(i);
    const ErrorBoundEstimate a = estimate_kappa(t.k, t.f, t.region, po);
    const ErrorBoundEstimate b = blr_check(t.k, t.f, t.region, po);
    const bool agree = a.verdict == b.verdict;
    disagreements += !agree;
    rec.r.notes.push_back(t.label + ": " + to_string(a.verdict) + " (kappa " + num(a.kappa_hat) + ") / " +
                          to_string(b.verdict) + " (kappa " + num(b.kappa_hat) + ")");
  }
  rec.zero("verdict_disagreements_in_20_triples", disagreements);
}

struct Entry {
  const char* description;
  std::function<void(const CheckOptions&, Recorder&)> run;
};

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r = {
      {"witness_asymptotics",
       {"face distance of the witness curve in closed form; log-log slope of dist(w,C)^2/dist(w,F)^2 near 4",
        witness_asymptotics}},
      {"det_M", {"numeric determinant against its factored form on a 50x50 grid; bracket factor >= 2", det_m}},
      {"exposing_normals", {"the normals p(t) expose alpha(t) on a grid of the circle", exposing_normals}},
      {"dual_sum",
       {"K~* + F^perp against the formula set on a 1e4 grid; boundary points decompose explicitly", dual_sum}},
      {"sturm", {"unbounded error-bound family and a bounded ball probe for the psd slice", sturm}},
      {"slice_bound", {"dist(x,C) <= |e| r dist(x,K) on the gallery slice and a random polytope slice", slice_bound}},
      {"moreau", {"Moreau decompositions for orthant, second-order and psd cones on 1e4 points each", moreau}},
      {"dykstra_dnn", {"Dykstra projection onto 2x2 doubly nonnegative matrices against brute force", dykstra_dnn}},
      {"projections_dim4",
       {"rank-one and rank-two idempotent maps onto faces in dimension <= 4, certified on 1e4 samples",
        projections_dim4}},
      {"sung_tam_gallery",
       {"no converging extreme rays at orthant facets; converging rays at the gallery disk dual", sung_tam_gallery}},
      {"equivalence", {"estimate_kappa and blr_check verdicts agree on 20 random triples", equivalence}},
  };
  return r;
}

}  // namespace

std::vector<std::string> check_names() {
  return {"witness_asymptotics", "det_M",  "exposing_normals", "dual_sum",         "sturm",      "slice_bound",
          "moreau",              "dykstra_dnn", "projections_dim4", "sung_tam_gallery", "equivalence"};
}

bool has_check(const std::string& name) { return registry().count(name) > 0; }

CheckResult run_check(const std::string& name, const CheckOptions& opt) {
  const auto it = registry().find(name);
  if (it == registry().end()) {
    std::string known;
    for (const std::string& n : check_names()) known += (known.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::kInvalidArgument, "unknown check '" + name + "'; known checks: " + known);
  }
  CheckResult r;
  r.name = name;
  r.description = it->second.description;
  Recorder rec{r};
  const auto t0 = std::chrono::steady_clock::now();
  it->second.run(opt, rec);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.passed = !r.measurements.empty() &&
             std::all_of(r.measurements.begin(), r.measurements.end(), [](const Measurement& m) { return m.ok; });
  return r;
}

}  // namespace conelab::verify
