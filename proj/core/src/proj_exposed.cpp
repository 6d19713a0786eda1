#include "conelab/proj_exposed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conelab/parallel.hpp"
#include "conelab/projection.hpp"
#include "conelab/solvers.hpp"

namespace conelab {

void certify_projection(ProjectionMap& p, const ConeSpec& k, int n_samples, std::uint64_t seed, double tol) {
  const Mat& m = p.matrix;
  require_dim(k.dim(), m.rows(), "certify_projection");
  p.idempotency_residual = (m * m - m).cwiseAbs().maxCoeff();
  Rng rng(seed);
  std::vector<Vec> xs(n_samples), fs(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    xs[i] = sample_element(k, rng, 2.0);
    fs[i] = sample_face_element(p.target_face, rng);
  }
  std::vector<char> bad_in(n_samples, 0), bad_fix(n_samples, 0);
  parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t i) {
    const Vec px = m * xs[i];
    bad_in[i] = p.target_face.distance(px) > tol * (1.0 + xs[i].norm());
    bad_fix[i] = (m * fs[i] - fs[i]).norm() > tol * (1.0 + fs[i].norm());
  });
  p.containment_violations = static_cast<int>(std::count(bad_in.begin(), bad_in.end(), 1));
  p.fixed_violations = static_cast<int>(std::count(bad_fix.begin(), bad_fix.end(), 1));
  p.samples_checked = n_samples;
}

namespace {

void require_pointed(const ConeSpec& k, int samples, Rng& rng) {
  for (int i = 0; i < samples; ++i) {
    const Vec s = sample_element(k, rng);
    const double n = s.norm();
    if (n < 1e-9) continue;
    if (distance(k, -s) <= 1e-9 * n)
      throw Error(ErrorCode::kHypothesis, "projection constructor: K is not pointed (a sampled ±direction lies in K)");
  }
}

// A unit element of K* pairing positively with x.
Vec dual_partner(const ConeSpec& k, const Vec& x, Rng& rng) {
  if (has_dual(k)) {
    // <x, Π_{K*}(x)> = ||Π_{K*}(x)||^2, which vanishes only for x ∈ -K.
    const Vec z = project(dual_cone(k), x).point;
    if (z.norm() > 1e-12 * (1.0 + x.norm())) return z;
  }
  const Mat s = sampled_polar(k, 4000, rng);
  Index j = 0;
  const double best = (s.transpose() * x).maxCoeff(&j);
  if (!(best > 1e-12 * x.norm()))
    throw Error(ErrorCode::kNotSeparable, "rank-one projection: no dual element pairs positively with x");
  return s.col(j);
}

// The face generated by x: structured when minimal_face supports K (exact
// conjugates), a generic ray otherwise.
FaceHandle generated_face(const ConeSpec& k, const Vec& x) {
  try {
    FaceHandle f = minimal_face(k, x, Tolerance{1e-9, 1e-9});
    if (f.dim() == 1) return f;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnsupported) throw;
  }
  return ray_face(k, x);
}

// An element of F_x^Δ = K* ∩ x^⊥ with the largest pairing against y among
// sampled elements and their sum (the sum sits in the relative interior).
Vec separating_element(const ConeSpec& k, const Vec& x, const Vec& y, int samples, Rng& rng) {
  const FaceHandle conj = conjugate_face(k, generated_face(k, x));
  Vec sum = Vec::Zero(k.dim());
  Vec best;
  double best_score = 0.0;
  for (int i = 0; i <= samples; ++i) {
    Vec z = sum;
    if (i < samples) {
      try {
        z = sample_face_element(conj, rng);
      } catch (const NonConvergenceError& e) {
        z = e.best_iterate();  // candidates are re-checked by the certification
      }
    }
    if (i < samples) sum += z;
    const double n = z.norm();
    if (n < 1e-12) continue;
    const double score = y.dot(z) / n;
    if (score > best_score) best_score = score, best = z;
  }
  if (!(best_score > 1e-9 * y.norm()))
    throw Error(ErrorCode::kNotSeparable,
                "rank-two projection: sampled elements of the conjugate face of one ray all annihilate the other; "
                "K may not be facially exposed there");
  return best;
}

}  // namespace

ProjectionMap build_rank_one_projection(const ConeSpec& k, const Vec& x, const ProjectionBuildOptions& opt) {
  require_dim(k.dim(), x.size(), "build_rank_one_projection");
  if (x.norm() == 0.0) throw Error(ErrorCode::kInvalidArgument, "build_rank_one_projection: x is zero");
  Rng rng(opt.seed);
  require_pointed(k, opt.pointedness_samples, rng);
  const Vec z0 = dual_partner(k, x, rng);
  const Vec z = z0 / x.dot(z0);
  ProjectionMap p;
  p.matrix = x * z.transpose();
  p.target_face = ray_face(k, x);
  certify_projection(p, k, opt.certify_samples, opt.seed);
  return p;
}

ProjectionMap build_rank_two_projection(const ConeSpec& k, const FaceHandle& f, const Vec& x, const Vec& y,
                                        const ProjectionBuildOptions& opt) {
  require_dim(k.dim(), x.size(), "build_rank_two_projection");
  require_dim(k.dim(), y.size(), "build_rank_two_projection");
  if (f.dim() != 2) throw Error(ErrorCode::kHypothesis, "build_rank_two_projection: F must be 2-dimensional");
  if (!f.contains(x, Tolerance{1e-9, 1e-9}) || !f.contains(y, Tolerance{1e-9, 1e-9}))
    throw Error(ErrorCode::kInvalidArgument, "build_rank_two_projection: generators must lie in F");
  Mat xy(k.dim(), 2);
  xy << x, y;
  if (numerical_rank(xy) != 2) throw Error(ErrorCode::kInvalidArgument, "build_rank_two_projection: x and y are parallel");
  Rng rng(opt.seed);
  require_pointed(k, opt.pointedness_samples, rng);
  for (const Vec* g : {&x, &y}) {
    ExposureOptions eo;
    eo.seed = opt.seed;
    if (is_exposed(k, generated_face(k, *g), eo).verdict == ExposureResult::Verdict::kNotExposed)
      throw Error(ErrorCode::kHypothesis, "build_rank_two_projection: a generating ray is not exposed");
  }
  const Vec z1 = separating_element(k, x, y, opt.conjugate_samples, rng);
  const Vec z2 = separating_element(k, y, x, opt.conjugate_samples, rng);
  // Rows of zt are z2 and z1; zt * xy is nearly diagonal and its inverse
  // enforces the four pairings exactly up to rounding.
  Mat zt(2, k.dim());
  zt.row(0) = z2.transpose();
  zt.row(1) = z1.transpose();
  const Mat pair = zt * xy;
  ProjectionMap p;
  p.matrix = xy * pair.inverse() * zt;
  p.target_face = f;
  certify_projection(p, k, opt.certify_samples, opt.seed);
  return p;
}

const char* to_string(SungTamResult::Outcome o) {
  return o == SungTamResult::Outcome::kConvergingExtremeRays ? "converging_extreme_rays" : "no_converging_sequence_found";
}

namespace {

// Unit generators of K, or nullopt when K is not given by generators.
std::optional<Mat> cone_generators(const ConeSpec& k, int count) {
  Mat g;
  if (k.get_if<spec::NonnegativeOrthant>()) {
    g = Mat::Identity(k.dim(), k.dim());
  } else if (const auto* fg = k.get_if<spec::FinitelyGenerated>()) {
    g = fg->generators;
  } else if (const auto* ch = k.get_if<spec::ConicHull>()) {
    g = ch->slice.generator.sample().points;
  } else if (const auto* n = k.get_if<spec::Named>()) {
    if (!n->oracle->is_cone()) return std::nullopt;
    auto e = n->oracle->extreme_grid(count);
    if (!e) return std::nullopt;
    g = *e;
  } else {
    return std::nullopt;
  }
  for (Index j = 0; j < g.cols(); ++j) g.col(j).normalize();
  return g;
}

// Generator of F^Δ oriented into K*, from the conjugate face when K* is
// available and from the face's exposing normal otherwise.
Vec conjugate_ray(const ConeSpec& k, const FaceHandle& f) {
  if (has_dual(k)) {
    const FaceHandle c = conjugate_face(k, f);
    if (c.dim() != 1)
      throw Error(ErrorCode::kHypothesis, "sung_tam_probe: F^Δ has dimension " + std::to_string(c.dim()) + ", not 1");
    Vec w = c.span_basis.col(0);
    Rng rng(3);
    for (int i = 0; i < 64; ++i) {
      const double p = sample_face_element(c, rng).dot(w);
      if (std::abs(p) > 1e-9) return p < 0.0 ? Vec(-w) : w;
    }
    throw Error(ErrorCode::kVerification, "sung_tam_probe: could not orient the generator of F^Δ");
  }
  if (f.exposing_hint) return -f.exposing_hint->normalized();
  throw Error(ErrorCode::kUnsupported, "sung_tam_probe: neither K* nor an exposing normal of F is available");
}

}  // namespace

SungTamResult sung_tam_probe(const ConeSpec& k, const FaceHandle& f, const SungTamOptions& opt) {
  const Index d = k.dim();
  require_dim(d, f.ambient_dim(), "sung_tam_probe");
  if (f.dim() != d - 1)
    throw Error(ErrorCode::kHypothesis, "sung_tam_probe: F has dimension " + std::to_string(f.dim()) +
                                            "; the criterion needs a face of codimension 1");
  SungTamResult res;
  res.w = conjugate_ray(k, f);
  const Vec& w = res.w;

  // Candidate extreme directions of K*, each with the hinge it came from.
  std::vector<ExtremeRayFinding> found;
  if (const auto* poly = k.get_if<spec::Polyhedral>()) {
    // K* = cone(-rows); a row is extreme unless the others generate it.
    const Mat gens = -poly->rows.transpose();
    res.generators = static_cast<int>(gens.cols());
    for (Index j = 0; j < gens.cols(); ++j) {
      const Vec s = gens.col(j).normalized();
      Mat others(d, 0);
      for (Index i = 0; i < gens.cols(); ++i) {
        if (i == j || (gens.col(i).normalized() - s).norm() < 1e-12) continue;
        others.conservativeResize(Eigen::NoChange, others.cols() + 1);
        others.col(others.cols() - 1) = gens.col(i);
      }
      if (others.cols() > 0 && (others * nnls(others, s).coefficients - s).norm() < 1e-10) continue;
      found.push_back({s, (s - w).norm(), {j}, 0});
    }
  } else {
    const auto gens_opt = cone_generators(k, opt.generator_count);
    if (!gens_opt) throw Error(ErrorCode::kUnsupported, "sung_tam_probe: no extreme-ray sampler for " + k.kind());
    const Mat& g = *gens_opt;
    res.generators = static_cast<int>(g.cols());
    const Vec a = g.transpose() * w;
    if (a.minCoeff() < -1e-9) throw Error(ErrorCode::kVerification, "sung_tam_probe: w is not in K* on the generator sample");
    std::vector<Index> face;
    for (Index j = 0; j < g.cols(); ++j)
      if (std::abs(a(j)) <= opt.face_tol) face.push_back(j);
    res.face_generators = static_cast<int>(face.size());
    if (static_cast<Index>(face.size()) < d - 2)
      throw Error(ErrorCode::kHypothesis, "sung_tam_probe: too few generators on F to form a hinge");
    Vec centroid = Vec::Zero(d);
    for (Index j : face) centroid += g.col(j);

    std::vector<std::vector<Index>> hinges;
    const Index nf = static_cast<Index>(face.size());
    for (Index spacing = 1; spacing <= std::max<Index>(1, opt.max_spacing); spacing *= 2) {
      if (d - 2 == 0) {
        hinges.push_back({});
        break;
      }
      if ((d - 3) * spacing >= nf) break;
      for (Index i = 0; i + (d - 3) * spacing < nf; ++i) {
        std::vector<Index> h;
        for (Index m = 0; m < d - 2; ++m) h.push_back(face[static_cast<std::size_t>(i + m * spacing)]);
        hinges.push_back(std::move(h));
      }
      if (d - 2 == 1) break;  // single-generator hinges do not depend on the spacing
    }

    std::vector<std::optional<ExtremeRayFinding>> out(hinges.size());
    parallel_for(hinges.size(), [&](std::size_t hi) {
      const auto& h = hinges[hi];
      Mat m(d, static_cast<Index>(h.size()) + 1);
      for (std::size_t c = 0; c < h.size(); ++c) m.col(static_cast<Index>(c)) = g.col(h[c]);
      m.col(m.cols() - 1) = w;
      const Mat perp = orthogonal_complement(orthonormalize(m), d);
      if (perp.cols() != 1) return;
      Vec v = perp.col(0);
      for (int sign : {1, -1}) {
        const Vec vs = sign * v;
        if (d - 2 > 0 && vs.dot(centroid) <= 0.0) continue;
        const Vec b = g.transpose() * vs;
        double theta = std::numbers::pi / 2;
        for (Index j = 0; j < g.cols(); ++j)
          if (b(j) < 0.0) theta = std::min(theta, std::atan2(std::max(a(j), 0.0), -b(j)));
        if (theta <= 1e-14) continue;
        const Vec s = (std::cos(theta) * w + std::sin(theta) * vs).normalized();
        const Vec pair = g.transpose() * s;
        if (pair.minCoeff() < -opt.active_tol) continue;
        Mat active(d, 0);
        for (Index j = 0; j < g.cols(); ++j)
          if (pair(j) <= opt.active_tol) {
            active.conservativeResize(Eigen::NoChange, active.cols() + 1);
            active.col(active.cols() - 1) = g.col(j);
          }
        if (numerical_rank(active) != d - 1) continue;
        out[hi] = ExtremeRayFinding{s, (s - w).norm(), h, static_cast<int>(active.cols())};
        return;
      }
    });
    for (auto& o : out)
      if (o) found.push_back(std::move(*o));
  }

  // Keep rays distinct from F^Δ, nearest first.
  found.erase(std::remove_if(found.begin(), found.end(), [](const ExtremeRayFinding& r) { return r.distance <= 1e-12; }),
              found.end());
  std::sort(found.begin(), found.end(),
            [](const ExtremeRayFinding& a, const ExtremeRayFinding& b) { return a.distance < b.distance; });
  res.rays = std::move(found);

  std::vector<double> radii = opt.radii;
  if (radii.empty())
    for (int k2 = 0; k2 <= 12; ++k2) radii.push_back(0.5 * std::ldexp(1.0, -k2));
  const double nearest = res.rays.empty() ? std::numeric_limits<double>::infinity() : res.rays.front().distance;
  bool all_so_far = true;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    SungTamLevel lv;
    lv.k = static_cast<int>(i);
    lv.radius = radii[i];
    lv.found = nearest <= radii[i];
    lv.nearest = nearest;
    all_so_far = all_so_far && lv.found;
    if (all_so_far) res.deepest_level = lv.k;
    res.levels.push_back(lv);
  }
  res.outcome = res.deepest_level >= opt.required_depth ? SungTamResult::Outcome::kConvergingExtremeRays
                                                        : SungTamResult::Outcome::kNoConvergingSequence;
  return res;
}

Codim1Report codim1_amenable_implies_pexp_check(const ConeSpec& k, const FaceHandle& f, const BoundedRegion& region,
                                                const ProbeOptions& probe, const SungTamOptions& st) {
  Codim1Report rep;
  rep.sung_tam = sung_tam_probe(k, f, st);
  const ErrorBoundEstimate e = estimate_kappa(k, f, region, probe);
  rep.amenability = e.verdict;
  rep.kappa_hat = e.kappa_hat;
  const bool converging = rep.sung_tam.outcome == SungTamResult::Outcome::kConvergingExtremeRays;
  rep.consistent = !(rep.amenability == ProbeVerdict::kBounded && converging);
  rep.summary = std::string("amenability evidence: ") + to_string(rep.amenability) + "; Sung-Tam: " +
                to_string(rep.sung_tam.outcome) +
                (rep.consistent ? "; consistent" : "; contradiction (implementation bug or insufficient sampling)");
  return rep;
}

}  // namespace conelab
