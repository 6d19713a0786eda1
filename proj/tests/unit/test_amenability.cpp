#include <cmath>

#include <gtest/gtest.h>

#include "conelab/amenability.hpp"
#include "conelab/gallery.hpp"

namespace conelab {
namespace {

Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

ProbeOptions quick(int n = 400, std::uint64_t seed = 1) {
  ProbeOptions po;
  po.n_samples = n;
  po.seed = seed;
  return po;
}

TEST(EstimateKappa, OrthantFaceHasConstantOne) {
  const ConeSpec k = ConeSpec::orthant(3);
  const FaceHandle f = coordinate_face(k, {0, 2});
  const auto e = estimate_kappa(k, f, BoundedRegion::ball(Vec::Zero(3), 1.0), quick());
  EXPECT_NEAR(e.kappa_hat, 1.0, 1e-12);
  EXPECT_EQ(e.verdict, ProbeVerdict::kBounded);
  EXPECT_EQ(e.route, "definition");
  // Brute force over 10^4 points of aff F: both distances are the norm of the
  // negative part of (x0, x2).
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const Vec x = v3(gaussian_vector(1, rng)(0), 0.0, gaussian_vector(1, rng)(0));
    const double neg = x.cwiseMin(0.0).norm();
    EXPECT_NEAR(f.distance(x), neg, 1e-14);
    EXPECT_NEAR(project(k, x).distance, neg, 1e-14);
  }
}

TEST(EstimateKappa, SamplesStayInAffineHullAndRegion) {
  const ConeSpec k = ConeSpec::second_order(3);
  const FaceHandle f = ray_face(k, v3(1, 0, 1));
  const BoundedRegion region = BoundedRegion::ball(v3(0.5, 0, 0.5), 1.5);
  const auto e = estimate_kappa(k, f, region, quick(200));
  ASSERT_FALSE(e.samples.empty());
  double worst = 0.0;
  for (const auto& s : e.samples) {
    EXPECT_LT(f.affine_hull.distance(s.point), 1e-10);
    EXPECT_LE((s.point - v3(0.5, 0, 0.5)).norm(), 1.5 + 1e-12);
    if (s.dist_cone > 0) worst = std::max(worst, s.ratio);
  }
  EXPECT_DOUBLE_EQ(e.kappa_hat, worst);
}

TEST(EstimateKappa, PsdRankOneFaceIsBounded) {
  const ConeSpec k = ConeSpec::psd(2);
  const FaceHandle f = psd_range_face(k, Mat::Identity(2, 1));
  const auto e = estimate_kappa(k, f, BoundedRegion::ball(Vec::Zero(3), 2.0), quick());
  EXPECT_EQ(e.verdict, ProbeVerdict::kBounded);
  EXPECT_TRUE(std::isfinite(e.kappa_hat));
}

TEST(EstimateKappa, DoublyNonnegativeFacesAreBounded) {
  const ConeSpec k = ConeSpec::intersection({ConeSpec::psd(2), ConeSpec::orthant(3)});
  for (const Vec& x : {v3(1, 0, 0), v3(1, 0, 1), v3(1, std::sqrt(2.0), 1)}) {
    const FaceHandle f = minimal_face(k, x);
    const auto e = estimate_kappa(k, f, BoundedRegion::ball(x, 2.0), quick(300));
    EXPECT_EQ(e.verdict, ProbeVerdict::kBounded) << x.transpose();
  }
}

TEST(EstimateKappa, GalleryDiskShowsGrowth) {
  const ConeSpec c = gallery::nice_not_amenable_C(1024);
  const FaceHandle f = gallery::disk_alpha_face(c);
  ProbeOptions po = quick(200);
  po.refine_seed = gallery::witness_w(0.2);
  const auto e = estimate_kappa(c, f, BoundedRegion::ball(v3(0, 0, 1), 2.0), po);
  EXPECT_EQ(e.verdict, ProbeVerdict::kGrowthDetected);
  ASSERT_GE(e.refinement.size(), 2u);
  EXPECT_GT(e.refinement.back(), 10.0 * e.refinement.front());
}

TEST(EstimateKappa, SampledMaximumIsMonotoneInSampleCount) {
  const ConeSpec k = ConeSpec::second_order(4);
  const Vec x = (Vec(4) << 1, 0, 0, 1).finished();
  const FaceHandle f = ray_face(k, x);
  double last = 0.0;
  for (int n : {50, 100, 200, 400}) {
    const auto e = estimate_kappa(k, f, BoundedRegion::ball(x, 1.0), quick(n, 9));
    EXPECT_GE(e.kappa_sampled, last);
    last = e.kappa_sampled;
  }
}

TEST(EstimateKappa, ConeRatiosAreScaleInvariant) {
  const ConeSpec k = ConeSpec::psd(2);
  const FaceHandle f = psd_range_face(k, Mat::Identity(2, 1));
  ProbeOptions po = quick(300, 4);
  po.refine_rounds = 0;
  const auto a = estimate_kappa(k, f, BoundedRegion::ball(Vec::Zero(3), 1.0), po);
  const auto b = estimate_kappa(k, f, BoundedRegion::ball(Vec::Zero(3), 7.0), po);
  EXPECT_NEAR(a.kappa_sampled, b.kappa_sampled, 1e-9 * a.kappa_sampled);
}

TEST(EstimateKappa, RegionMissingAffineHullThrows) {
  const ConeSpec k = ConeSpec::orthant(3);
  const FaceHandle f = coordinate_face(k, {0});
  try {
    estimate_kappa(k, f, BoundedRegion::ball(v3(0, 5, 5), 1.0), quick());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(BlrCheck, WholeFaceRatiosAreAtMostOne) {
  const ConeSpec k = ConeSpec::second_order(3);
  const auto e = blr_check(k, whole_face(k), BoundedRegion::ball(Vec::Zero(3), 2.0), quick());
  EXPECT_EQ(e.route, "blr");
  EXPECT_EQ(e.verdict, ProbeVerdict::kBounded);
  for (const auto& s : e.samples) EXPECT_LE(s.ratio, 1.0 + 1e-9);
}

TEST(BlrCheck, SturmFaceIsBoundedNearIdentity) {
  const ConeSpec s = gallery::sturm_slice();
  const auto e = blr_check(s, gallery::sturm_face(s), BoundedRegion::ball(svec(Mat::Identity(2, 2)), 3.0), quick());
  EXPECT_EQ(e.verdict, ProbeVerdict::kBounded);
}

TEST(BlrCheck, AgreesWithDefinitionRoute) {
  const ConeSpec k = ConeSpec::orthant(4);
  const FaceHandle f = coordinate_face(k, {1, 3});
  const auto region = BoundedRegion::ball(Vec::Zero(4), 1.0);
  EXPECT_EQ(estimate_kappa(k, f, region, quick()).verdict, blr_check(k, f, region, quick()).verdict);
}

TEST(SturmFamily, RatioGrowsWithoutARegion) {
  // Along x^eps the ratio dist(x, F) / (dist(x, C) + dist(x, aff F)) diverges.
  double last = 0.0;
  for (double eps : {0.25, 0.0625, 0.015625, 0.00390625}) {
    const gallery::SturmPoint p = gallery::sturm_family(eps);
    const double ratio = p.dist_to_F / (p.dist_to_C + p.dist_to_aff);
    EXPECT_GT(ratio, 2.0 * last) << eps;
    last = ratio;
  }
}

TEST(Subtransversality, RelativeInteriorPointIsFinite) {
  const ConeSpec k = ConeSpec::orthant(3);
  const FaceHandle f = coordinate_face(k, {0, 1});
  const auto e = subtransversality_check(k, f, v3(1, 1, 0), 0.5, quick());
  EXPECT_EQ(e.route, "subtransversality");
  EXPECT_EQ(e.verdict, ProbeVerdict::kBounded);
  EXPECT_LE(e.kappa_hat, 1.0 + 1e-9);
}

TEST(Subtransversality, PointOutsideFaceThrows) {
  const ConeSpec k = ConeSpec::orthant(3);
  EXPECT_THROW(subtransversality_check(k, coordinate_face(k, {0}), v3(1, 1, 0), 0.5, quick()), Error);
}

TEST(Subtransversality, GalleryCornerShowsGrowth) {
  const ConeSpec c = gallery::nice_not_amenable_C(1024);
  const FaceHandle f = gallery::disk_alpha_face(c);
  ProbeOptions po = quick(200);
  po.refine_seed = gallery::witness_w(0.1);
  const auto e = subtransversality_check(c, f, gallery::alpha(0.0), 0.5, po);
  EXPECT_EQ(e.verdict, ProbeVerdict::kGrowthDetected);
}

TEST(Witness, MatchesClosedFormsAndExcludesTinyDistances) {
  const ConeSpec c = gallery::nice_not_amenable_C(1024);
  const FaceHandle f = gallery::disk_alpha_face(c);
  ProjectionOptions po;
  po.refine_curves = true;
  const auto w = evaluate_witness(c, f, WitnessCurve{"w", gallery::witness_w, {0.2, 0.1, 0.05, 0.025}}, po);
  ASSERT_EQ(w.rows.size(), 4u);
  for (const auto& r : w.rows) {
    const double closed = std::pow(1.0 - std::sqrt(5.0 - 4.0 * std::cos(2.0 * r.t)), 2);
    EXPECT_NEAR(r.dist_face * r.dist_face, closed, 1e-10);
    EXPECT_LE(r.dist_cone * r.dist_cone, gallery::witness_hull_bound_sq(r.t) + 1e-12);
  }
  EXPECT_NEAR(w.inverse_sq_slope, 4.0, 0.3);
  // Near t = 0 the face distance 4t^2 drops below the fit threshold.
  const auto z = evaluate_witness(c, f, WitnessCurve{"w", gallery::witness_w, {0.2, 0.1, 1e-7}}, po);
  EXPECT_FALSE(z.rows.back().used_in_fit);
  EXPECT_FALSE(z.warnings.empty());
}

TEST(Witness, CurveLeavingAffineHullThrows) {
  const ConeSpec c = gallery::nice_not_amenable_C(256);
  const FaceHandle f = gallery::disk_alpha_face(c);
  auto off = [](double t) { return v3(t, 0, 1 + t); };
  try {
    evaluate_witness(c, f, WitnessCurve{"off", off, {0.2, 0.1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(FitSlope, RecoversPowerLaw) {
  std::vector<double> x, y;
  for (double t : {0.5, 0.25, 0.125}) {
    x.push_back(std::log(t));
    y.push_back(std::log(3.0 * std::pow(t, 4)));
  }
  EXPECT_NEAR(fit_slope(x, y), 4.0, 1e-12);
}

}  // namespace
}  // namespace conelab
