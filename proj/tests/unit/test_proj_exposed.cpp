#include <cmath>

#include <gtest/gtest.h>

#include "conelab/gallery.hpp"
#include "conelab/proj_exposed.hpp"

namespace conelab {
namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

ProjectionBuildOptions fast() {
  ProjectionBuildOptions o;
  o.certify_samples = 2000;
  return o;
}

TEST(RankOne, QuadrantCoordinateProjection) {
  const ProjectionMap p = build_rank_one_projection(ConeSpec::orthant(2), v2(1, 0), fast());
  EXPECT_TRUE(p.certified());
  EXPECT_LT((p.matrix - (Mat(2, 2) << 1, 0, 0, 0).finished()).norm(), 1e-12);
  EXPECT_LT((p.matrix * v2(3, 5) - v2(3, 0)).norm(), 1e-12);
}

TEST(RankOne, LorentzBoundaryRay) {
  const ConeSpec k = ConeSpec::second_order(3);
  const Vec x = v3(1, 0, 1) / std::sqrt(2.0);
  const ProjectionMap p = build_rank_one_projection(k, x);
  EXPECT_TRUE(p.certified());
  EXPECT_EQ(p.samples_checked, 10000);
  // Images are nonnegative multiples of x.
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const Vec img = p.matrix * sample_element(k, rng);
    EXPECT_LT((img - x * x.dot(img)).norm(), 1e-10);
    EXPECT_GE(x.dot(img), -1e-12);
  }
}

TEST(RankOne, PsdTopLeftEntry) {
  const ConeSpec k = ConeSpec::psd(2);
  const Vec e11 = svec((Mat(2, 2) << 1, 0, 0, 0).finished());
  const ProjectionMap p = build_rank_one_projection(k, e11, fast());
  EXPECT_TRUE(p.certified());
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const Vec x = sample_element(k, rng);
    // P(X) = X11 E11 for X in K; z may differ from E11 off the cone only by K* slack.
    EXPECT_GE((p.matrix * x)(0), -1e-12);
    EXPECT_LT((p.matrix * x).tail(2).norm(), 1e-12);
  }
}

TEST(RankOne, ZeroGeneratorThrows) {
  EXPECT_THROW(build_rank_one_projection(ConeSpec::orthant(2), Vec::Zero(2), fast()), Error);
}

TEST(RankOne, NonPointedConeThrows) {
  EXPECT_THROW(build_rank_one_projection(ConeSpec::halfspace(v2(0, -1)), v2(0, 1), fast()), Error);
}

TEST(RankTwo, OrthantCoordinatePlane) {
  const ConeSpec k = ConeSpec::orthant(3);
  const FaceHandle f = coordinate_face(k, {0, 1});
  const ProjectionMap p = build_rank_two_projection(k, f, v3(1, 0, 0), v3(0, 1, 0), fast());
  EXPECT_TRUE(p.certified());
  EXPECT_LT((p.matrix - Vec(v3(1, 1, 0)).asDiagonal().toDenseMatrix()).norm(), 1e-12);
}

TEST(RankTwo, PairingConditionsHold) {
  const ConeSpec k = ConeSpec::orthant(3);
  const FaceHandle f = coordinate_face(k, {0, 2});
  const Vec x = v3(1, 0, 0), y = v3(0, 0, 1);
  const ProjectionMap p = build_rank_two_projection(k, f, x, y, fast());
  EXPECT_LT((p.matrix * x - x).norm(), 1e-10);
  EXPECT_LT((p.matrix * y - y).norm(), 1e-10);
  EXPECT_LT(p.idempotency_residual, 1e-12);
}

TEST(RankTwo, CylinderSegmentFace) {
  const auto cyl = gallery::cylinder_hull_objects();
  const FaceHandle f = gallery::cylinder_segment_face(cyl.k_tilde);
  const Vec x = (Vec(4) << 1, 0, 1, 1).finished(), y = (Vec(4) << 1, 0, -1, 1).finished();
  const ProjectionMap p = build_rank_two_projection(cyl.k_tilde, f, x, y, fast());
  EXPECT_TRUE(p.certified());
}

TEST(Certify, CountsViolationsOfAWrongMap) {
  const ConeSpec k = ConeSpec::orthant(2);
  ProjectionMap p{Mat::Identity(2, 2), coordinate_face(k, {0})};
  certify_projection(p, k, 500);
  EXPECT_EQ(p.idempotency_residual, 0.0);
  EXPECT_GT(p.containment_violations, 0);
  EXPECT_FALSE(p.certified());
}

TEST(SungTam, OrthantFacetHasIsolatedDualRays) {
  const ConeSpec k = ConeSpec::orthant(3);
  const SungTamResult r = sung_tam_probe(k, coordinate_face(k, {0, 1}));
  EXPECT_EQ(r.outcome, SungTamResult::Outcome::kNoConvergingSequence);
  EXPECT_LT((r.w - v3(0, 0, 1)).norm(), 1e-12);
  ASSERT_EQ(r.levels.size(), 13u);
  for (const auto& level : r.levels)
    if (level.radius < 0.5) EXPECT_FALSE(level.found) << level.k;
}

TEST(SungTam, GalleryLiftedDiskHasConvergingRays) {
  const ConeSpec k = gallery::nice_not_amenable_K(1024);
  SungTamOptions o;
  o.generator_count = 1024;
  const SungTamResult r = sung_tam_probe(k, gallery::lifted_disk_alpha_face(k), o);
  EXPECT_EQ(r.outcome, SungTamResult::Outcome::kConvergingExtremeRays);
  EXPECT_GE(r.deepest_level, 8);
  ASSERT_FALSE(r.rays.empty());
  for (std::size_t i = 1; i < r.rays.size(); ++i) EXPECT_LE(r.rays[i - 1].distance, r.rays[i].distance);
}

TEST(SungTam, LorentzBoundaryRayIsNotAFacet) {
  const ConeSpec k = ConeSpec::second_order(3);
  try {
    sung_tam_probe(k, ray_face(k, v3(1, 0, 1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHypothesis);
  }
}

TEST(Codim1, OrthantFacetIsConsistent) {
  const ConeSpec k = ConeSpec::orthant(3);
  ProbeOptions po;
  po.n_samples = 300;
  const Codim1Report r =
      codim1_amenable_implies_pexp_check(k, coordinate_face(k, {0, 1}), BoundedRegion::ball(Vec::Zero(3), 1.0), po);
  EXPECT_EQ(r.amenability, ProbeVerdict::kBounded);
  EXPECT_EQ(r.sung_tam.outcome, SungTamResult::Outcome::kNoConvergingSequence);
  EXPECT_TRUE(r.consistent);
  EXPECT_FALSE(r.summary.empty());
}

TEST(Codim1, CylinderLiftedDiskIsConsistent) {
  const auto cyl = gallery::cylinder_hull_objects();
  ProbeOptions po;
  po.n_samples = 200;
  const Vec center = (Vec(4) << 0, 0, 1, 1).finished();
  const Codim1Report r = codim1_amenable_implies_pexp_check(cyl.k_tilde, cyl.lifted_disk,
                                                            BoundedRegion::ball(center, 2.0), po);
  EXPECT_EQ(r.amenability, ProbeVerdict::kBounded);
  EXPECT_EQ(r.sung_tam.outcome, SungTamResult::Outcome::kNoConvergingSequence);
  EXPECT_TRUE(r.consistent);
}

TEST(Codim1, GalleryLiftedDiskMatchesTheContrapositive) {
  const ConeSpec k = gallery::nice_not_amenable_K(1024);
  ProbeOptions po;
  po.n_samples = 200;
  Vec seed(4);
  seed << gallery::witness_w(0.2), 1.0;
  po.refine_seed = seed;
  SungTamOptions st;
  st.generator_count = 1024;
  const Vec center = (Vec(4) << 0, 0, 1, 1).finished();
  const Codim1Report r = codim1_amenable_implies_pexp_check(k, gallery::lifted_disk_alpha_face(k),
                                                            BoundedRegion::ball(center, 2.0), po, st);
  EXPECT_EQ(r.amenability, ProbeVerdict::kGrowthDetected);
  EXPECT_EQ(r.sung_tam.outcome, SungTamResult::Outcome::kConvergingExtremeRays);
  EXPECT_TRUE(r.consistent);
}

}  // namespace
}  // namespace conelab
