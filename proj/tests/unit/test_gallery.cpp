#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "conelab/gallery.hpp"
#include "conelab/projection.hpp"
#include "conelab/solvers.hpp"

namespace conelab {
namespace {

using namespace gallery;
constexpr double kPi = std::numbers::pi;

Vec v4(double a, double b, double c, double d) { return (Vec(4) << a, b, c, d).finished(); }

TEST(Curves, EndpointsMeetTheDisks) {
  EXPECT_LT((gamma(0.0) - alpha(0.0)).norm(), 1e-14);
  EXPECT_LT((gamma(kPi) - beta(0.0)).norm(), 1e-14);
  for (int k = 0; k < 100; ++k) {
    const double t = 2.0 * kPi * k / 100;
    EXPECT_EQ(alpha(t)(2), 1.0);
    EXPECT_EQ(beta(t)(2), -1.0);
  }
}

TEST(Curves, ReflectionSymmetry) {
  // T(x, y, z) = (x, -y, -z) swaps alpha and beta and reverses gamma.
  auto reflect = [](const Vec& p) { return Vec(Eigen::Vector3d(p(0), -p(1), -p(2))); };
  for (int k = 0; k <= 200; ++k) {
    const double t = 2.0 * kPi * k / 200;
    EXPECT_LT((beta(2.0 * kPi - t) - reflect(alpha(t))).norm(), 1e-12);
    const double s = kPi * k / 200;
    EXPECT_LT((gamma(kPi - s) - reflect(gamma(s))).norm(), 1e-12);
  }
}

TEST(Curves, DiskFacesAreExposedByVerticalNormal) {
  for (int k = 1; k < 1000; ++k) EXPECT_LT(gamma(kPi * k / 1000)(2), 1.0);
}

TEST(Curves, DerivativeMatchesCentralDifference) {
  for (double t : {0.1, 0.7, 2.0, 3.0}) {
    const double h = 1e-6;
    EXPECT_LT((gamma_prime(t) - (gamma(t + h) - gamma(t - h)) / (2 * h)).norm(), 1e-8);
  }
}

TEST(ExposingNormal, AtPiIsPositiveAndSeparates) {
  const ExposingNormal e = exposing_normal(kPi);
  EXPECT_GT(e.u, 0.0);
  EXPECT_TRUE(std::isfinite(e.u));
  EXPECT_GT(e.worst_gap, 0.0);
  // Independent dense check over 10^4 gamma samples.
  const double top = e.p.dot(alpha(kPi));
  for (int k = 0; k <= 10000; ++k) EXPECT_GT(top - e.p.dot(gamma(kPi * k / 10000)), 0.0);
}

TEST(ExposingNormal, AlphaConditionHoldsForEveryU) {
  for (double t : {0.3, 1.0, 4.0})
    for (double u : {0.0, 1.0, 100.0}) {
      const Vec p = Eigen::Vector3d(std::cos(t), std::sin(t), u);
      for (int k = 1; k < 200; ++k) {
        const double s = t + 2.0 * kPi * k / 200;
        EXPECT_LT(p.dot(alpha(s)), p.dot(alpha(t)));
      }
    }
}

TEST(ExposingNormal, RatioDivergesNegativelyNearZero) {
  const double t = 1.0;
  auto ratio = [&](double s) { return (2.0 * std::cos(t - 2.0 * s) - std::cos(t) - 1.0) / (1.0 - gamma_height(s)); };
  EXPECT_LT(ratio(1e-2), -1e3);
  EXPECT_LT(ratio(1e-3), ratio(1e-2));
}

TEST(ExposingNormal, VerifiedAcrossTheCircle) {
  for (int k = 1; k < 64; ++k) EXPECT_GT(exposing_normal(2.0 * kPi * k / 64, 2000).worst_gap, 0.0);
  EXPECT_THROW(exposing_normal(0.0), Error);
}

TEST(DetM, NumericMatchesClosedForm) {
  const DetM d = det_M(kPi / 4, kPi / 2);
  EXPECT_NEAR(d.numeric, d.closed_form, 1e-8);
  EXPECT_NEAR(det_M(1.0, 1.0 + 1e-4).numeric, 0.0, 1e-12);
  // Bracket at x = y = pi/4.
  const DetM b = det_M(0.0, kPi / 2);
  EXPECT_GE(b.bracket, 2.0);
}

TEST(Witness, ClosedFormsAndLimits) {
  EXPECT_LT((witness_w(kPi / 2) - Eigen::Vector3d(-3, 0, 1)).norm(), 1e-15);
  EXPECT_NEAR(witness_face_distance_sq(kPi / 2), 4.0, 1e-12);
  EXPECT_LT((witness_w(1e-9) - alpha(0.0)).norm(), 1e-8);
  // Leading order 16 t^4.
  EXPECT_NEAR(witness_face_distance_sq(0.1) / (16e-4), 1.0, 0.05);
  EXPECT_NEAR(witness_face_distance_sq(0.01) / (16e-8), 1.0, 1e-3);
  const double tm = witness_t_max();
  const Vec w = witness_w(tm);
  EXPECT_NEAR((w(0) - 1) * (w(0) - 1) + w(1) * w(1), 1.0, 1e-12);
}

TEST(Witness, FaceDistanceMatchesCircleSearch) {
  // w(t) lies outside the unit disk, so its distance is to the rim.
  for (double t : {0.2, 0.1, 0.05, 0.025}) {
    const Vec w = witness_w(t);
    auto f = [&](double th) { return (w - alpha(th)).squaredNorm(); };
    double best = 1e300, arg = 0.0;
    for (int k = 0; k < 3600; ++k) {
      const double th = 2.0 * kPi * k / 3600;
      if (f(th) < best) best = f(th), arg = th;
    }
    const double th = golden_section_min(f, arg - 0.01, arg + 0.01);
    EXPECT_NEAR(f(th), witness_face_distance_sq(t), 1e-10);
    const FaceHandle disk = disk_alpha_face(nice_not_amenable_C(64));
    EXPECT_NEAR(std::pow(disk.distance(w), 2), witness_face_distance_sq(t), 1e-12);
  }
}

TEST(Witness, SampledHullDistanceRespectsGammaBound) {
  const double t = 0.1;
  const ConeSpec c = nice_not_amenable_C(2048, {t});
  const double d = distance(c, witness_w(t));
  EXPECT_GE(d * d, 0.0);
  EXPECT_LE(d * d, witness_hull_bound_sq(t) + 1e-12);
}

TEST(Cylinder, ClosedFormExamples) {
  const CylinderObjects o = cylinder_hull_objects();
  EXPECT_TRUE(contains(o.dual_sum, v4(3, 4, -10, 20)));
  EXPECT_FALSE(contains(o.dual_sum, v4(3, 4, 0, 4)));
  EXPECT_EQ(membership(o.k_tilde_dual, v4(0, 0, 1, 1)).location, Location::kBoundary);
  EXPECT_EQ(o.k_tilde.kind(), "gallery");
  EXPECT_EQ(dual_cone(o.k_tilde).describe(), o.k_tilde_dual.describe());
}

TEST(Cylinder, DualPairingAndMoreau) {
  const CylinderObjects o = cylinder_hull_objects();
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Vec x = sample_element(o.k_tilde, rng);
    const Vec s = sample_element(o.k_tilde_dual, rng);
    EXPECT_GE(x.dot(s), -1e-10);
    const Vec y = 2.0 * gaussian_vector(4, rng);
    const Vec p = project(o.k_tilde, y).point;
    const Vec q = project(o.k_tilde_dual, -y).point;
    // y = p - q with q ∈ K~* and <p, q> = 0.
    EXPECT_LT((y - p + q).norm(), 1e-12);
    EXPECT_NEAR(p.dot(q), 0.0, 1e-10);
  }
}

TEST(Cylinder, ProjectionsMatchDykstraOracles) {
  // Each closed-form set written as an intersection of standard pieces.
  const CylinderObjects o = cylinder_hull_objects();
  Mat perm = Mat::Zero(4, 4);
  perm(0, 0) = perm(1, 1) = perm(3, 2) = perm(2, 3) = 1.0;
  const ConeSpec disk_part = ConeSpec::image(
      perm, ConeSpec::product({ConeSpec::second_order(3), ConeSpec::subspace(Mat::Identity(1, 1), 1)}));
  const std::vector<ConeSpec> lifted = {
      disk_part, ConeSpec::subspace((Mat(4, 3) << 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1).finished(), 4)};
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const Vec x = 2.0 * gaussian_vector(4, rng);
    EXPECT_LT((o.lifted_disk.project(x).point - dykstra_intersection(lifted, x).point).norm(), 1e-8);
    // Sum set: ||(x,y)|| <= z + w is the preimage of the SOC under (x, y, z + w).
    auto in_sum = [&](const Vec& p) { return p.head(2).norm() <= p(2) + p(3) + 1e-9; };
    const Vec p = project(o.dual_sum, x).point;
    EXPECT_TRUE(in_sum(p));
    // Optimality: the residual lies in the polar, so <x - p, p> = 0 and
    // x - p pairs nonpositively with sampled members.
    EXPECT_NEAR((x - p).dot(p), 0.0, 1e-10);
    for (int j = 0; j < 20; ++j) {
      Vec m = gaussian_vector(4, rng);
      m(3) = m.head(2).norm() - m(2) + std::abs(gaussian_vector(1, rng)(0));
      EXPECT_LE((x - p).dot(m), 1e-9);
    }
  }
}

TEST(Cylinder, DualSumMembershipEquivalence) {
  const CylinderObjects o = cylinder_hull_objects();
  const FaceHandle& f = o.lifted_disk;
  Rng rng(13);
  // K~* + F^⊥ members satisfy the formula.
  for (int i = 0; i < 1000; ++i) {
    const Vec u = sample_element(o.k_tilde_dual, rng);
    const double c = gaussian_vector(1, rng)(0);
    EXPECT_TRUE(contains(o.dual_sum, u + c * v4(0, 0, 1, -1)));
  }
  // Formula members decompose.
  for (int i = 0; i < 1000; ++i) {
    const Vec s = sample_element(o.dual_sum, rng);
    const DualSumResult r = dual_sum_membership(o.k_tilde, f, s);
    ASSERT_TRUE(r.in_sum);
    EXPECT_TRUE(contains(o.k_tilde_dual, r.u));
    EXPECT_LT(std::abs(r.v.dot(f.span_basis.col(0))) + std::abs(r.v.dot(f.span_basis.col(2))), 1e-12);
    EXPECT_LT(r.residual, 1e-9);
  }
  EXPECT_FALSE(dual_sum_membership(o.k_tilde, f, v4(3, 4, 0, 4)).in_sum);
}

TEST(Cylinder, GenericDualSumAgreesWithClosedForm) {
  const CylinderObjects o = cylinder_hull_objects();
  FaceHandle f = o.lifted_disk;
  f.dual_sum = nullptr;
  EXPECT_TRUE(dual_sum_membership(o.k_tilde, f, v4(3, 4, -10, 20)).in_sum);
  EXPECT_FALSE(dual_sum_membership(o.k_tilde, f, v4(3, 4, 0, 4)).in_sum);
}

TEST(Cylinder, BoundaryDecompositionUsesExposingNormals) {
  const HullSample g = curve_sampler(2048, {}, true).sample();
  for (int k = 0; k < 16; ++k) {
    const double th = 2.0 * kPi * k / 16;
    const double z = -1.0 + 0.25 * k, a = 2.0;
    const Vec s = v4(a * std::cos(th), a * std::sin(th), z, a - z);
    const BoundaryDecomposition d = decompose_dual_sum_boundary(s, g.points);
    EXPECT_LT(d.residual, 1e-9);
    EXPECT_GE(d.dual_margin, -1e-9);
  }
}

TEST(Cylinder, LiftedDiskFaceStructure) {
  const CylinderObjects o = cylinder_hull_objects();
  const ExposureResult r = is_exposed(o.k_tilde, o.lifted_disk);
  ASSERT_EQ(r.verdict, ExposureResult::Verdict::kExposed);
  EXPECT_LT((r.witness.normalized() - v4(0, 0, -1, 1) / std::sqrt(2.0)).norm(), 1e-12);
  const FaceHandle c = conjugate_face(o.k_tilde, o.lifted_disk);
  EXPECT_EQ(c.dim(), 1);
  EXPECT_LT(std::abs(std::abs(c.span_basis.col(0).dot(v4(0, 0, -1, 1) / std::sqrt(2.0))) - 1.0), 1e-9);
  Rng rng(14);
  EXPECT_EQ(face_property_violations(o.k_tilde, o.lifted_disk, 200, rng), 0);
}

TEST(GalleryFaces, PointsAndDisksOfCAreExposed) {
  const ConeSpec c = nice_not_amenable_C(512);
  ExposureOptions opt;
  opt.samples = 0;  // hull samples come from the curve sampler
  EXPECT_EQ(is_exposed(c, gamma_point_face(c, 1.0), opt).verdict, ExposureResult::Verdict::kExposed);
  EXPECT_EQ(is_exposed(c, alpha_point_face(c, 2.0), opt).verdict, ExposureResult::Verdict::kExposed);
  EXPECT_EQ(is_exposed(c, disk_alpha_face(c), opt).verdict, ExposureResult::Verdict::kExposed);
  EXPECT_EQ(is_exposed(c, disk_beta_face(c), opt).verdict, ExposureResult::Verdict::kExposed);
}

TEST(GalleryFaces, WitnessCurveLiesInDiskPlane) {
  const FaceHandle f = named_face("disk_alpha", 64);
  for (double t : {0.2, 0.1, 0.05}) EXPECT_TRUE(f.affine_hull.contains(witness_w(t)));
}

double sturm_face_oracle_sq(const Mat& x) {
  // Y = [[y11, y12], [y12, 1]] with y11 >= y12^2; for fixed y12 the best y11
  // is max(x11, y12^2).
  auto f = [&](double y12) {
    const double y11 = std::max(x(0, 0), y12 * y12);
    return std::pow(y11 - x(0, 0), 2) + 2 * std::pow(y12 - x(0, 1), 2) + std::pow(1 - x(1, 1), 2);
  };
  const double c = x(0, 1);
  double best = 1e300, arg = c;
  for (int k = -2000; k <= 2000; ++k) {
    const double y = c + std::abs(c) * k / 2000.0;
    if (f(y) < best) best = f(y), arg = y;
  }
  const double h = std::abs(c) / 2000.0 + 1e-12;
  return f(golden_section_min(f, arg - h, arg + h));
}

TEST(Sturm, FamilyExamples) {
  const SturmPoint p = sturm_family(1.0);
  EXPECT_NEAR(p.x(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(p.x.determinant(), 0.0, 1e-14);
  EXPECT_TRUE(contains(sturm_slice(), p.x_svec));
  for (double eps : {1.0, 0.1, 1e-3}) EXPECT_NEAR(sturm_family(eps).dist_to_aff, eps, 1e-15);
  const SturmPoint q = sturm_family(1e-3);
  EXPECT_NEAR(sturm_y11_bound(1e-3, 10.0), 1.0 / (1e-3 * 1.001) - 22.0, 1e-9);
  EXPECT_GT(q.nearest_y11, sturm_y11_bound(1e-3, 10.0));
}

TEST(Sturm, FaceProjectionMatchesOneDimensionalOracle) {
  for (double eps : {1.0, 0.3, 0.1, 0.01}) {
    const SturmPoint p = sturm_family(eps);
    EXPECT_NEAR(p.dist_to_F * p.dist_to_F, sturm_face_oracle_sq(p.x), 1e-8 * (1.0 + p.dist_to_F * p.dist_to_F));
  }
  Rng rng(15);
  for (int i = 0; i < 50; ++i) {
    const Vec g = gaussian_vector(3, rng);
    const Mat x = smat(g);
    const Vec y = project_sturm_face(g);
    EXPECT_NEAR((g - y).squaredNorm(), sturm_face_oracle_sq(x), 1e-8);
  }
}

TEST(Sturm, SliceProjectionIsOptimal) {
  const ConeSpec c = sturm_slice();
  Rng rng(16);
  for (int i = 0; i < 200; ++i) {
    const Vec x = 2.0 * gaussian_vector(3, rng);
    const Vec p = project(c, x).point;
    EXPECT_TRUE(contains(c, p, Tolerance{1e-9, 1e-9}));
    // Variational inequality against sampled members.
    for (int j = 0; j < 20; ++j) {
      const Vec m = project(c, 3.0 * gaussian_vector(3, rng)).point;
      EXPECT_LE((x - p).dot(m - p), 1e-8);
    }
  }
}

TEST(Sturm, GlobalBoundFailsForEveryKappa) {
  for (double kappa : {1.0, 10.0, 100.0}) {
    const double eps = sturm_eps_star(kappa);
    const SturmPoint p = sturm_family(eps);
    EXPECT_GT(p.dist_to_F, kappa * (p.dist_to_C + p.dist_to_aff));
  }
}

TEST(Registry, NamesResolveAndUnknownNamesFail) {
  for (const auto& n : set_names()) EXPECT_NO_THROW(named_set(n, 64)) << n;
  EXPECT_NO_THROW(named_face("gamma_point:1.0", 64));
  EXPECT_THROW(named_face("gamma_point:abc", 64), Error);
  EXPECT_THROW(named_set("nope"), Error);
  EXPECT_THROW(named_face("nope"), Error);
}

}  // namespace
}  // namespace conelab
