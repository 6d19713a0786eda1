#pragma once

#include <string>
#include <vector>

#include "conelab/face.hpp"

// Closed-form objects: a compact set C = conv(alpha ∪ beta ∪ gamma) in R^3 whose
// cone is nice but has a non-amenable face, the cylinder hull that shares the
// disk faces, and the slice {X psd, X22 >= 1} of 2x2 symmetric matrices.
namespace conelab::gallery {

inline constexpr int kDefaultDensity = 2048;

// alpha(t) = (cos t, sin t, 1), beta(t) = (cos t, sin t, -1) on [0, 2pi).
Vec alpha(double t);
Vec beta(double t);
// gamma(t) = (2cos2t - 1, 2sin2t, z(t)) on [0, pi], z(t) = 9/8 cos t - 1/8 cos 3t.
Vec gamma(double t);
Vec gamma_prime(double t);
double gamma_height(double t);

// Sampler of the three curves in R^3 (lift = false) or of their lifts (c, 1)
// in R^4. gamma_anchors are gamma parameters always present in the sample.
HullSampler curve_sampler(int density = kDefaultDensity, std::vector<double> gamma_anchors = {},
                          bool lift = false);

ConeSpec nice_not_amenable_C(int density = kDefaultDensity, std::vector<double> gamma_anchors = {});
// cone(C x {1}) with slice normal e4.
ConeSpec nice_not_amenable_K(int density = kDefaultDensity, std::vector<double> gamma_anchors = {});

// p(t) = (cos t, sin t, u(t)) exposes alpha(t) in C. u(t) is a margin plus
// the largest ratio that the gamma curve forces on an s-grid.
struct ExposingNormal {
  double t = 0.0;
  double u = 0.0;
  Vec p;
  int grid = 0;
  // Min over a finer verification grid of <p, alpha(t)> - <p, x> for x on
  // beta and gamma; strictly positive when p exposes alpha(t).
  double worst_gap = 0.0;
};
double exposing_normal_u(double t, int grid = 10000, double margin = 1e-3);
// Verified on a grid four times finer; refines once, then throws kVerification.
ExposingNormal exposing_normal(double t, int grid = 10000, double margin = 1e-3);

// det[gamma(t) - gamma(s), gamma'(t), gamma'(s)] numerically and through the
// factored closed form in x = (s + t)/2, y = (s - t)/2.
struct DetM {
  double numeric = 0.0;
  double closed_form = 0.0;
  double bracket = 0.0;  // the trigonometric factor, >= 2
};
DetM det_M(double t, double s);

// w(t) = (2cos2t - 1, 2sin2t, 1), a curve in the plane of the alpha disk.
Vec witness_w(double t);
// Squared distance of w(t) to the alpha disk (exact).
double witness_face_distance_sq(double t);
// Squared distance of w(t) to gamma(t); an upper bound on dist(w(t), C)^2.
double witness_hull_bound_sq(double t);
// Largest t with w(t) in the disk {(x - 1)^2 + y^2 <= 1} of the alpha plane.
double witness_t_max();

// Cylinder objects: K~ = {|c| <= t, ||(a,b)|| <= t}, its dual
// {||(x,y)|| + |z| <= w}, the dual sum {||(x,y)|| <= z + w} and the face
// F = {(a, b, s, s)} lifted from the alpha disk.
struct CylinderObjects {
  ConeSpec k_tilde;
  ConeSpec k_tilde_dual;
  ConeSpec dual_sum;
  ConeSpec c_tilde;  // the compact slice {||(a,b)|| <= 1, |c| <= 1}
  FaceHandle lifted_disk;
};
CylinderObjects cylinder_hull_objects();

// Decomposition of a boundary point s of the dual-sum set as
// a*E(t) + b*(0,0,1,-1) with E(t) = (-cos t, -sin t, -u(t), 1 + u(t)) in K*.
struct BoundaryDecomposition {
  double a = 0.0;
  double b = 0.0;
  double t = 0.0;
  double u = 0.0;
  Vec dual_part;  // a * E(t)
  Vec perp_part;  // b * (0,0,1,-1)
  double residual = 0.0;  // ||s - dual_part - perp_part||
  // min over the columns g of `generators` of <E(t), g> / ||g||; >= 0 means E(t) ∈ K*.
  double dual_margin = 0.0;
};
BoundaryDecomposition decompose_dual_sum_boundary(const Vec& s, const Mat& generators);

// Faces. The disk faces belong to C; the lifted disk to K.
FaceHandle disk_alpha_face(const ConeSpec& c);
FaceHandle disk_beta_face(const ConeSpec& c);
FaceHandle lifted_disk_alpha_face(const ConeSpec& k);
FaceHandle alpha_point_face(const ConeSpec& c, double t);
FaceHandle gamma_point_face(const ConeSpec& c, double t);
// 2-dim face of K~ spanned by the lifts of alpha(0) and beta(0).
FaceHandle cylinder_segment_face(const ConeSpec& k_tilde);

// Slice C = {X psd, X22 >= 1} in svec coordinates and its face X22 = 1.
ConeSpec sturm_slice();
FaceHandle sturm_face(const ConeSpec& slice);
// Nearest point of the face {X psd, X22 = 1} (exact up to bisection).
Vec project_sturm_face(const Vec& x);

struct SturmPoint {
  double eps = 0.0;
  Mat x;
  Vec x_svec;
  double dist_to_C = 0.0;
  double dist_to_aff = 0.0;
  double dist_to_F = 0.0;
  Vec nearest_F;
  double nearest_y11 = 0.0;
};
SturmPoint sturm_family(double eps);
// Lower bound on y11 for any y in F with ||y - x^eps|| <= (kappa + 1) eps.
double sturm_y11_bound(double eps, double kappa);
// Largest eps = 2^-k (k <= 60) with dist(x^eps, F) > kappa (dist_C + dist_aff).
double sturm_eps_star(double kappa);

// Registry used by the JSON specs and face descriptors.
std::vector<std::string> set_names();
ConeSpec named_set(const std::string& name, int density = kDefaultDensity);
std::vector<std::string> face_names();
// Names: disk_alpha, disk_beta, lifted_disk_alpha, cylinder_lifted_disk,
// cylinder_segment, sturm_face, alpha_point:<t>, gamma_point:<t>.
FaceHandle named_face(const std::string& name, int density = kDefaultDensity);

}  // namespace conelab::gallery
