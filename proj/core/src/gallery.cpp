#include "conelab/gallery.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "conelab/projection.hpp"
#include "conelab/solvers.hpp"

namespace conelab::gallery {

namespace {

constexpr double kPi = std::numbers::pi;

// SetOracle assembled from closed-form pieces. `violation` is a signed
// measure, nonpositive exactly on the set; interior points are those with
// violation < -bound.
class ClosedFormOracle final : public SetOracle {
 public:
  struct Parts {
    std::string name;
    Index dim = 0;
    bool cone = true;
    std::function<Vec(const Vec&)> project;
    std::function<double(const Vec&)> violation;
    std::function<ConeSpec()> dual;
    std::function<Mat(int)> extreme;
  };
  explicit ClosedFormOracle(Parts p) : p_(std::move(p)) {}

  std::string name() const override { return p_.name; }
  Index dim() const override { return p_.dim; }
  bool is_cone() const override { return p_.cone; }
  ProjectionResult project(const Vec& x) const override {
    require_dim(p_.dim, x.size(), p_.name.c_str());
    ProjectionResult r;
    r.point = p_.project(x);
    r.distance = (x - r.point).norm();
    r.method = ProjectionMethod::kClosedForm;
    return r;
  }
  MembershipResult membership(const Vec& x, const Tolerance& tol) const override {
    require_dim(p_.dim, x.size(), p_.name.c_str());
    MembershipResult r;
    r.violation = p_.violation(x);
    const double b = tol.bound(x.norm());
    r.location = r.violation > b ? Location::kOutside : r.violation < -b ? Location::kInside : Location::kBoundary;
    return r;
  }
  std::optional<ConeSpec> dual() const override {
    if (p_.dual) return p_.dual();
    return std::nullopt;
  }
  std::optional<Mat> extreme_grid(int count) const override {
    if (p_.extreme) return p_.extreme(count);
    return std::nullopt;
  }

 private:
  Parts p_;
};

ConeSpec closed_form(ClosedFormOracle::Parts p) {
  return ConeSpec::named(std::make_shared<const ClosedFormOracle>(std::move(p)));
}

// Nearest point of the circular cone {(v, q) : ||v|| <= a q}.
void project_circular(Vec& v, double& q, double a) {
  const double n = v.norm();
  if (n <= a * q) return;
  if (a * n <= -q) {
    v.setZero();
    q = 0.0;
    return;
  }
  const double c = 1.0 / std::sqrt(1.0 + a * a);
  const double along = (a * n + q) * c;  // <(v, q), unit boundary direction>
  v *= along * a * c / n;
  q = along * c;
}

Vec k_tilde_project(const Vec& x) {
  static constexpr std::array<Index, 2> kBlocks{2, 1};
  return project_max_block_norm_cone(x, kBlocks);
}

Vec k_tilde_dual_project(const Vec& x) { return x + k_tilde_project(-x); }

double k_tilde_violation(const Vec& x) {
  return std::max(std::abs(x(2)) - x(3), x.head(2).norm() - x(3));
}

double k_tilde_dual_violation(const Vec& x) { return x.head(2).norm() + std::abs(x(2)) - x(3); }

Vec dual_sum_project(const Vec& x) {
  Vec v = x.head(2);
  double q = (x(2) + x(3)) / std::sqrt(2.0);
  const double r = (x(3) - x(2)) / std::sqrt(2.0);
  project_circular(v, q, std::sqrt(2.0));
  Vec p(4);
  p << v, (q - r) / std::sqrt(2.0), (q + r) / std::sqrt(2.0);
  return p;
}

// {(a, b, s, s) : ||(a, b)|| <= s}.
Vec lifted_disk_project(const Vec& x) {
  Vec v = x.head(2);
  double q = (x(2) + x(3)) / std::sqrt(2.0);
  project_circular(v, q, 1.0 / std::sqrt(2.0));
  const double s = q / std::sqrt(2.0);
  Vec p(4);
  p << v, s, s;
  return p;
}

double lifted_disk_violation(const Vec& x) {
  return std::max(x.head(2).norm() - 0.5 * (x(2) + x(3)), std::abs(x(2) - x(3)) / std::sqrt(2.0));
}

Vec disk_project(const Vec& x, double height) {
  Vec p = x;
  const double n = x.head(2).norm();
  if (n > 1.0) p.head(2) /= n;
  p(2) = height;
  return p;
}

Mat circle_lifts(int count, double c, double scale) {
  Mat m(4, count);
  for (int k = 0; k < count; ++k) {
    const double s = 2.0 * kPi * k / count;
    m.col(k) << std::cos(s), std::sin(s), c, 1.0;
  }
  return m * scale;
}

ConeSpec k_tilde();

ConeSpec k_tilde_dual() {
  return closed_form({"cylinder_K_tilde_dual", 4, true, k_tilde_dual_project, k_tilde_dual_violation, k_tilde,
                      [](int count) {
                        Mat m(4, count + 2);
                        m.leftCols(count) = circle_lifts(count, 0.0, 1.0 / std::sqrt(2.0));
                        m.col(count) << 0, 0, 1, 1;
                        m.col(count + 1) << 0, 0, -1, 1;
                        m.rightCols(2) /= std::sqrt(2.0);
                        return m;
                      }});
}

ConeSpec k_tilde() {
  return closed_form({"cylinder_K_tilde", 4, true, k_tilde_project, k_tilde_violation, k_tilde_dual,
                      [](int count) {
                        const int h = std::max(1, count / 2);
                        Mat m(4, 2 * h);
                        m << circle_lifts(h, 1.0, 1.0 / std::sqrt(3.0)), circle_lifts(h, -1.0, 1.0 / std::sqrt(3.0));
                        return m;
                      }});
}

std::optional<std::pair<Vec, Vec>> dual_sum_closed_form(const Vec& s) {
  require_dim(4, s.size(), "dual_sum");
  const double zw = s(2) + s(3);
  if (s.head(2).norm() > zw + 1e-12 * std::max(1.0, s.norm())) return std::nullopt;
  Vec u(4), v(4);
  u << s(0), s(1), 0.0, zw;
  v << 0.0, 0.0, s(2), -s(2);
  return std::make_pair(u, v);
}

Vec svec22() { return Vec::Unit(3, 2); }

double psd_violation(const Vec& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(smat(x), Eigen::EigenvaluesOnly);
  return -es.eigenvalues().minCoeff();
}

// Pi_psd(x + mu E22) with mu chosen on [lo, hi] so the (2,2) entry hits 1.
Vec shifted_psd(const Vec& x, double mu) { return project_psd_svec(x + mu * svec22()); }

double solve_shift(const Vec& x, bool allow_negative) {
  auto f = [&](double mu) { return shifted_psd(x, mu)(2) - 1.0; };
  double hi = 1.0, lo = allow_negative ? -1.0 : 0.0;
  for (int i = 0; i < 200 && f(hi) < 0.0; ++i) hi *= 2.0;
  for (int i = 0; i < 200 && allow_negative && f(lo) > 0.0; ++i) lo *= 2.0;
  return bisect_increasing(f, lo, hi, 400);
}

Vec sturm_project(const Vec& x) {
  const Vec p = project_psd_svec(x);
  if (p(2) >= 1.0) return p;
  return shifted_psd(x, solve_shift(x, false));
}

}  // namespace

Vec alpha(double t) { return Eigen::Vector3d(std::cos(t), std::sin(t), 1.0); }
Vec beta(double t) { return Eigen::Vector3d(std::cos(t), std::sin(t), -1.0); }
double gamma_height(double t) { return 9.0 / 8.0 * std::cos(t) - 1.0 / 8.0 * std::cos(3.0 * t); }
Vec gamma(double t) {
  return Eigen::Vector3d(2.0 * std::cos(2.0 * t) - 1.0, 2.0 * std::sin(2.0 * t), gamma_height(t));
}
Vec gamma_prime(double t) {
  return Eigen::Vector3d(-4.0 * std::sin(2.0 * t), 4.0 * std::cos(2.0 * t),
                         -9.0 / 8.0 * std::sin(t) + 3.0 / 8.0 * std::sin(3.0 * t));
}

HullSampler curve_sampler(int density, std::vector<double> gamma_anchors, bool lift) {
  auto lifted = [lift](Vec (*f)(double)) {
    return [f, lift](double t) {
      const Vec p = f(t);
      if (!lift) return p;
      Vec q(4);
      q << p, 1.0;
      return q;
    };
  };
  HullSampler s;
  s.density = density;
  s.curves.push_back(Curve{"alpha", lifted(&alpha), 0.0, 2.0 * kPi, true, {}});
  s.curves.push_back(Curve{"beta", lifted(&beta), 0.0, 2.0 * kPi, true, {}});
  s.curves.push_back(Curve{"gamma", lifted(&gamma), 0.0, kPi, false, std::move(gamma_anchors)});
  return s;
}

ConeSpec nice_not_amenable_C(int density, std::vector<double> gamma_anchors) {
  return ConeSpec::convex_hull(curve_sampler(density, std::move(gamma_anchors), false));
}

ConeSpec nice_not_amenable_K(int density, std::vector<double> gamma_anchors) {
  SliceSpec slice;
  slice.e = Vec::Unit(4, 3);
  slice.level = 1.0;
  slice.generator = curve_sampler(density, std::move(gamma_anchors), true);
  slice.hull_dim = 3;
  return ConeSpec::conic_hull(std::move(slice));
}

double exposing_normal_u(double t, int grid, double margin) {
  const double ct = std::cos(t);
  auto ratio = [&](double s) {
    const double den = 1.0 - gamma_height(s);
    return den > 0.0 ? (2.0 * std::cos(t - 2.0 * s) - ct - 1.0) / den : -std::numeric_limits<double>::infinity();
  };
  std::vector<double> r(grid + 1);
  for (int k = 0; k <= grid; ++k) r[k] = ratio(kPi * k / grid);
  double worst = 0.0;
  const double h = kPi / grid;
  // Grid maxima are refined locally; the peak near s = t/2 is narrow for small t.
  for (int k = 1; k <= grid; ++k) {
    if (!std::isfinite(r[k]) || r[k] < r[k - 1] || (k < grid && r[k] < r[k + 1])) continue;
    const double lo = (k - 1) * h, hi = std::min(kPi, (k + 1) * h);
    const double s = golden_section_min([&](double x) { return -ratio(x); }, std::max(lo, 1e-300), hi, 80);
    worst = std::max({worst, r[k], ratio(s)});
  }
  return margin + worst;
}

ExposingNormal exposing_normal(double t, int grid, double margin) {
  if (!(t > 0.0 && t < 2.0 * kPi)) throw Error(ErrorCode::kInvalidArgument, "exposing_normal: t must lie in (0, 2pi)");
  for (int attempt = 0; attempt < 2; ++attempt) {
    ExposingNormal e;
    e.t = t;
    e.grid = grid;
    e.u = exposing_normal_u(t, grid, margin);
    e.p = Eigen::Vector3d(std::cos(t), std::sin(t), e.u);
    const double top = e.p.dot(alpha(t));
    e.worst_gap = std::numeric_limits<double>::infinity();
    const int fine = 4 * grid;
    for (int k = 0; k <= fine; ++k) {
      e.worst_gap = std::min(e.worst_gap, top - e.p.dot(beta(2.0 * kPi * k / fine)));
      e.worst_gap = std::min(e.worst_gap, top - e.p.dot(gamma(kPi * k / fine)));
    }
    if (e.worst_gap > 0.0) return e;
    grid *= 4;
    margin *= 2.0;
  }
  throw Error(ErrorCode::kVerification, "exposing_normal: verification grid found a violation after refinement");
}

DetM det_M(double t, double s) {
  Eigen::Matrix3d m;
  m.col(0) = gamma(t) - gamma(s);
  m.col(1) = gamma_prime(t);
  m.col(2) = gamma_prime(s);
  DetM d;
  d.numeric = m.determinant();
  const double x = 0.5 * (s + t), y = 0.5 * (s - t);
  d.bracket = 6.0 + 3.0 * std::cos(2.0 * x) + std::cos(2.0 * (x - y)) + std::cos(2.0 * y) + std::cos(2.0 * (x + y));
  d.closed_form = -32.0 * std::cos(y) * std::sin(x) * std::pow(std::sin(y), 4) * d.bracket;
  return d;
}

Vec witness_w(double t) { return Eigen::Vector3d(2.0 * std::cos(2.0 * t) - 1.0, 2.0 * std::sin(2.0 * t), 1.0); }

double witness_face_distance_sq(double t) {
  const double r = 1.0 - std::sqrt(5.0 - 4.0 * std::cos(2.0 * t));
  return r * r;
}

double witness_hull_bound_sq(double t) {
  const double r = 1.0 - 9.0 / 8.0 * std::cos(t) + 1.0 / 8.0 * std::cos(3.0 * t);
  return r * r;
}

// (x - 1)^2 + y^2 = 8 - 8 cos 2t <= 1.
double witness_t_max() { return 0.5 * std::acos(7.0 / 8.0); }

CylinderObjects cylinder_hull_objects() {
  CylinderObjects o;
  o.k_tilde = k_tilde();
  o.k_tilde_dual = k_tilde_dual();
  o.dual_sum = closed_form({"cylinder_dual_sum", 4, true, dual_sum_project,
                            [](const Vec& x) { return x.head(2).norm() - x(2) - x(3); }, nullptr, nullptr});
  o.c_tilde = closed_form({"cylinder_C_tilde", 3, false,
                           [](const Vec& x) {
                             Vec p = disk_project(x, std::clamp(x(2), -1.0, 1.0));
                             return p;
                           },
                           [](const Vec& x) { return std::max(x.head(2).norm() - 1.0, std::abs(x(2)) - 1.0); },
                           nullptr, nullptr});
  o.lifted_disk = lifted_disk_alpha_face(o.k_tilde);
  o.lifted_disk.label = "gallery:cylinder_lifted_disk";
  return o;
}

BoundaryDecomposition decompose_dual_sum_boundary(const Vec& s, const Mat& generators) {
  require_dim(4, s.size(), "decompose_dual_sum_boundary");
  BoundaryDecomposition d;
  d.a = s(2) + s(3);
  if (d.a > 0.0) {
    d.t = std::atan2(-s(1), -s(0));
    if (d.t < 0.0) d.t += 2.0 * kPi;
  }
  d.u = exposing_normal_u(d.t);
  Vec e(4);
  e << -std::cos(d.t), -std::sin(d.t), -d.u, 1.0 + d.u;
  d.b = s(2) + d.a * d.u;
  d.dual_part = d.a * e;
  d.perp_part = d.b * Vec((Vec(4) << 0, 0, 1, -1).finished());
  d.residual = (s - d.dual_part - d.perp_part).norm();
  d.dual_margin = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < generators.cols(); ++j)
    d.dual_margin = std::min(d.dual_margin, e.dot(generators.col(j)) / generators.col(j).norm());
  return d;
}

namespace {

FaceHandle disk_face(const ConeSpec& c, double height, const char* label) {
  require_dim(3, c.dim(), "disk_face");
  ConeSpec set = closed_form({std::string(label), 3, false, [height](const Vec& x) { return disk_project(x, height); },
                              [height](const Vec& x) {
                                return std::max(x.head(2).norm() - 1.0, std::abs(x(2) - height));
                              },
                              nullptr, nullptr});
  Mat span = Mat::Zero(3, 2);
  span(0, 0) = span(1, 1) = 1.0;
  FaceHandle f = generic_face(c, set, span, label);
  f.affine_hull = AffineSubspace(Vec::Unit(3, 2) * height, span);
  f.exposing_hint = Vec::Unit(3, 2) * (height > 0 ? 1.0 : -1.0);
  return f;
}

FaceHandle point_face(const ConeSpec& c, const Vec& p, Vec hint, std::string label) {
  require_dim(3, c.dim(), "point_face");
  FaceHandle f = generic_face(c, ConeSpec::affine(AffineSubspace::point(p)), Mat(3, 0), std::move(label));
  f.affine_hull = AffineSubspace::point(p);
  f.exposing_hint = std::move(hint);
  return f;
}

}  // namespace

FaceHandle disk_alpha_face(const ConeSpec& c) { return disk_face(c, 1.0, "gallery:disk_alpha"); }
FaceHandle disk_beta_face(const ConeSpec& c) { return disk_face(c, -1.0, "gallery:disk_beta"); }

FaceHandle lifted_disk_alpha_face(const ConeSpec& k) {
  require_dim(4, k.dim(), "lifted_disk_alpha_face");
  ConeSpec set = closed_form({"lifted_disk_alpha", 4, true, lifted_disk_project, lifted_disk_violation, nullptr,
                              nullptr});
  Mat span = Mat::Zero(4, 3);
  span(0, 0) = span(1, 1) = 1.0;
  span(2, 2) = span(3, 2) = 1.0 / std::sqrt(2.0);
  FaceHandle f = generic_face(k, set, span, "gallery:lifted_disk_alpha");
  f.exposing_hint = (Vec(4) << 0, 0, 1, -1).finished();
  f.dual_sum = dual_sum_closed_form;
  return f;
}

FaceHandle alpha_point_face(const ConeSpec& c, double t) {
  return point_face(c, alpha(t), exposing_normal(t).p, "gallery:alpha_point:" + std::to_string(t));
}

FaceHandle gamma_point_face(const ConeSpec& c, double t) {
  if (!(t > 0.0 && t < kPi)) throw Error(ErrorCode::kInvalidArgument, "gamma_point_face: t must lie in (0, pi)");
  return point_face(c, gamma(t), Eigen::Vector3d(std::cos(2.0 * t), std::sin(2.0 * t), 0.0),
                    "gallery:gamma_point:" + std::to_string(t));
}

FaceHandle cylinder_segment_face(const ConeSpec& k_tilde) {
  require_dim(4, k_tilde.dim(), "cylinder_segment_face");
  Mat g(4, 2);
  g << 1, 1, 0, 0, 1, -1, 1, 1;
  FaceHandle f = generic_face(k_tilde, ConeSpec::generated(g), g, "gallery:cylinder_segment");
  f.exposing_hint = (Vec(4) << 1, 0, 0, -1).finished();
  return f;
}

ConeSpec sturm_slice() {
  return closed_form({"sturm_slice", 3, false, sturm_project,
                      [](const Vec& x) { return std::max(psd_violation(x), 1.0 - x(2)); }, nullptr, nullptr});
}

Vec project_sturm_face(const Vec& x) {
  require_dim(3, x.size(), "project_sturm_face");
  return shifted_psd(x, solve_shift(x, true));
}

FaceHandle sturm_face(const ConeSpec& slice) {
  ConeSpec set = closed_form({"sturm_face", 3, false, project_sturm_face,
                              [](const Vec& x) { return std::max(psd_violation(x), std::abs(x(2) - 1.0)); },
                              nullptr, nullptr});
  const Mat span = Mat::Identity(3, 2);
  FaceHandle f = generic_face(slice, set, span, "gallery:sturm_face");
  f.affine_hull = AffineSubspace(svec22(), span);
  f.exposing_hint = -svec22();  // X22 >= 1 on the slice, equality on F
  return f;
}

SturmPoint sturm_family(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sturm_family: eps must be positive");
  SturmPoint p;
  p.eps = eps;
  p.x.resize(2, 2);
  p.x << 1.0 / (eps * eps + eps * eps * eps), 1.0 / eps, 1.0 / eps, 1.0 + eps;
  p.x_svec = svec(p.x);
  p.dist_to_C = (p.x_svec - sturm_project(p.x_svec)).norm();
  p.dist_to_aff = std::abs(p.x(1, 1) - 1.0);
  p.nearest_F = project_sturm_face(p.x_svec);
  p.dist_to_F = (p.x_svec - p.nearest_F).norm();
  p.nearest_y11 = p.nearest_F(0);
  return p;
}

double sturm_y11_bound(double eps, double kappa) { return 1.0 / (eps * (1.0 + eps)) - 2.0 * (kappa + 1.0); }

double sturm_eps_star(double kappa) {
  for (int k = 0; k <= 60; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const SturmPoint p = sturm_family(eps);
    if (p.dist_to_F > kappa * (p.dist_to_C + p.dist_to_aff)) return eps;
  }
  throw Error(ErrorCode::kVerification, "sturm_eps_star: no eps >= 2^-60 violates the bound");
}

std::vector<std::string> set_names() {
  return {"nice_not_amenable_C", "nice_not_amenable_K", "cylinder_K_tilde", "cylinder_K_tilde_dual",
          "cylinder_dual_sum",   "cylinder_C_tilde",    "sturm_slice"};
}

ConeSpec named_set(const std::string& name, int density) {
  if (name == "nice_not_amenable_C") return nice_not_amenable_C(density);
  if (name == "nice_not_amenable_K") return nice_not_amenable_K(density);
  if (name == "sturm_slice") return sturm_slice();
  const CylinderObjects o = cylinder_hull_objects();
  if (name == "cylinder_K_tilde") return o.k_tilde;
  if (name == "cylinder_K_tilde_dual") return o.k_tilde_dual;
  if (name == "cylinder_dual_sum") return o.dual_sum;
  if (name == "cylinder_C_tilde") return o.c_tilde;
  throw Error(ErrorCode::kInvalidArgument, "unknown gallery set '" + name + "'");
}

std::vector<std::string> face_names() {
  return {"disk_alpha", "disk_beta",   "lifted_disk_alpha", "cylinder_lifted_disk", "cylinder_segment",
          "sturm_face", "alpha_point:<t>", "gamma_point:<t>"};
}

FaceHandle named_face(const std::string& name, int density) {
  auto param = [&](const std::string& prefix) -> std::optional<double> {
    if (name.rfind(prefix, 0) != 0) return std::nullopt;
    try {
      std::size_t used = 0;
      const std::string tail = name.substr(prefix.size());
      const double t = std::stod(tail, &used);
      if (used != tail.size()) throw std::invalid_argument(tail);
      return t;
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad parameter in gallery face '" + name + "'");
    }
  };
  if (name == "disk_alpha") return disk_alpha_face(nice_not_amenable_C(density));
  if (name == "disk_beta") return disk_beta_face(nice_not_amenable_C(density));
  if (name == "lifted_disk_alpha") return lifted_disk_alpha_face(nice_not_amenable_K(density));
  if (name == "cylinder_lifted_disk") return cylinder_hull_objects().lifted_disk;
  if (name == "cylinder_segment") return cylinder_segment_face(cylinder_hull_objects().k_tilde);
  if (name == "sturm_face") return sturm_face(sturm_slice());
  if (auto t = param("alpha_point:")) return alpha_point_face(nice_not_amenable_C(density), *t);
  if (auto t = param("gamma_point:")) return gamma_point_face(nice_not_amenable_C(density), *t);
  throw Error(ErrorCode::kInvalidArgument, "unknown gallery face '" + name + "'");
}

}  // namespace conelab::gallery
