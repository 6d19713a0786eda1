#include "conelab/cone.hpp"

#include <cmath>
#include <sstream>

#include "conelab/projection.hpp"

namespace conelab {

const char* to_string(ProjectionMethod m) {
  switch (m) {
    case ProjectionMethod::kClosedForm: return "closed_form";
    case ProjectionMethod::kEigenClip: return "eigen_clip";
    case ProjectionMethod::kDykstra: return "dykstra";
    case ProjectionMethod::kHullQp: return "hull_qp";
    case ProjectionMethod::kActiveSet: return "active_set";
    case ProjectionMethod::kProjectedGradient: return "projected_gradient";
    case ProjectionMethod::kComposite: return "composite";
  }
  return "unknown";
}

const char* to_string(Location l) {
  switch (l) {
    case Location::kInside: return "inside";
    case Location::kBoundary: return "boundary";
    case Location::kOutside: return "outside";
  }
  return "unknown";
}

Index HullSampler::ambient_dim() const {
  if (points.cols() > 0) return points.rows();
  if (!curves.empty()) return curves.front().point(curves.front().t0).size();
  return 0;
}

HullSample HullSampler::sample(int per_curve) const {
  const Index d = ambient_dim();
  std::vector<Vec> pts;
  HullSample s;
  for (Index j = 0; j < points.cols(); ++j) {
    pts.push_back(points.col(j));
    s.curve.push_back(-1);
    s.param.push_back(0.0);
    s.spacing.push_back(0.0);
  }
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const Curve& cv = curves[c];
    const int n = std::max(per_curve, 2);
    const double h = cv.periodic ? (cv.t1 - cv.t0) / n : (cv.t1 - cv.t0) / (n - 1);
    for (int k = 0; k < n; ++k) {
      const double t = (!cv.periodic && k == n - 1) ? cv.t1 : cv.t0 + k * h;
      pts.push_back(cv.point(t));
      s.curve.push_back(static_cast<int>(c));
      s.param.push_back(t);
      s.spacing.push_back(h);
    }
    for (double t : cv.anchors) {
      pts.push_back(cv.point(t));
      s.curve.push_back(static_cast<int>(c));
      s.param.push_back(t);
      s.spacing.push_back(h);
    }
  }
  s.points.resize(d, static_cast<Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    require_dim(d, pts[j].size(), "HullSampler");
    s.points.col(static_cast<Index>(j)) = pts[j];
  }
  return s;
}

namespace {

Location classify(double violation, double bound) {
  if (violation > bound) return Location::kOutside;
  if (violation < -bound) return Location::kInside;
  return Location::kBoundary;
}

// Membership decided by the distance to the set; interiority by probing the
// coordinate directions at a small radius.
template <class Proj>
MembershipResult projection_membership(const Proj& proj, const Vec& x, const Tolerance& tol) {
  MembershipResult r;
  r.projection_based = true;
  const double scale = x.norm();
  r.violation = (x - proj(x)).norm();
  if (r.violation > tol.bound(scale)) {
    r.location = Location::kOutside;
    return r;
  }
  const double delta = 1e-6 * std::max(1.0, scale);
  r.location = Location::kInside;
  for (Index i = 0; i < x.size() && r.location == Location::kInside; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vec y = x;
      y(i) += sign * delta;
      if ((y - proj(y)).norm() > 1e-3 * delta) {
        r.location = Location::kBoundary;
        break;
      }
    }
  }
  return r;
}

MembershipResult combine(const std::vector<MembershipResult>& parts) {
  MembershipResult r;
  r.location = Location::kInside;
  r.violation = -std::numeric_limits<double>::infinity();
  for (const auto& p : parts) {
    r.violation = std::max(r.violation, p.violation);
    r.projection_based = r.projection_based || p.projection_based;
    if (p.location == Location::kOutside) r.location = Location::kOutside;
    else if (p.location == Location::kBoundary && r.location == Location::kInside)
      r.location = Location::kBoundary;
  }
  if (parts.empty()) r.violation = 0.0;
  return r;
}

std::string fmt_dim(const char* name, Index d) {
  std::ostringstream os;
  os << name << "(" << d << ")";
  return os.str();
}

}  // namespace

MembershipResult SetOracle::membership(const Vec& x, const Tolerance& tol) const {
  return projection_membership([this](const Vec& y) { return project(y).point; }, x, tol);
}

std::optional<ConeSpec> SetOracle::dual() const { return std::nullopt; }

std::optional<Mat> SetOracle::extreme_grid(int) const { return std::nullopt; }

namespace {
ConeSpec make(auto v) { return ConeSpec(std::make_shared<const ConeNode>(ConeNode{std::move(v)})); }
}  // namespace

ConeSpec::ConeSpec() : node_(std::make_shared<const ConeNode>(ConeNode{spec::LinearSubspace{Mat(0, 0), 0}})) {}

ConeSpec ConeSpec::halfspace(Vec normal, double offset) {
  if (normal.size() == 0 || normal.norm() == 0.0)
    throw Error(ErrorCode::kInvalidArgument, "halfspace: normal must be nonzero");
  if (offset < 0.0) throw Error(ErrorCode::kInvalidArgument, "halfspace: offset < 0 excludes the origin");
  return make(spec::Halfspace{std::move(normal), offset});
}

ConeSpec ConeSpec::subspace(const Mat& spanning_columns, Index ambient_dim) {
  if (spanning_columns.cols() > 0) require_dim(ambient_dim, spanning_columns.rows(), "subspace");
  Mat b = spanning_columns.cols() > 0 ? orthonormalize(spanning_columns) : Mat(ambient_dim, 0);
  return make(spec::LinearSubspace{std::move(b), ambient_dim});
}

ConeSpec ConeSpec::polyhedral(Mat rows) {
  if (rows.cols() == 0) throw Error(ErrorCode::kInvalidArgument, "polyhedral: zero ambient dimension");
  return make(spec::Polyhedral{std::move(rows)});
}

ConeSpec ConeSpec::generated(Mat generators, Index ambient_dim) {
  if (ambient_dim >= 0 && generators.cols() == 0) generators.resize(ambient_dim, 0);
  if (ambient_dim >= 0) require_dim(ambient_dim, generators.rows(), "generated");
  return make(spec::FinitelyGenerated{std::move(generators)});
}

ConeSpec ConeSpec::second_order(Index dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "second_order: dim must be >= 1");
  return make(spec::SecondOrder{dim});
}

ConeSpec ConeSpec::psd(Index n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "psd: order must be >= 1");
  return make(spec::Psd{n});
}

ConeSpec ConeSpec::orthant(Index dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "nonnegative_orthant: dim must be >= 1");
  return make(spec::NonnegativeOrthant{dim});
}

ConeSpec ConeSpec::product(std::vector<ConeSpec> factors) {
  if (factors.empty()) throw Error(ErrorCode::kInvalidArgument, "product: no factors");
  return make(spec::Product{std::move(factors)});
}

ConeSpec ConeSpec::intersection(std::vector<ConeSpec> parts) {
  if (parts.empty()) throw Error(ErrorCode::kInvalidArgument, "intersection: no parts");
  for (const auto& p : parts) require_dim(parts.front().dim(), p.dim(), "intersection");
  return make(spec::Intersection{std::move(parts)});
}

ConeSpec ConeSpec::image(Mat map, ConeSpec inner) {
  require_dim(inner.dim(), map.cols(), "linear_image");
  if (numerical_rank(map) != map.cols())
    throw Error(ErrorCode::kInvalidArgument, "linear_image: map must have full column rank");
  const Mat gram = map.transpose() * map;
  const bool ortho = (gram - Mat::Identity(map.cols(), map.cols())).cwiseAbs().maxCoeff() < 1e-12;
  return make(spec::LinearImage{std::move(map), std::move(inner), ortho});
}

ConeSpec ConeSpec::conic_hull(SliceSpec slice) {
  if (slice.e.size() == 0 || slice.e.norm() == 0.0)
    throw Error(ErrorCode::kInvalidArgument, "conic_hull: slice normal must be nonzero");
  require_dim(slice.e.size(), slice.generator.ambient_dim(), "conic_hull");
  const HullSample s = slice.generator.sample(std::min(slice.generator.density, 64));
  for (Index j = 0; j < s.points.cols(); ++j)
    if (std::abs(slice.e.dot(s.points.col(j)) - slice.level) > 1e-10)
      throw Error(ErrorCode::kInvalidArgument, "conic_hull: sampled point off the slice hyperplane");
  if (!(slice.level > 0.0)) throw Error(ErrorCode::kInvalidArgument, "conic_hull: level must be positive");
  return make(spec::ConicHull{std::move(slice)});
}

ConeSpec ConeSpec::convex_hull(HullSampler sampler) {
  if (sampler.ambient_dim() == 0) throw Error(ErrorCode::kInvalidArgument, "convex_hull: empty sampler");
  return make(spec::ConvexHull{std::move(sampler)});
}

ConeSpec ConeSpec::affine(AffineSubspace a) { return make(spec::Affine{std::move(a)}); }

ConeSpec ConeSpec::named(std::shared_ptr<const SetOracle> oracle) {
  if (!oracle) throw Error(ErrorCode::kInvalidArgument, "named: null oracle");
  return make(spec::Named{std::move(oracle)});
}

Index ConeSpec::dim() const {
  struct {
    Index operator()(const spec::Halfspace& h) const { return h.normal.size(); }
    Index operator()(const spec::LinearSubspace& s) const { return s.ambient_dim; }
    Index operator()(const spec::Polyhedral& p) const { return p.rows.cols(); }
    Index operator()(const spec::FinitelyGenerated& g) const { return g.generators.rows(); }
    Index operator()(const spec::SecondOrder& s) const { return s.dim; }
    Index operator()(const spec::Psd& p) const { return svec_dim(p.n); }
    Index operator()(const spec::NonnegativeOrthant& o) const { return o.dim; }
    Index operator()(const spec::Product& p) const {
      Index d = 0;
      for (const auto& f : p.factors) d += f.dim();
      return d;
    }
    Index operator()(const spec::Intersection& i) const { return i.parts.front().dim(); }
    Index operator()(const spec::LinearImage& l) const { return l.map.rows(); }
    Index operator()(const spec::ConicHull& c) const { return c.slice.e.size(); }
    Index operator()(const spec::ConvexHull& c) const { return c.sampler.ambient_dim(); }
    Index operator()(const spec::Affine& a) const { return a.subspace.ambient_dim(); }
    Index operator()(const spec::Named& n) const { return n.oracle->dim(); }
  } v;
  return visit(*this, v);
}

bool ConeSpec::is_cone() const {
  struct {
    bool operator()(const spec::Halfspace& h) const { return h.offset == 0.0; }
    bool operator()(const spec::Product& p) const {
      for (const auto& f : p.factors)
        if (!f.is_cone()) return false;
      return true;
    }
    bool operator()(const spec::Intersection& i) const {
      for (const auto& f : i.parts)
        if (!f.is_cone()) return false;
      return true;
    }
    bool operator()(const spec::LinearImage& l) const { return l.inner.is_cone(); }
    bool operator()(const spec::ConvexHull&) const { return false; }
    bool operator()(const spec::Affine& a) const { return a.subspace.basepoint().norm() == 0.0; }
    bool operator()(const spec::Named& n) const { return n.oracle->is_cone(); }
    bool operator()(const spec::LinearSubspace&) const { return true; }
    bool operator()(const spec::Polyhedral&) const { return true; }
    bool operator()(const spec::FinitelyGenerated&) const { return true; }
    bool operator()(const spec::SecondOrder&) const { return true; }
    bool operator()(const spec::Psd&) const { return true; }
    bool operator()(const spec::NonnegativeOrthant&) const { return true; }
    bool operator()(const spec::ConicHull&) const { return true; }
  } v;
  return visit(*this, v);
}

std::string ConeSpec::kind() const {
  struct {
    std::string operator()(const spec::Halfspace&) const { return "halfspace"; }
    std::string operator()(const spec::LinearSubspace&) const { return "linear_subspace"; }
    std::string operator()(const spec::Polyhedral&) const { return "polyhedral"; }
    std::string operator()(const spec::FinitelyGenerated&) const { return "finitely_generated"; }
    std::string operator()(const spec::SecondOrder&) const { return "second_order"; }
    std::string operator()(const spec::Psd&) const { return "psd"; }
    std::string operator()(const spec::NonnegativeOrthant&) const { return "nonnegative_orthant"; }
    std::string operator()(const spec::Product&) const { return "product"; }
    std::string operator()(const spec::Intersection&) const { return "intersection"; }
    std::string operator()(const spec::LinearImage&) const { return "linear_image"; }
    std::string operator()(const spec::ConicHull&) const { return "conic_hull"; }
    std::string operator()(const spec::ConvexHull&) const { return "convex_hull"; }
    std::string operator()(const spec::Affine&) const { return "affine"; }
    std::string operator()(const spec::Named&) const { return "gallery"; }
  } v;
  return visit(*this, v);
}

std::string ConeSpec::describe() const {
  struct {
    std::string operator()(const spec::SecondOrder& s) const { return fmt_dim("second_order", s.dim); }
    std::string operator()(const spec::Psd& p) const { return fmt_dim("psd", p.n); }
    std::string operator()(const spec::NonnegativeOrthant& o) const {
      return fmt_dim("nonnegative_orthant", o.dim);
    }
    std::string operator()(const spec::Product& p) const {
      std::string s = "product(";
      for (std::size_t i = 0; i < p.factors.size(); ++i) s += (i ? ", " : "") + p.factors[i].describe();
      return s + ")";
    }
    std::string operator()(const spec::Intersection& p) const {
      std::string s = "intersection(";
      for (std::size_t i = 0; i < p.parts.size(); ++i) s += (i ? ", " : "") + p.parts[i].describe();
      return s + ")";
    }
    std::string operator()(const spec::LinearImage& l) const {
      return "linear_image(" + l.inner.describe() + ")";
    }
    std::string operator()(const spec::Named& n) const { return "gallery(" + n.oracle->name() + ")"; }
    std::string operator()(const spec::Halfspace& h) const { return fmt_dim("halfspace", h.normal.size()); }
    std::string operator()(const spec::LinearSubspace& s) const {
      return fmt_dim("linear_subspace", s.ambient_dim);
    }
    std::string operator()(const spec::Polyhedral& p) const { return fmt_dim("polyhedral", p.rows.cols()); }
    std::string operator()(const spec::FinitelyGenerated& g) const {
      return fmt_dim("finitely_generated", g.generators.rows());
    }
    std::string operator()(const spec::ConicHull& c) const { return fmt_dim("conic_hull", c.slice.e.size()); }
    std::string operator()(const spec::ConvexHull& c) const {
      return fmt_dim("convex_hull", c.sampler.ambient_dim());
    }
    std::string operator()(const spec::Affine& a) const { return fmt_dim("affine", a.subspace.ambient_dim()); }
  } v;
  return visit(*this, v);
}

MembershipResult membership(const ConeSpec& k, const Vec& x, const Tolerance& tol) {
  require_dim(k.dim(), x.size(), "membership");
  const double bound = tol.bound(x.norm());
  auto exact = [&](double violation) {
    MembershipResult r;
    r.violation = violation;
    r.location = classify(violation, bound);
    return r;
  };
  auto by_projection = [&]() {
    return projection_membership([&](const Vec& y) { return project(k, y).point; }, x, tol);
  };
  struct Visitor {
    decltype(exact)& ex;
    decltype(by_projection)& bp;
    const Vec& x;
    const Tolerance& tol;
    double bound;

    MembershipResult operator()(const spec::Halfspace& h) const {
      return ex((h.normal.dot(x) - h.offset) / h.normal.norm());
    }
    MembershipResult operator()(const spec::LinearSubspace& s) const {
      const double d = (x - s.basis * (s.basis.transpose() * x)).norm();
      MembershipResult r = ex(d);
      if (r.location != Location::kOutside)
        r.location = s.basis.cols() == s.ambient_dim ? Location::kInside : Location::kBoundary;
      return r;
    }
    MembershipResult operator()(const spec::Polyhedral& p) const {
      if (p.rows.rows() == 0) return ex(-std::numeric_limits<double>::infinity());
      const Vec norms = p.rows.rowwise().norm();
      Vec v = p.rows * x;
      for (Index i = 0; i < v.size(); ++i)
        if (norms(i) > 0.0) v(i) /= norms(i);
      return ex(v.maxCoeff());
    }
    MembershipResult operator()(const spec::SecondOrder& s) const {
      return ex((x.head(s.dim - 1).norm() - x(s.dim - 1)) / std::sqrt(2.0));
    }
    MembershipResult operator()(const spec::Psd&) const {
      Eigen::SelfAdjointEigenSolver<Mat> es(smat(x), Eigen::EigenvaluesOnly);
      return ex(-es.eigenvalues().minCoeff());
    }
    MembershipResult operator()(const spec::NonnegativeOrthant&) const { return ex(-x.minCoeff()); }
    MembershipResult operator()(const spec::Product& p) const {
      std::vector<MembershipResult> parts;
      Index off = 0;
      for (const auto& f : p.factors) {
        parts.push_back(membership(f, x.segment(off, f.dim()), tol));
        off += f.dim();
      }
      return combine(parts);
    }
    MembershipResult operator()(const spec::Intersection& in) const {
      std::vector<MembershipResult> parts;
      for (const auto& f : in.parts) parts.push_back(membership(f, x, tol));
      return combine(parts);
    }
    MembershipResult operator()(const spec::Affine& a) const {
      MembershipResult r = ex(a.subspace.distance(x));
      if (r.location != Location::kOutside)
        r.location = a.subspace.dim() == a.subspace.ambient_dim() ? Location::kInside : Location::kBoundary;
      return r;
    }
    MembershipResult operator()(const spec::Named& n) const { return n.oracle->membership(x, tol); }
    MembershipResult operator()(const spec::FinitelyGenerated&) const { return bp(); }
    MembershipResult operator()(const spec::LinearImage&) const { return bp(); }
    MembershipResult operator()(const spec::ConicHull&) const { return bp(); }
    MembershipResult operator()(const spec::ConvexHull&) const { return bp(); }
  } v{exact, by_projection, x, tol, bound};
  return visit(k, v);
}

bool contains(const ConeSpec& k, const Vec& x, const Tolerance& tol) {
  return membership(k, x, tol).location != Location::kOutside;
}

ConeSpec dual_cone(const ConeSpec& k) {
  struct {
    ConeSpec operator()(const spec::Halfspace& h) const {
      if (h.offset != 0.0) throw Error(ErrorCode::kInvalidArgument, "dual_cone: halfspace with offset is not a cone");
      return ConeSpec::generated(Mat(-h.normal));
    }
    ConeSpec operator()(const spec::LinearSubspace& s) const {
      return ConeSpec::subspace(orthogonal_complement(s.basis, s.ambient_dim), s.ambient_dim);
    }
    ConeSpec operator()(const spec::Polyhedral& p) const {
      return ConeSpec::generated(Mat(-p.rows.transpose()), p.rows.cols());
    }
    ConeSpec operator()(const spec::FinitelyGenerated& g) const {
      if (g.generators.cols() == 0) return ConeSpec::subspace(Mat::Identity(g.generators.rows(), g.generators.rows()), g.generators.rows());
      return ConeSpec::polyhedral(Mat(-g.generators.transpose()));
    }
    ConeSpec operator()(const spec::SecondOrder& s) const { return ConeSpec::second_order(s.dim); }
    ConeSpec operator()(const spec::Psd& p) const { return ConeSpec::psd(p.n); }
    ConeSpec operator()(const spec::NonnegativeOrthant& o) const { return ConeSpec::orthant(o.dim); }
    ConeSpec operator()(const spec::Product& p) const {
      std::vector<ConeSpec> d;
      for (const auto& f : p.factors) d.push_back(dual_cone(f));
      return ConeSpec::product(std::move(d));
    }
    ConeSpec operator()(const spec::Intersection& in) const {
      if (in.parts.size() == 1) return dual_cone(in.parts.front());
      throw Error(ErrorCode::kDualUnavailable, "dual_cone: general intersection has no implemented dual; use sampled_polar");
    }
    ConeSpec operator()(const spec::LinearImage& l) const {
      if (l.map.rows() != l.map.cols())
        throw Error(ErrorCode::kDualUnavailable, "dual_cone: image under a non-square map has no implemented dual");
      const Mat inv_t = l.map.inverse().transpose();
      return ConeSpec::image(inv_t, dual_cone(l.inner));
    }
    ConeSpec operator()(const spec::ConicHull&) const {
      throw Error(ErrorCode::kDualUnavailable, "dual_cone: conic hull of a sampled slice; use sampled_polar");
    }
    ConeSpec operator()(const spec::ConvexHull&) const {
      throw Error(ErrorCode::kInvalidArgument, "dual_cone: convex hull is not a cone");
    }
    ConeSpec operator()(const spec::Affine& a) const {
      if (a.subspace.basepoint().norm() != 0.0)
        throw Error(ErrorCode::kInvalidArgument, "dual_cone: affine set is not a cone");
      const Index d = a.subspace.ambient_dim();
      return ConeSpec::subspace(orthogonal_complement(a.subspace.basis(), d), d);
    }
    ConeSpec operator()(const spec::Named& n) const {
      if (auto d = n.oracle->dual()) return *d;
      throw Error(ErrorCode::kDualUnavailable, "dual_cone: no dual for " + n.oracle->name());
    }
  } v;
  if (!k.is_cone()) throw Error(ErrorCode::kInvalidArgument, "dual_cone: set is not a cone");
  return visit(k, v);
}

bool has_dual(const ConeSpec& k) {
  try {
    dual_cone(k);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Mat sampled_polar(const ConeSpec& k, int count, Rng& rng) {
  const Index d = k.dim();
  Mat out(d, 0);
  for (int i = 0, tries = 0; i < count && tries < 20 * count; ++tries) {
    const Vec x = gaussian_vector(d, rng);
    const Vec s = project(k, x).point - x;
    const double n = s.norm();
    if (n < 1e-9) continue;
    out.conservativeResize(d, out.cols() + 1);
    out.col(out.cols() - 1) = s / n;
    ++i;
  }
  return out;
}

Vec rescale_to_slice(const SliceSpec& slice, const Vec& x) {
  require_dim(slice.e.size(), x.size(), "rescale_to_slice");
  const double s = slice.e.dot(x);
  if (!(s > 0.0)) throw Error(ErrorCode::kNotRescalable, "rescale_to_slice: <e, x> <= 0");
  return x * (slice.level / s);
}

Vec rescale_to_slice(const ConeSpec& k, const Vec& x) {
  const auto* h = k.get_if<spec::ConicHull>();
  if (!h) throw Error(ErrorCode::kInvalidArgument, "rescale_to_slice: cone is not a conic hull");
  return rescale_to_slice(h->slice, x);
}

Vec sample_element(const ConeSpec& k, Rng& rng, double scale) {
  return project(k, scale * gaussian_vector(k.dim(), rng)).point;
}

}  // namespace conelab
