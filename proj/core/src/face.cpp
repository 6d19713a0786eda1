#include "conelab/face.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "conelab/projection.hpp"

namespace conelab {

const char* to_string(FaceKind k) {
  switch (k) {
    case FaceKind::kWhole: return "whole";
    case FaceKind::kZero: return "zero";
    case FaceKind::kCoordinate: return "coordinate";
    case FaceKind::kPsdRange: return "psd_range";
    case FaceKind::kRay: return "ray";
    case FaceKind::kActiveRows: return "active_rows";
    case FaceKind::kGeneratorSubset: return "generator_subset";
    case FaceKind::kProduct: return "product";
    case FaceKind::kIntersection: return "intersection";
    case FaceKind::kGeneric: return "generic";
  }
  return "unknown";
}

const char* to_string(ExposureResult::Verdict v) {
  switch (v) {
    case ExposureResult::Verdict::kExposed: return "exposed";
    case ExposureResult::Verdict::kNotExposed: return "not_exposed";
    case ExposureResult::Verdict::kUndecided: return "undecided";
  }
  return "unknown";
}

bool FaceHandle::contains(const Vec& x, const Tolerance& tol) const { return conelab::contains(set, x, tol); }

ProjectionResult FaceHandle::project(const Vec& x) const { return conelab::project(set, x); }

double FaceHandle::distance(const Vec& x) const { return project(x).distance; }

namespace {

std::string join(const std::vector<Index>& idx) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
  os << "]";
  return os.str();
}

FaceHandle with_span(ConeSpec parent, ConeSpec set, const Mat& span, FaceKind kind, std::string label) {
  FaceHandle f;
  f.parent = std::move(parent);
  f.set = std::move(set);
  f.span_basis = span.cols() > 0 ? orthonormalize(span) : Mat(f.parent.dim(), 0);
  f.affine_hull = AffineSubspace(Vec::Zero(f.parent.dim()), f.span_basis);
  f.kind = kind;
  f.label = std::move(label);
  return f;
}

Mat columns_of(const std::vector<Vec>& v, Index d) {
  Mat m(d, static_cast<Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) m.col(static_cast<Index>(j)) = v[j];
  return m;
}

// Sum of projected Gaussians: lies in the relative interior of a polyhedral
// set with probability one once enough samples land in its relint.
// Sampling only needs approximate projections; an exhausted Dykstra budget
// still leaves a usable iterate.
Vec project_for_sampling(const ConeSpec& set, const Vec& x) {
  try {
    return project(set, x).point;
  } catch (const NonConvergenceError& e) {
    return e.best_iterate();
  }
}

Vec relint_by_sampling(const ConeSpec& set, Index d, int count, std::uint64_t seed) {
  Rng rng(seed);
  Vec acc = Vec::Zero(d);
  for (int i = 0; i < count; ++i) {
    const Vec p = project_for_sampling(set, gaussian_vector(d, rng));
    const double n = p.norm();
    if (n > 0.0) acc += p / n;
  }
  return acc;
}

Mat span_by_sampling(const ConeSpec& set, Index d, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> pts;
  for (int i = 0; i < count; ++i) {
    const Vec p = project_for_sampling(set, gaussian_vector(d, rng));
    if (p.norm() > 1e-9) pts.push_back(p / p.norm());
  }
  if (pts.empty()) return Mat(d, 0);
  const Mat m = columns_of(pts, d);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  Index r = 0;
  // Projected samples carry solver noise; a looser cutoff than kRankCutoff.
  while (r < s.size() && s(r) > 1e-7 * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

// Subspace spanned by a basis given as the intersection of two spans.
Mat span_intersection(const Mat& a, const Mat& b, Index d) {
  Mat comp(d, 0);
  const Mat ca = orthogonal_complement(a.cols() ? a : Mat(d, 0), d);
  const Mat cb = orthogonal_complement(b.cols() ? b : Mat(d, 0), d);
  Mat both(d, ca.cols() + cb.cols());
  both << ca, cb;
  if (both.cols() == 0) return Mat::Identity(d, d);
  return orthogonal_complement(orthonormalize(both), d);
}

Mat block_diag(const std::vector<Mat>& blocks, const std::vector<Index>& dims) {
  Index rows = 0, cols = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    rows += dims[i];
    cols += blocks[i].cols();
  }
  Mat m = Mat::Zero(rows, cols);
  Index r = 0, c = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].cols() > 0) m.block(r, c, dims[i], blocks[i].cols()) = blocks[i];
    r += dims[i];
    c += blocks[i].cols();
  }
  return m;
}

// Isometry svec(W) -> svec(U W U^T) for U with orthonormal columns.
Mat congruence_map(const Mat& u) {
  const Index n = u.rows(), r = u.cols();
  Mat m(svec_dim(n), svec_dim(r));
  for (Index k = 0; k < svec_dim(r); ++k) m.col(k) = svec(u * smat(Vec::Unit(svec_dim(r), k)) * u.transpose());
  return m;
}

const Mat& polyhedral_rows(const ConeSpec& k) {
  const auto* p = k.get_if<spec::Polyhedral>();
  if (!p) throw Error(ErrorCode::kInvalidArgument, "active_rows_face: parent is not polyhedral");
  return p->rows;
}

bool is_full_atom(const ConeSpec& k) {
  return k.get_if<spec::SecondOrder>() || k.get_if<spec::Psd>() || k.get_if<spec::NonnegativeOrthant>() ||
         k.get_if<spec::Halfspace>();
}

}  // namespace

FaceHandle whole_face(const ConeSpec& k) {
  const Index d = k.dim();
  if (k.get_if<spec::Polyhedral>()) {
    FaceHandle f = active_rows_face(k, {});
    f.kind = FaceKind::kWhole;
    return f;
  }
  if (const auto* g = k.get_if<spec::FinitelyGenerated>()) {
    std::vector<Index> all(static_cast<std::size_t>(g->generators.cols()));
    std::iota(all.begin(), all.end(), Index{0});
    FaceHandle f = generator_subset_face(k, all);
    f.kind = FaceKind::kWhole;
    return f;
  }
  if (const auto* p = k.get_if<spec::Product>()) {
    std::vector<FaceHandle> fs;
    for (const auto& factor : p->factors) fs.push_back(whole_face(factor));
    FaceHandle f = product_face(k, std::move(fs));
    f.kind = FaceKind::kWhole;
    f.label = "whole";
    return f;
  }
  Mat span;
  if (is_full_atom(k)) span = Mat::Identity(d, d);
  else if (const auto* s = k.get_if<spec::LinearSubspace>()) span = s->basis;
  else if (const auto* a = k.get_if<spec::Affine>()) span = a->subspace.basis();
  else span = span_by_sampling(k, d, 8 * static_cast<int>(d) + 16, 0x51ce);
  FaceHandle f = with_span(k, k, span, FaceKind::kWhole, "whole");
  if (!k.is_cone()) {
    // Affine hull of a compact set from a sample around its projection of 0.
    const Vec base = project(k, Vec::Zero(d)).point;
    Rng rng(0x51cf);
    std::vector<Vec> dirs;
    for (int i = 0; i < 8 * d + 16; ++i) dirs.push_back(project(k, base + gaussian_vector(d, rng)).point - base);
    f.span_basis = orthonormalize(columns_of(dirs, d));
    f.affine_hull = AffineSubspace(base, f.span_basis);
  }
  if (const auto* o = k.get_if<spec::NonnegativeOrthant>()) {
    f.indices.resize(static_cast<std::size_t>(o->dim));
    std::iota(f.indices.begin(), f.indices.end(), Index{0});
  }
  if (const auto* p = k.get_if<spec::Psd>()) f.range = Mat::Identity(p->n, p->n);
  return f;
}

FaceHandle zero_face(const ConeSpec& k) {
  if (!k.is_cone()) throw Error(ErrorCode::kInvalidArgument, "zero_face: parent is not a cone");
  const Index d = k.dim();
  FaceHandle f = with_span(k, ConeSpec::subspace(Mat(d, 0), d), Mat(d, 0), FaceKind::kZero, "zero");
  if (const auto* p = k.get_if<spec::Psd>()) f.range = Mat(p->n, 0);
  return f;
}

FaceHandle coordinate_face(const ConeSpec& orthant, std::vector<Index> support) {
  const auto* o = orthant.get_if<spec::NonnegativeOrthant>();
  if (!o) throw Error(ErrorCode::kInvalidArgument, "coordinate_face: parent is not an orthant");
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  for (Index i : support)
    if (i < 0 || i >= o->dim) throw Error(ErrorCode::kInvalidArgument, "coordinate_face: index out of range");
  const Index d = o->dim;
  if (support.empty()) return zero_face(orthant);
  Mat e = Mat::Zero(d, static_cast<Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) e(support[j], static_cast<Index>(j)) = 1.0;
  ConeSpec set = static_cast<Index>(support.size()) == d
                     ? orthant
                     : ConeSpec::image(e, ConeSpec::orthant(static_cast<Index>(support.size())));
  FaceHandle f = with_span(orthant, set, e, FaceKind::kCoordinate, "orthant:support=" + join(support));
  f.indices = std::move(support);
  return f;
}

FaceHandle psd_range_face(const ConeSpec& psd, const Mat& range_columns) {
  const auto* p = psd.get_if<spec::Psd>();
  if (!p) throw Error(ErrorCode::kInvalidArgument, "psd_range_face: parent is not psd");
  require_dim(p->n, range_columns.rows(), "psd_range_face");
  const Mat u = orthonormalize(range_columns);
  if (u.cols() == 0) return zero_face(psd);
  const Mat m = congruence_map(u);
  ConeSpec set = u.cols() == p->n ? psd : ConeSpec::image(m, ConeSpec::psd(u.cols()));
  std::ostringstream label;
  label << "psd:range_rank=" << u.cols();
  FaceHandle f = with_span(psd, set, m, FaceKind::kPsdRange, label.str());
  f.range = u;
  return f;
}

FaceHandle ray_face(const ConeSpec& k, const Vec& generator) {
  require_dim(k.dim(), generator.size(), "ray_face");
  const double n = generator.norm();
  if (n == 0.0) return zero_face(k);
  if (!contains(k, generator / n, Tolerance{1e-9, 1e-9}))
    throw Error(ErrorCode::kInvalidArgument, "ray_face: generator is not in the cone");
  FaceHandle f = with_span(k, ConeSpec::generated(Mat(generator / n)), generator / n, FaceKind::kRay, "ray");
  f.generator = generator / n;
  return f;
}

FaceHandle active_rows_face(const ConeSpec& polyhedral, std::vector<Index> rows) {
  const Mat& a = polyhedral_rows(polyhedral);
  const Index d = a.cols();
  for (Index i : rows)
    if (i < 0 || i >= a.rows()) throw Error(ErrorCode::kInvalidArgument, "active_rows_face: row out of range");
  auto build = [&](const std::vector<Index>& idx) {
    Mat stacked(a.rows() + static_cast<Index>(idx.size()), d);
    stacked.topRows(a.rows()) = a;
    for (std::size_t j = 0; j < idx.size(); ++j) stacked.row(a.rows() + static_cast<Index>(j)) = -a.row(idx[j]);
    return idx.empty() ? polyhedral : ConeSpec::polyhedral(stacked);
  };
  // Close the row set under implicit equalities so the span is exact.
  ConeSpec set = build(rows);
  const Vec c = relint_by_sampling(set, d, 16 * static_cast<int>(d) + 32, 0xface);
  std::vector<Index> closed;
  for (Index i = 0; i < a.rows(); ++i) {
    const bool listed = std::find(rows.begin(), rows.end(), i) != rows.end();
    if (listed || std::abs(a.row(i).dot(c)) <= 1e-9 * a.row(i).norm() * std::max(1.0, c.norm()))
      closed.push_back(i);
  }
  if (closed.size() != rows.size()) set = build(closed);
  Mat eq(d, static_cast<Index>(closed.size()));
  for (std::size_t j = 0; j < closed.size(); ++j) eq.col(static_cast<Index>(j)) = a.row(closed[j]).transpose();
  const Mat span = orthogonal_complement(closed.empty() ? Mat(d, 0) : orthonormalize(eq), d);
  FaceHandle f = with_span(polyhedral, set, span, FaceKind::kActiveRows, "polyhedral:active=" + join(closed));
  f.indices = std::move(closed);
  return f;
}

FaceHandle generator_subset_face(const ConeSpec& generated, std::vector<Index> columns) {
  const auto* g = generated.get_if<spec::FinitelyGenerated>();
  if (!g) throw Error(ErrorCode::kInvalidArgument, "generator_subset_face: parent is not finitely generated");
  const Index d = g->generators.rows();
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  Mat sub(d, static_cast<Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] < 0 || columns[j] >= g->generators.cols())
      throw Error(ErrorCode::kInvalidArgument, "generator_subset_face: column out of range");
    sub.col(static_cast<Index>(j)) = g->generators.col(columns[j]);
  }
  ConeSpec set = ConeSpec::generated(sub, d);
  FaceHandle f = with_span(generated, set, sub, FaceKind::kGeneratorSubset, "generated:columns=" + join(columns));
  f.indices = std::move(columns);
  return f;
}

FaceHandle product_face(const ConeSpec& product, std::vector<FaceHandle> factors) {
  const auto* p = product.get_if<spec::Product>();
  if (!p) throw Error(ErrorCode::kInvalidArgument, "product_face: parent is not a product");
  if (factors.size() != p->factors.size())
    throw Error(ErrorCode::kInvalidArgument, "product_face: factor count mismatch");
  std::vector<ConeSpec> sets;
  std::vector<Mat> spans;
  std::vector<Index> dims;
  std::string label = "product(";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    require_dim(p->factors[i].dim(), factors[i].ambient_dim(), "product_face");
    sets.push_back(factors[i].set);
    spans.push_back(factors[i].span_basis);
    dims.push_back(factors[i].ambient_dim());
    label += (i ? "," : "") + factors[i].label;
  }
  FaceHandle f = with_span(product, ConeSpec::product(std::move(sets)), block_diag(spans, dims),
                           FaceKind::kProduct, label + ")");
  f.factors = std::move(factors);
  return f;
}

FaceHandle generic_face(const ConeSpec& parent, ConeSpec set, const Mat& span_columns, std::string label) {
  require_dim(parent.dim(), set.dim(), "generic_face");
  return with_span(parent, std::move(set), span_columns, FaceKind::kGeneric, std::move(label));
}

FaceHandle minimal_face(const ConeSpec& k, const Vec& x, const Tolerance& tol) {
  require_dim(k.dim(), x.size(), "minimal_face");
  if (!contains(k, x, tol)) throw Error(ErrorCode::kInvalidArgument, "minimal_face: point is not in the cone");
  const double bound = tol.bound(x.norm());
  const Index d = k.dim();
  if (k.get_if<spec::NonnegativeOrthant>()) {
    std::vector<Index> s;
    for (Index i = 0; i < d; ++i)
      if (x(i) > bound) s.push_back(i);
    if (static_cast<Index>(s.size()) == d) return whole_face(k);
    return coordinate_face(k, s);
  }
  if (const auto* p = k.get_if<spec::Psd>()) {
    Eigen::SelfAdjointEigenSolver<Mat> es(smat(x));
    const Vec& l = es.eigenvalues();
    std::vector<Vec> cols;
    for (Index i = 0; i < l.size(); ++i)
      if (l(i) > bound) cols.push_back(es.eigenvectors().col(i));
    if (static_cast<Index>(cols.size()) == p->n) return whole_face(k);
    return psd_range_face(k, columns_of(cols, p->n));
  }
  if (k.get_if<spec::SecondOrder>()) {
    if (x.norm() <= bound) return zero_face(k);
    if (x(d - 1) - x.head(d - 1).norm() > bound) return whole_face(k);
    return ray_face(k, x);
  }
  if (const auto* h = k.get_if<spec::Halfspace>()) {
    if (h->offset != 0.0) throw Error(ErrorCode::kUnsupported, "minimal_face: halfspace with offset");
    if (h->normal.dot(x) < -bound * h->normal.norm()) return whole_face(k);
    const Mat span = orthogonal_complement(h->normal, d);
    FaceHandle f = with_span(k, ConeSpec::subspace(span, d), span, FaceKind::kActiveRows, "halfspace:boundary");
    f.indices = {0};
    return f;
  }
  if (k.get_if<spec::LinearSubspace>()) return whole_face(k);
  if (const auto* p = k.get_if<spec::Polyhedral>()) {
    std::vector<Index> active;
    for (Index i = 0; i < p->rows.rows(); ++i)
      if (p->rows.row(i).dot(x) >= -bound * p->rows.row(i).norm()) active.push_back(i);
    return active_rows_face(k, active);
  }
  if (const auto* p = k.get_if<spec::Product>()) {
    std::vector<FaceHandle> fs;
    Index off = 0;
    for (const auto& factor : p->factors) {
      fs.push_back(minimal_face(factor, x.segment(off, factor.dim()), tol));
      off += factor.dim();
    }
    return product_face(k, std::move(fs));
  }
  if (const auto* in = k.get_if<spec::Intersection>()) {
    std::vector<FaceHandle> fs;
    std::vector<ConeSpec> sets;
    Mat span = Mat::Identity(d, d);
    std::string label = "intersection(";
    for (const auto& part : in->parts) {
      fs.push_back(minimal_face(part, x, tol));
      sets.push_back(fs.back().set);
      span = span_intersection(span, fs.back().span_basis, d);
      label += (fs.size() > 1 ? "," : "") + fs.back().label;
    }
    FaceHandle f = with_span(k, ConeSpec::intersection(std::move(sets)), span, FaceKind::kIntersection, label + ")");
    f.factors = std::move(fs);
    return f;
  }
  throw Error(ErrorCode::kUnsupported, "minimal_face: unsupported variant " + k.kind());
}

FaceHandle conjugate_face(const ConeSpec& k, const FaceHandle& f) {
  require_dim(k.dim(), f.ambient_dim(), "conjugate_face");
  const ConeSpec dual = dual_cone(k);
  const Index d = k.dim();
  const bool full = f.span_basis.cols() == d;
  switch (f.kind) {
    case FaceKind::kZero:
      return whole_face(dual);
    case FaceKind::kCoordinate:
    case FaceKind::kWhole:
      if (k.get_if<spec::NonnegativeOrthant>()) {
        std::vector<Index> comp;
        for (Index i = 0; i < d; ++i)
          if (std::find(f.indices.begin(), f.indices.end(), i) == f.indices.end()) comp.push_back(i);
        return coordinate_face(dual, comp);
      }
      if (full && is_full_atom(k) && !k.get_if<spec::Halfspace>()) return zero_face(dual);
      break;
    case FaceKind::kPsdRange:
      if (k.get_if<spec::Psd>()) return psd_range_face(dual, orthogonal_complement(f.range, f.range.rows()));
      break;
    case FaceKind::kRay:
      if (k.get_if<spec::SecondOrder>()) {
        Vec g = -f.generator;
        g(d - 1) = f.generator(d - 1);
        return ray_face(dual, g);
      }
      break;
    case FaceKind::kActiveRows:
      if (k.get_if<spec::Polyhedral>() || k.get_if<spec::Halfspace>())
        return generator_subset_face(dual, f.indices);
      break;
    case FaceKind::kGeneratorSubset:
      if (k.get_if<spec::FinitelyGenerated>()) return active_rows_face(dual, f.indices);
      break;
    case FaceKind::kProduct:
      if (const auto* p = k.get_if<spec::Product>()) {
        std::vector<FaceHandle> fs;
        for (std::size_t i = 0; i < p->factors.size(); ++i) fs.push_back(conjugate_face(p->factors[i], f.factors[i]));
        return product_face(dual, std::move(fs));
      }
      break;
    default:
      break;
  }
  if (full) return zero_face(dual);
  // K* ∩ F^⊥ by Dykstra; its span from projected samples.
  const Mat perp = orthogonal_complement(f.span_basis, d);
  ConeSpec set = ConeSpec::intersection({dual, ConeSpec::subspace(perp, d)});
  const Mat span = span_by_sampling(set, d, 8 * static_cast<int>(d) + 16, 0xc0f);
  if (span.cols() == 0) return zero_face(dual);
  return generic_face(dual, set, span, "conjugate(" + f.label + ")");
}

FaceHandle double_conjugate(const ConeSpec& k, const FaceHandle& f) {
  const FaceHandle fd = conjugate_face(k, f);
  FaceHandle out = conjugate_face(fd.parent, fd);
  out.parent = k;
  return out;
}

namespace {

// A point in the relative interior of a face of a cone, unit norm (0 for {0}).
Vec relint_point(const FaceHandle& f) {
  const Index d = f.ambient_dim();
  Vec v = Vec::Zero(d);
  switch (f.kind) {
    case FaceKind::kZero:
      return v;
    case FaceKind::kCoordinate:
      for (Index i : f.indices) v(i) = 1.0;
      break;
    case FaceKind::kPsdRange:
      v = svec(f.range * f.range.transpose());
      break;
    case FaceKind::kRay:
      v = f.generator;
      break;
    case FaceKind::kGeneratorSubset:
      if (const auto* g = f.parent.get_if<spec::FinitelyGenerated>())
        for (Index j : f.indices) v += g->generators.col(j).normalized();
      break;
    case FaceKind::kProduct: {
      Index off = 0;
      for (const auto& sub : f.factors) {
        v.segment(off, sub.ambient_dim()) = relint_point(sub);
        off += sub.ambient_dim();
      }
      break;
    }
    case FaceKind::kWhole:
      if (f.parent.get_if<spec::NonnegativeOrthant>()) v.setOnes();
      else if (const auto* p = f.parent.get_if<spec::Psd>()) v = svec(Mat::Identity(p->n, p->n));
      else if (f.parent.get_if<spec::SecondOrder>()) v(d - 1) = 1.0;
      else v = relint_by_sampling(f.set, d, 16 * static_cast<int>(d) + 32, 0x1e7);
      break;
    default:
      v = relint_by_sampling(f.set, d, 16 * static_cast<int>(d) + 32, 0x1e7);
      break;
  }
  const double n = v.norm();
  return n > 0.0 ? Vec(v / n) : v;
}

// A face sample, or nullopt when an iterative projection ran out of budget.
// Used where an inexact point could produce a false certificate.
std::optional<Vec> try_sample_face_element(const FaceHandle& f, Rng& rng) {
  try {
    return sample_face_element(f, rng);
  } catch (const NonConvergenceError&) {
    return std::nullopt;
  }
}

// Unit-scale samples of the parent used to probe a supporting functional.
std::vector<Vec> parent_samples(const ConeSpec& k, int count, Rng& rng) {
  std::vector<Vec> out;
  const Index d = k.dim();
  if (const auto* h = k.get_if<spec::ConvexHull>()) {
    const HullSample s = h->sampler.sample();
    for (Index j = 0; j < s.points.cols(); ++j) out.push_back(s.points.col(j));
    return out;
  }
  if (const auto* n = k.get_if<spec::Named>()) {
    if (auto g = n->oracle->extreme_grid(count)) {
      for (Index j = 0; j < g->cols(); ++j) out.push_back(g->col(j));
    }
  }
  Vec center = Vec::Zero(d);
  if (!k.is_cone()) center = project(k, center).point;
  for (int i = 0; i < count; ++i) {
    Vec p = project(k, center + 2.0 * gaussian_vector(d, rng)).point;
    if (k.is_cone()) {
      const double n = p.norm();
      if (n < 1e-12) continue;
      p /= n;
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

ExposureResult is_exposed(const ConeSpec& k, const FaceHandle& f, const ExposureOptions& opt) {
  require_dim(k.dim(), f.ambient_dim(), "is_exposed");
  ExposureResult r;
  const Index d = k.dim();
  r.witness = Vec::Zero(d);
  if (f.kind == FaceKind::kWhole) {
    r.verdict = ExposureResult::Verdict::kExposed;
    return r;
  }
  Rng rng(opt.seed);
  std::optional<FaceHandle> conj;
  if (k.is_cone()) {
    try {
      conj = conjugate_face(k, f);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDualUnavailable) throw;
    }
  }
  // Candidate functional: relint of F^Δ for cones, else the face's hint.
  if (f.exposing_hint) {
    r.witness = -*f.exposing_hint;
  } else if (conj) {
    r.witness = relint_point(*conj);
  } else {
    return r;
  }
  // Offset from a point of F; zero for cones.
  const Vec f0 = f.project(k.is_cone() ? Vec(Vec::Zero(d)) : f.affine_hull.basepoint()).point;
  r.offset = k.is_cone() ? 0.0 : r.witness.dot(f0);

  bool on_face_ok = true;
  for (int i = 0; i < 50 && on_face_ok; ++i) {
    const auto sample = try_sample_face_element(f, rng);
    if (!sample) continue;
    const Vec& y = *sample;
    const double scale = k.is_cone() ? std::max(1.0, y.norm()) : 1.0;
    on_face_ok = std::abs(r.witness.dot(y) - r.offset) <= 1e-9 * scale;
  }
  r.margin = std::numeric_limits<double>::infinity();
  const std::vector<Vec> xs = parent_samples(k, opt.samples, rng);
  const double radius = k.is_cone() ? 1.0 : std::max(1.0, f0.norm());
  for (const Vec& x : xs) {
    const double dist = f.distance(x);
    if (dist < opt.far_fraction * radius) continue;
    ++r.samples_checked;
    r.margin = std::min(r.margin, (r.witness.dot(x) - r.offset) / radius);
  }
  if (r.witness.norm() > 0.0 && on_face_ok && r.samples_checked > 0 && r.margin > opt.margin) {
    r.verdict = ExposureResult::Verdict::kExposed;
    return r;
  }
  if (!conj) return r;
  // A point of F^ΔΔ away from F certifies that F is not exposed.
  FaceHandle dd;
  try {
    dd = double_conjugate(k, f);
  } catch (const Error&) {
    return r;
  }
  for (int i = 0; i < 200; ++i) {
    const auto sample = try_sample_face_element(dd, rng);
    if (!sample) continue;
    Vec y = *sample;
    const double n = y.norm();
    if (n < 1e-12) continue;
    y /= n;
    const double dist = f.distance(y);
    if (dist > 1e-6 && dist > r.certificate_distance) {
      r.certificate = y;
      r.certificate_distance = dist;
    }
  }
  if (r.certificate) r.verdict = ExposureResult::Verdict::kNotExposed;
  return r;
}

DualSumResult dual_sum_membership(const ConeSpec& k, const FaceHandle& f, const Vec& s, double tol,
                                  int max_iter) {
  require_dim(k.dim(), s.size(), "dual_sum_membership");
  DualSumResult r;
  if (f.dual_sum) {
    r.closed_form = true;
    if (auto uv = f.dual_sum(s)) {
      r.in_sum = true;
      r.u = uv->first;
      r.v = uv->second;
      r.residual = (s - r.u - r.v).norm();
    }
    return r;
  }
  const ConeSpec dual = dual_cone(k);
  const Mat p = f.span_projector();
  const double scale = std::max(1.0, s.norm());
  // u ∈ K* with P u = P s; alternating projections between K* and s + F^⊥.
  Vec u = s;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    u = project(dual, u - p * (u - s)).point;
    const double res = (p * (u - s)).norm();
    r.iterations = it + 1;
    if (res <= tol * scale) {
      r.in_sum = true;
      break;
    }
    if (it % 200 == 199) {
      if (res > prev * (1.0 - 1e-3)) break;  // stalled: s is outside or on the unclosed boundary
      prev = res;
    }
  }
  r.u = u;
  r.v = s - u - p * (s - u);
  r.residual = (s - r.u - r.v).norm();
  return r;
}

Vec sample_face_element(const FaceHandle& f, Rng& rng) {
  const Index d = f.ambient_dim();
  return f.project(f.affine_hull.basepoint() + gaussian_vector(d, rng)).point;
}

int face_property_violations(const ConeSpec& k, const FaceHandle& f, int pairs, Rng& rng, double tol) {
  const Index d = k.dim();
  int bad = 0;
  for (int i = 0; i < pairs; ++i) {
    const Vec m = sample_face_element(f, rng);
    Vec dir = gaussian_vector(d, rng);
    // Alternate between directions inside span F and arbitrary directions.
    if (i % 2 == 0 && f.span_basis.cols() > 0) dir = f.span_basis * (f.span_basis.transpose() * dir);
    if (dir.norm() == 0.0) continue;
    dir *= std::max(1.0, m.norm()) / dir.norm();
    auto both_in = [&](double lam) {
      return contains(k, m + lam * dir, Tolerance{1e-12, 1e-10}) && contains(k, m - lam * dir, Tolerance{1e-12, 1e-10});
    };
    double lo = 0.0, hi = 1.0;
    if (both_in(hi)) lo = hi;
    for (int b = 0; b < 60 && lo < hi; ++b) {
      const double mid = 0.5 * (lo + hi);
      if (both_in(mid)) lo = mid; else hi = mid;
    }
    if (lo == 0.0) continue;
    const double scale = std::max(1.0, m.norm());
    if (f.distance(m + lo * dir) > tol * scale || f.distance(m - lo * dir) > tol * scale) ++bad;
  }
  return bad;
}

}  // namespace conelab
