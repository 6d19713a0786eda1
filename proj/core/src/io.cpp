#include "conelab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "conelab/gallery.hpp"

#ifndef CONELAB_VERSION_STRING
#define CONELAB_VERSION_STRING "0.0.0"
#endif

namespace conelab::io {

const char* version() { return CONELAB_VERSION_STRING; }

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ParseError("cone spec at '" + (path.empty() ? std::string("/") : path) + "': " + what);
}

const Json& field(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) schema_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(path, std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "expected a finite number");
  return v;
}

Index positive_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) schema_error(path, "expected a positive integer");
  return static_cast<Index>(j.get<long long>());
}

Vec vector(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a nonempty array of numbers");
  Vec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number(j[i], path + "/" + std::to_string(i));
  return v;
}

// Row-major nested arrays.
Mat matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a nonempty array of rows");
  const Vec first = vector(j[0], path + "/0");
  Mat m(static_cast<Index>(j.size()), first.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vec row = vector(j[i], path + "/" + std::to_string(i));
    if (row.size() != m.cols()) schema_error(path + "/" + std::to_string(i), "rows differ in length");
    m.row(static_cast<Index>(i)) = row.transpose();
  }
  return m;
}

// A point given either as a flat vector or as a full symmetric matrix.
Vec point_or_symmetric(const Json& j, const std::string& path) {
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    const Mat m = matrix(j, path);
    if (m.rows() != m.cols()) schema_error(path, "symmetric matrix must be square");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) schema_error(path, "matrix is not symmetric to 1e-12");
    return svec(m);
  }
  return vector(j, path);
}

// List of points (flat or symmetric-matrix form) as the columns of a matrix.
Mat columns(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a nonempty array of points");
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(point_or_symmetric(j[i], path + "/" + std::to_string(i)));
  Mat m(pts[0].size(), static_cast<Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != m.rows()) schema_error(path + "/" + std::to_string(i), "points differ in dimension");
    m.col(static_cast<Index>(i)) = pts[i];
  }
  return m;
}

Index optional_dim(const Json& j, const std::string& path) {
  auto it = j.find("dim");
  return it == j.end() ? -1 : positive_int(*it, path + "/dim");
}

ConeSpec parse_node(const Json& j, const std::string& path);

std::vector<ConeSpec> parse_list(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a nonempty array of cone specs");
  std::vector<ConeSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_node(j[i], path + "/" + std::to_string(i)));
  return out;
}

HullSampler fixed_points(const Json& j, const std::string& path) {
  HullSampler s;
  s.points = columns(j, path);
  return s;
}

ConeSpec build(const Json& j, const std::string& path) {
  const Json& type = field(j, path, "type");
  if (!type.is_string()) schema_error(path + "/type", "expected a string");
  const std::string t = type.get<std::string>();
  if (t == "orthant") return ConeSpec::orthant(positive_int(field(j, path, "dim"), path + "/dim"));
  if (t == "second_order") return ConeSpec::second_order(positive_int(field(j, path, "dim"), path + "/dim"));
  if (t == "psd") return ConeSpec::psd(positive_int(field(j, path, "n"), path + "/n"));
  if (t == "doubly_nonnegative") {
    const Index n = positive_int(field(j, path, "n"), path + "/n");
    return ConeSpec::intersection({ConeSpec::psd(n), ConeSpec::orthant(svec_dim(n))});
  }
  if (t == "halfspace") {
    double offset = 0.0;
    if (auto it = j.find("offset"); it != j.end()) offset = number(*it, path + "/offset");
    return ConeSpec::halfspace(point_or_symmetric(field(j, path, "normal"), path + "/normal"), offset);
  }
  if (t == "subspace") {
    const Mat v = columns(field(j, path, "vectors"), path + "/vectors");
    return ConeSpec::subspace(v, v.rows());
  }
  if (t == "polyhedral") return ConeSpec::polyhedral(matrix(field(j, path, "rows"), path + "/rows"));
  if (t == "generated")
    return ConeSpec::generated(columns(field(j, path, "generators"), path + "/generators"), optional_dim(j, path));
  if (t == "product") return ConeSpec::product(parse_list(field(j, path, "factors"), path + "/factors"));
  if (t == "intersection") return ConeSpec::intersection(parse_list(field(j, path, "parts"), path + "/parts"));
  if (t == "image")
    return ConeSpec::image(matrix(field(j, path, "map"), path + "/map"),
                           parse_node(field(j, path, "inner"), path + "/inner"));
  if (t == "convex_hull") return ConeSpec::convex_hull(fixed_points(field(j, path, "points"), path + "/points"));
  if (t == "conic_hull") {
    SliceSpec s;
    s.e = vector(field(j, path, "e"), path + "/e");
    if (auto it = j.find("level"); it != j.end()) s.level = number(*it, path + "/level");
    s.generator = fixed_points(field(j, path, "points"), path + "/points");
    const Mat& p = s.generator.points;
    s.hull_dim = numerical_rank(p.colwise() - p.rowwise().mean());
    return ConeSpec::conic_hull(std::move(s));
  }
  if (t == "affine") {
    const Vec base = point_or_symmetric(field(j, path, "basepoint"), path + "/basepoint");
    Mat basis(base.size(), 0);
    if (auto it = j.find("vectors"); it != j.end()) basis = orthonormalize(columns(*it, path + "/vectors"));
    return ConeSpec::affine(AffineSubspace(base, basis));
  }
  if (t == "gallery") {
    const Json& name = field(j, path, "name");
    if (!name.is_string()) schema_error(path + "/name", "expected a string");
    int density = gallery::kDefaultDensity;
    if (auto it = j.find("density"); it != j.end()) density = static_cast<int>(positive_int(*it, path + "/density"));
    return gallery::named_set(name.get<std::string>(), density);
  }
  schema_error(path + "/type", "unknown type '" + t + "'");
}

ConeSpec parse_node(const Json& j, const std::string& path) {
  try {
    return build(j, path);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    // Constructor validation (dimensions, symmetry, ranks) reported at the node.
    schema_error(path, e.what());
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_double(const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError("expected a finite number, got '" + raw + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& part : split(s, ',')) out.push_back(parse_double(part));
  if (out.empty()) throw ParseError("expected a comma-separated list of numbers");
  return out;
}

std::vector<Index> parse_indices(const std::string& s) {
  std::vector<Index> out;
  if (trim(s).empty()) return out;
  for (const std::string& part : split(s, ',')) {
    const std::string t = trim(part);
    long long v = -1;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || v < 0)
      throw ParseError("expected a nonnegative index, got '" + part + "'");
    out.push_back(static_cast<Index>(v));
  }
  return out;
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  out += format_double(v);
}

void write(std::string& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat && indent >= 0 ? ", " : ",";
        if (!flat) newline(depth + 1);
        write(out, j[i], indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

Json rows_json(const std::vector<Index>& idx) {
  Json a = Json::array();
  for (Index i : idx) a.push_back(i);
  return a;
}

}  // namespace

ConeSpec parse_cone_spec(const Json& j) { return parse_node(j, ""); }

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg, line, column);
  }
}

ConeSpec load_cone_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read spec file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cone_spec(parse_json_text(buf.str(), path.string()));
}

std::string canonical_text(const Json& j) { return dump(j, -1); }

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  const auto [ptr, ec] = std::to_chars(buf, buf + 16, h, 16);
  std::string s(buf, ptr);
  return std::string(16 - s.size(), '0') + s;
}

Vec parse_point(const std::string& raw) {
  const std::string text = trim(raw);
  if (!text.empty() && text.front() == '[') {
    const Mat m = parse_matrix(text);
    if (m.rows() != m.cols()) throw ParseError("matrix point must be square");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ParseError("matrix point is not symmetric to 1e-12");
    return svec(m);
  }
  const std::vector<double> v = parse_list(text);
  return Eigen::Map<const Vec>(v.data(), static_cast<Index>(v.size()));
}

Mat parse_matrix(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    throw ParseError("matrix must be written as [a,b;c,d], got '" + raw + "'");
  const std::vector<std::string> rows = split(text.substr(1, text.size() - 2), ';');
  Mat m;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::vector<double> r = parse_list(rows[i]);
    if (i == 0) m.resize(static_cast<Index>(rows.size()), static_cast<Index>(r.size()));
    if (static_cast<Index>(r.size()) != m.cols()) throw ParseError("matrix rows differ in length in '" + raw + "'");
    for (std::size_t c = 0; c < r.size(); ++c) m(static_cast<Index>(i), static_cast<Index>(c)) = r[c];
  }
  return m;
}

BoundedRegion parse_region(const std::string& text, Index dim) {
  const std::vector<double> v = parse_list(text);
  if (static_cast<Index>(v.size()) != dim + 1)
    throw ParseError("region needs " + std::to_string(dim) + " center coordinates and a radius, got " +
                     std::to_string(v.size()) + " numbers");
  if (!(v.back() > 0.0)) throw ParseError("region radius must be positive");
  return BoundedRegion::ball(Eigen::Map<const Vec>(v.data(), dim), v.back());
}

FaceHandle resolve_face(const ConeSpec& k, const std::string& descriptor, int density) {
  const std::string d = trim(descriptor);
  const auto colon = d.find(':');
  const std::string head = d.substr(0, colon);
  const std::string tail = colon == std::string::npos ? std::string() : d.substr(colon + 1);
  try {
    if (d == "whole") return whole_face(k);
    if (d == "zero") return zero_face(k);
    if (colon == std::string::npos) throw ParseError("unknown face descriptor '" + d + "'");
    if (head == "minimal") return minimal_face(k, parse_point(tail));
    if (head == "ray") return ray_face(k, parse_point(tail));
    if (head == "rows") return active_rows_face(k, parse_indices(tail));
    if (head == "generators") {
      // Conic hulls of fixed slice points take the same descriptor; the face
      // property is not checked (face --op exposed does that).
      if (const auto* ch = k.get_if<spec::ConicHull>(); ch && ch->slice.generator.curves.empty()) {
        const Mat& pts = ch->slice.generator.points;
        std::vector<Index> idx = parse_indices(tail);
        Mat sub(pts.rows(), static_cast<Index>(idx.size()));
        for (std::size_t j = 0; j < idx.size(); ++j) {
          if (idx[j] >= pts.cols()) throw ParseError("face '" + d + "': point index out of range");
          sub.col(static_cast<Index>(j)) = pts.col(idx[j]);
        }
        return generic_face(k, ConeSpec::generated(sub, pts.rows()), sub, "conic_hull:points=" + tail);
      }
      return generator_subset_face(k, parse_indices(tail));
    }
    if (head == "gallery") return gallery::named_face(tail, density);
    if (head == "orthant" && tail.rfind("support=", 0) == 0) return coordinate_face(k, parse_indices(tail.substr(8)));
    if (head == "psd" && tail.rfind("range=", 0) == 0) return psd_range_face(k, parse_matrix(tail.substr(6)));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("face '" + d + "': " + e.what());
  }
  throw ParseError("unknown face descriptor '" + d +
                   "' (expected whole, zero, minimal:<point>, ray:<point>, orthant:support=<i,...>, "
                   "psd:range=<matrix>, rows:<i,...>, generators:<i,...> or gallery:<name>)");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string dump(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  return out;
}

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const Mat& m) {
  Json a = Json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vec(m.row(i).transpose())));
  return a;
}

Json to_json(const Tolerance& t) { return {{"abs", t.abs}, {"rel", t.rel}}; }

Json to_json(const ProjectionResult& r) {
  return {{"point", to_json(r.point)},
          {"distance", r.distance},
          {"method", to_string(r.method)},
          {"iterations", r.iterations},
          {"certificate_gap", r.certificate_gap}};
}

Json to_json(const MoreauSplit& m) {
  return {{"original", to_json(m.original)},
          {"cone_part", to_json(m.cone_part)},
          {"polar_part", to_json(m.polar_part)},
          {"residual", m.residual},
          {"orthogonality", m.orthogonality}};
}

Json face_summary(const FaceHandle& f) {
  Json j = {{"kind", to_string(f.kind)},
            {"label", f.label},
            {"dim", f.dim()},
            {"ambient_dim", f.ambient_dim()},
            {"span_basis", to_json(f.span_basis)}};
  if (!f.indices.empty()) j["indices"] = rows_json(f.indices);
  if (f.range.size() > 0) j["range"] = to_json(f.range);
  if (f.generator.size() > 0) j["generator"] = to_json(f.generator);
  if (f.affine_hull.basepoint().size() > 0 && f.affine_hull.basepoint().norm() > 0.0)
    j["affine_basepoint"] = to_json(f.affine_hull.basepoint());
  return j;
}

Json to_json(const ExposureResult& r) {
  Json j = {{"verdict", to_string(r.verdict)},
            {"witness", to_json(r.witness)},
            {"offset", r.offset},
            {"margin", r.margin},
            {"samples_checked", r.samples_checked}};
  if (r.certificate) {
    j["certificate"] = to_json(*r.certificate);
    j["certificate_distance"] = r.certificate_distance;
  }
  return j;
}

Json to_json(const ErrorBoundEstimate& e, bool with_samples) {
  Json j = {{"route", e.route},
            {"seed", e.seed},
            {"face", face_summary(e.face)},
            {"region", {{"center", to_json(e.region.center())}, {"radius", e.region.bounding_radius()}}},
            {"kappa_hat", e.kappa_hat},
            {"kappa_sampled", e.kappa_sampled},
            {"kappa_half", e.kappa_half},
            {"kappa_full", e.kappa_full},
            {"drift", e.drift},
            {"refinement", e.refinement},
            {"verdict", to_string(e.verdict)},
            {"n_samples", e.samples.size()}};
  if (with_samples) {
    Json s = Json::array();
    for (const ErrorBoundSample& x : e.samples)
      s.push_back({{"point", to_json(x.point)},
                   {"dist_face", x.dist_face},
                   {"dist_cone", x.dist_cone},
                   {"dist_aff", x.dist_aff},
                   {"ratio", x.ratio},
                   {"refined", x.refined}});
    j["samples"] = std::move(s);
  }
  return j;
}

Json to_json(const WitnessReport& w) {
  Json rows = Json::array();
  for (const WitnessRow& r : w.rows)
    rows.push_back({{"t", r.t},
                    {"point", to_json(r.point)},
                    {"dist_face", r.dist_face},
                    {"dist_cone", r.dist_cone},
                    {"ratio", r.ratio},
                    {"used_in_fit", r.used_in_fit}});
  return {{"curve", w.curve.name},
          {"rows", std::move(rows)},
          {"ratio_slope", w.ratio_slope},
          {"inverse_sq_slope", w.inverse_sq_slope},
          {"fitted_growth_exponent", w.curve.fitted_growth_exponent},
          {"warnings", w.warnings}};
}

Json to_json(const HullConstants& h) {
  return {{"r", h.r},         {"alpha", h.alpha},           {"alpha_resolution", h.alpha_resolution},
          {"beta", h.beta},   {"kappa_slice", h.kappa_slice}, {"e_norm", h.e_norm},
          {"gamma", h.gamma}};
}

Json to_json(const SliceBoundReport& r) {
  return {{"samples", r.samples}, {"rejected", r.rejected}, {"violations", r.violations},
          {"r", r.r},             {"e_norm", r.e_norm},     {"worst_margin", r.worst_margin}};
}

Json to_json(const MonotoneShiftReport& r) {
  Json rows = Json::array();
  for (const MonotoneShiftRow& x : r.rows)
    rows.push_back({{"t", x.t},
                    {"dist_shifted_cone", x.dist_shifted_cone},
                    {"dist_cone", x.dist_cone},
                    {"dist_face", x.dist_face},
                    {"dist_shifted_face", x.dist_shifted_face},
                    {"cone_holds", x.cone_holds},
                    {"face_holds", x.face_holds}});
  return {{"y", to_json(r.y)}, {"beta", r.beta}, {"rows", std::move(rows)}, {"all_hold", r.all_hold}};
}

Json to_json(const ProjectionMap& p) {
  return {{"matrix", to_json(p.matrix)},
          {"target_face", face_summary(p.target_face)},
          {"idempotency_residual", p.idempotency_residual},
          {"containment_violations", p.containment_violations},
          {"fixed_violations", p.fixed_violations},
          {"samples_checked", p.samples_checked},
          {"certified", p.certified()}};
}

Json to_json(const SungTamResult& r) {
  Json levels = Json::array();
  for (const SungTamLevel& l : r.levels)
    levels.push_back({{"k", l.k}, {"radius", l.radius}, {"found", l.found}, {"nearest", l.nearest}});
  Json rays = Json::array();
  for (std::size_t i = 0; i < r.rays.size() && i < 16; ++i) {
    const ExtremeRayFinding& f = r.rays[i];
    rays.push_back(
        {{"ray", to_json(f.ray)}, {"distance", f.distance}, {"hinge", rows_json(f.hinge)}, {"active", f.active}});
  }
  return {{"outcome", to_string(r.outcome)},
          {"w", to_json(r.w)},
          {"levels", std::move(levels)},
          {"nearest_rays", std::move(rays)},
          {"rays_found", r.rays.size()},
          {"generators", r.generators},
          {"face_generators", r.face_generators},
          {"deepest_level", r.deepest_level}};
}

Json to_json(const Codim1Report& r) {
  return {{"amenability", to_string(r.amenability)},
          {"kappa_hat", r.kappa_hat},
          {"sung_tam", to_json(r.sung_tam)},
          {"consistent", r.consistent},
          {"summary", r.summary}};
}

Json to_json(const verify::CheckResult& r) {
  Json m = Json::array();
  for (const verify::Measurement& x : r.measurements)
    m.push_back({{"name", x.name}, {"value", x.value}, {"expected", x.expected}, {"ok", x.ok}});
  return {{"name", r.name},
          {"description", r.description},
          {"passed", r.passed},
          {"measurements", std::move(m)},
          {"notes", r.notes}};
}

Json report_envelope(const std::string& command, const std::string& spec_hash, std::uint64_t seed,
                     const Tolerance& tol) {
  return {{"tool", "conelab"},
          {"version", version()},
          {"command", command},
          {"spec_hash", spec_hash},
          {"seed", seed},
          {"tolerance", to_json(tol)}};
}

std::string CsvTable::text() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw Error(ErrorCode::kInvalidArgument, "csv: row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += std::isfinite(row[i]) ? format_double(row[i]) : std::string("nan");
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content, bool force) {
  if (!force && std::filesystem::exists(path))
    throw Error(ErrorCode::kInvalidArgument, "refusing to overwrite '" + path.string() + "' (use --force)");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorCode::kInvalidArgument, "write failed for '" + path.string() + "'");
}

}  // namespace conelab::io
