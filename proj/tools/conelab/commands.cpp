#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "conelab/amenability.hpp"
#include "conelab/gallery.hpp"
#include "conelab/hull_constants.hpp"
#include "conelab/io.hpp"
#include "conelab/proj_exposed.hpp"
#include "conelab/projection.hpp"
#include "conelab/verify.hpp"

namespace conelab::cli {

namespace {

using io::Json;

struct LoadedSpec {
  ConeSpec k;
  std::string hash;
};

LoadedSpec load_spec(const RunConfig& cfg) {
  if (cfg.spec_path.empty()) throw io::ParseError(cfg.command + ": --spec is required");
  std::ifstream in(cfg.spec_path, std::ios::binary);
  if (!in) throw io::ParseError("cannot read spec file '" + cfg.spec_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const Json j = io::parse_json_text(buf.str(), cfg.spec_path);
  return {io::parse_cone_spec(j), io::hash_hex(io::fnv1a64(io::canonical_text(j)))};
}

Vec single_point(const RunConfig& cfg, Index dim) {
  if (cfg.points.size() != 1) throw io::ParseError(cfg.command + ": expected exactly one --point");
  const Vec x = io::parse_point(cfg.points.front());
  if (x.size() != dim)
    throw io::ParseError("point has dimension " + std::to_string(x.size()) + ", the spec has " + std::to_string(dim));
  return x;
}

// Resolves --face. Gallery faces carry their own parent, which must be the
// set named by the spec; computations then use that parent.
FaceHandle face_of(const RunConfig& cfg, const ConeSpec& k) {
  if (cfg.face.empty()) throw io::ParseError(cfg.command + ": --face is required");
  FaceHandle f = io::resolve_face(k, cfg.face);
  if (f.parent.describe() != k.describe())
    throw io::ParseError("face '" + cfg.face + "' belongs to " + f.parent.describe() + ", not to the spec set " +
                         k.describe());
  return f;
}

BoundedRegion region_of(const RunConfig& cfg, const FaceHandle& f) {
  if (!cfg.region.empty()) return io::parse_region(cfg.region, f.ambient_dim());
  // Default: radius-2 ball around the point of aff F nearest the origin, wide
  // enough to leave the unit-scale faces of the examples.
  return BoundedRegion::ball(f.affine_hull.project(Vec::Zero(f.ambient_dim())), 2.0);
}

// Writes the report and optional CSV to stdout or to files under --out.
void emit(const RunConfig& cfg, const Json& report, const std::optional<io::CsvTable>& csv, std::ostream& out) {
  const bool want_json = cfg.format != "csv";
  const bool want_csv = cfg.format != "json" && csv.has_value();
  if (cfg.format == "csv" && !csv) throw io::ParseError(cfg.command + " has no CSV output; use --format json");
  if (cfg.out.empty()) {
    if (want_json) out << io::dump(report) << '\n';
    if (want_csv) out << csv->text();
    return;
  }
  const std::filesystem::path dir(cfg.out);
  if (want_json) io::write_file(dir / (cfg.command + ".json"), io::dump(report) + "\n", cfg.force);
  if (want_csv) io::write_file(dir / (cfg.command + ".csv"), csv->text(), cfg.force);
}

Json envelope(const RunConfig& cfg, const std::string& hash) {
  return io::report_envelope(cfg.command, hash, cfg.seed, cfg.tol);
}

// ---------------------------------------------------------------------------

int cmd_project(const RunConfig& cfg, std::ostream& out) {
  const LoadedSpec s = load_spec(cfg);
  const Vec x = single_point(cfg, s.k.dim());
  Json r = envelope(cfg, s.hash);
  r["input"] = io::to_json(x);
  r["location"] = to_string(membership(s.k, x, cfg.tol).location);
  r["projection"] = io::to_json(project(s.k, x));
  emit(cfg, r, std::nullopt, out);
  return kExitOk;
}

io::CsvTable sample_table(const ErrorBoundEstimate& e) {
  io::CsvTable t;
  t.header = {"index", "dist_face", "dist_cone", "ratio"};
  for (std::size_t i = 0; i < e.samples.size(); ++i) {
    const ErrorBoundSample& x = e.samples[i];
    t.rows.push_back({static_cast<double>(i), x.dist_face, x.dist_cone, x.ratio});
  }
  return t;
}

int cmd_probe(const RunConfig& cfg, std::ostream& out, bool blr) {
  const LoadedSpec s = load_spec(cfg);
  const FaceHandle f = face_of(cfg, s.k);
  ProbeOptions po;
  po.seed = cfg.seed;
  if (cfg.samples > 0) po.n_samples = cfg.samples;
  const BoundedRegion region = region_of(cfg, f);
  const ErrorBoundEstimate e = blr ? blr_check(f.parent, f, region, po) : estimate_kappa(f.parent, f, region, po);
  Json r = envelope(cfg, s.hash);
  r["estimate"] = io::to_json(e, false);
  emit(cfg, r, sample_table(e), out);
  return kExitOk;
}

int cmd_face(const RunConfig& cfg, std::ostream& out) {
  const LoadedSpec s = load_spec(cfg);
  Json r = envelope(cfg, s.hash);
  r["op"] = cfg.op;
  if (cfg.op == "minimal") {
    const Vec x = single_point(cfg, s.k.dim());
    r["face"] = io::face_summary(minimal_face(s.k, x, cfg.tol));
  } else {
    const FaceHandle f = face_of(cfg, s.k);
    r["face"] = io::face_summary(f);
    if (cfg.op == "conjugate") {
      r["conjugate"] = io::face_summary(conjugate_face(f.parent, f));
    } else if (cfg.op == "double-conjugate") {
      r["double_conjugate"] = io::face_summary(double_conjugate(f.parent, f));
    } else if (cfg.op == "exposed") {
      ExposureOptions eo;
      eo.seed = cfg.seed;
      if (cfg.samples > 0) eo.samples = cfg.samples;
      r["exposure"] = io::to_json(is_exposed(f.parent, f, eo));
    } else {
      throw io::ParseError("face: unknown --op '" + cfg.op + "' (minimal, conjugate, double-conjugate, exposed)");
    }
  }
  emit(cfg, r, std::nullopt, out);
  return kExitOk;
}

int cmd_constants(const RunConfig& cfg, std::ostream& out) {
  const LoadedSpec s = load_spec(cfg);
  const auto* ch = s.k.get_if<spec::ConicHull>();
  if (!ch) throw io::ParseError("constants: the spec must be a conic hull of a compact slice, got " + s.k.kind());
  const FaceHandle f = cfg.face.empty() ? whole_face(s.k) : face_of(cfg, s.k);
  Json r = envelope(cfg, s.hash);
  r["face"] = io::face_summary(f);
  r["constants"] = io::to_json(measure_hull_constants(ch->slice, f, cfg.kappa_slice));
  const SliceBoundReport b = verify_slice_bound(s.k, cfg.samples > 0 ? cfg.samples : 1000, cfg.seed, 1e-8);
  r["slice_bound"] = io::to_json(b);
  emit(cfg, r, std::nullopt, out);
  return kExitOk;
}

int cmd_sung_tam(const RunConfig& cfg, std::ostream& out) {
  const LoadedSpec s = load_spec(cfg);
  const FaceHandle f = face_of(cfg, s.k);
  SungTamOptions so;
  if (cfg.samples > 0) so.generator_count = cfg.samples;
  const SungTamResult st = sung_tam_probe(f.parent, f, so);
  Json r = envelope(cfg, s.hash);
  r["sung_tam"] = io::to_json(st);
  io::CsvTable t;
  t.header = {"k", "radius", "found", "nearest"};
  for (const SungTamLevel& l : st.levels) t.rows.push_back({double(l.k), l.radius, l.found ? 1.0 : 0.0, l.nearest});
  emit(cfg, r, t, out);
  return kExitOk;
}

int cmd_build_projection(const RunConfig& cfg, std::ostream& out) {
  const LoadedSpec s = load_spec(cfg);
  ProjectionBuildOptions bo;
  bo.seed = cfg.seed;
  if (cfg.samples > 0) bo.certify_samples = cfg.samples;
  std::vector<Vec> pts;
  for (const std::string& p : cfg.points) {
    pts.push_back(io::parse_point(p));
    if (pts.back().size() != s.k.dim()) throw io::ParseError("point dimension does not match the spec");
  }
  ProjectionMap p;
  if (pts.size() == 1) {
    p = build_rank_one_projection(s.k, pts[0], bo);
  } else if (pts.size() == 2) {
    const FaceHandle f = face_of(cfg, s.k);
    p = build_rank_two_projection(f.parent, f, pts[0], pts[1], bo);
  } else {
    throw io::ParseError("build-projection: give one --point (rank one) or two with --face (rank two)");
  }
  Json r = envelope(cfg, s.hash);
  r["rank"] = pts.size();
  r["projection"] = io::to_json(p);
  emit(cfg, r, std::nullopt, out);
  return p.certified() ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names = cfg.checks;
  if (names.empty() || (names.size() == 1 && names[0] == "all")) names = verify::check_names();
  for (const std::string& n : names)
    if (!verify::has_check(n)) {
      std::string known;
      for (const std::string& k : verify::check_names()) known += "\n  " + k;
      throw io::ParseError("unknown check '" + n + "'; known checks:" + known);
    }
  verify::CheckOptions co;
  co.seed = cfg.seed;
  Json checks = Json::array();
  bool all = true;
  for (const std::string& n : names) {
    const verify::CheckResult c = verify::run_check(n, co);
    err << (c.passed ? "PASS " : "FAIL ") << n << " (" << c.seconds << " s)\n";
    all = all && c.passed;
    checks.push_back(io::to_json(c));
  }
  Json names_json = names;
  Json r = envelope(cfg, io::hash_hex(io::fnv1a64(io::canonical_text(names_json))));
  r["checks"] = std::move(checks);
  r["passed"] = all;
  emit(cfg, r, std::nullopt, out);
  return all ? kExitOk : kExitCheckFailed;
}

// CSV series behind the gallery figures and asymptotic tables.
int cmd_plot_data(const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) throw io::ParseError("plot-data: --out <directory> is required");
  const std::filesystem::path dir(cfg.out);
  const int density = cfg.samples > 0 ? cfg.samples : gallery::kDefaultDensity;
  constexpr double kPi = std::numbers::pi;
  std::vector<std::pair<std::string, io::CsvTable>> files;

  io::CsvTable curves;
  curves.header = {"curve", "t", "x", "y", "z"};
  for (int i = 0; i <= 256; ++i) {
    const double a = 2.0 * kPi * i / 256, g = kPi * i / 256;
    const Vec al = gallery::alpha(a), be = gallery::beta(a), ga = gallery::gamma(g);
    curves.rows.push_back({0, a, al(0), al(1), al(2)});
    curves.rows.push_back({1, a, be(0), be(1), be(2)});
    curves.rows.push_back({2, g, ga(0), ga(1), ga(2)});
  }
  files.emplace_back("curves.csv", curves);

  const ConeSpec c = gallery::nice_not_amenable_C(density);
  const FaceHandle disk = gallery::disk_alpha_face(c);
  std::vector<double> ts;
  for (int i = 0; i < 16; ++i) ts.push_back(0.4 * std::pow(0.5, 0.5 * i));
  ProjectionOptions po;
  po.refine_curves = true;
  const WitnessReport w = evaluate_witness(c, disk, WitnessCurve{"w", gallery::witness_w, ts}, po);
  io::CsvTable wt;
  wt.header = {"t", "dist_face", "dist_cone", "ratio", "dist_face_sq_closed_form", "dist_cone_sq_gamma_bound"};
  for (const WitnessRow& r : w.rows)
    wt.rows.push_back({r.t, r.dist_face, r.dist_cone, r.ratio, gallery::witness_face_distance_sq(r.t),
                       gallery::witness_hull_bound_sq(r.t)});
  files.emplace_back("witness.csv", wt);

  io::CsvTable st;
  st.header = {"eps", "dist_F", "dist_C", "dist_aff", "ratio", "nearest_y11"};
  for (int k = 0; k <= 20; ++k) {
    const gallery::SturmPoint p = gallery::sturm_family(std::pow(0.5, k));
    st.rows.push_back({p.eps, p.dist_to_F, p.dist_to_C, p.dist_to_aff, p.dist_to_F / (p.dist_to_C + p.dist_to_aff),
                       p.nearest_y11});
  }
  files.emplace_back("sturm.csv", st);

  io::CsvTable en;
  en.header = {"t", "u", "worst_gap"};
  for (int k = 1; k < 128; ++k) {
    const gallery::ExposingNormal e = gallery::exposing_normal(2.0 * kPi * k / 128);
    en.rows.push_back({e.t, e.u, e.worst_gap});
  }
  files.emplace_back("exposing_normals.csv", en);

  io::CsvTable dm;
  dm.header = {"t", "s", "numeric", "closed_form", "bracket"};
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const double t = kPi * (i + 1) / 52.0, s = t + (kPi - t) * (j + 1) / 51.0;
      const gallery::DetM d = gallery::det_M(t, s);
      dm.rows.push_back({t, s, d.numeric, d.closed_form, d.bracket});
    }
  files.emplace_back("det_m.csv", dm);

  Json r = envelope(cfg, io::hash_hex(io::fnv1a64("plot-data:" + std::to_string(density))));
  r["density"] = density;
  r["witness_inverse_sq_slope"] = w.inverse_sq_slope;
  Json listed = Json::array();
  for (const auto& [name, table] : files) {
    io::write_file(dir / name, table.text(), cfg.force);
    listed.push_back({{"file", name}, {"rows", table.rows.size()}, {"columns", table.header}});
  }
  r["files"] = std::move(listed);
  io::write_file(dir / "plot-data.json", io::dump(r) + "\n", cfg.force);
  out << io::dump(r) << '\n';
  return kExitOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both")
    throw io::ParseError("--format must be json, csv or both");
  if (cfg.command == "project") return cmd_project(cfg, out);
  if (cfg.command == "probe-amenability") return cmd_probe(cfg, out, false);
  if (cfg.command == "probe-blr") return cmd_probe(cfg, out, true);
  if (cfg.command == "face") return cmd_face(cfg, out);
  if (cfg.command == "constants") return cmd_constants(cfg, out);
  if (cfg.command == "sung-tam") return cmd_sung_tam(cfg, out);
  if (cfg.command == "build-projection") return cmd_build_projection(cfg, out);
  if (cfg.command == "verify") return cmd_verify(cfg, out, err);
  if (cfg.command == "plot-data") return cmd_plot_data(cfg, out);
  throw io::ParseError("unknown command '" + cfg.command + "'");
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(cfg, out, err);
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << " (best gap " << e.gap() << " after " << e.iterations() << " iterations)\n";
    return kExitNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kNonConvergence ? kExitNonConvergence : kExitBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
}

}  // namespace conelab::cli
