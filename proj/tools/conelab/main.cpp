#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "conelab/io.hpp"

namespace {

using conelab::cli::RunConfig;

void common_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--seed", cfg.seed, "Random seed, recorded in the report");
  sub.add_option("--samples", cfg.samples, "Sample count (0 keeps the command default)");
  sub.add_option("--tol-abs", cfg.tol.abs, "Absolute tolerance");
  sub.add_option("--tol-rel", cfg.tol.rel, "Relative tolerance");
  sub.add_option("--out", cfg.out, "Output directory (default: report on stdout)");
  sub.add_option("--format", cfg.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  sub.add_flag("--force", cfg.force, "Overwrite existing output files");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Numerical laboratory for faces of convex cones"};
  app.set_version_flag("--version", std::string(conelab::io::version()));
  app.require_subcommand(1);

  auto spec_opt = [&](CLI::App* s) { s->add_option("--spec", cfg.spec_path, "Cone spec JSON file")->required(); };
  auto face_opt = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--face", cfg.face, "Face descriptor, e.g. orthant:support=0,1 or gallery:disk_alpha");
    if (required) o->required();
  };
  auto region_opt = [&](CLI::App* s) {
    s->add_option("--region", cfg.region, "Ball as center coordinates followed by the radius: c1,...,cd,r");
  };

  auto* project = app.add_subcommand("project", "Nearest point of the set");
  spec_opt(project);
  // One value per --point occurrence; CLI11 would otherwise split "[a,b;c,d]" as a list literal.
  auto point_opt = [&](CLI::App* s, const char* help) {
    return s->add_option("--point", cfg.points, help)->allow_extra_args(false);
  };
  point_opt(project, "Point: 1,0,0 or a symmetric matrix [a,b;b,c]")->required();

  auto* probe = app.add_subcommand("probe-amenability", "Sample dist(x,F)/dist(x,K) over aff F in a region");
  spec_opt(probe);
  face_opt(probe, true);
  region_opt(probe);

  auto* blr = app.add_subcommand("probe-blr", "Sample dist(x,F)/max(dist(x,aff F), dist(x,K)) in a region");
  spec_opt(blr);
  face_opt(blr, true);
  region_opt(blr);

  auto* face = app.add_subcommand("face", "Minimal, conjugate and exposed faces");
  spec_opt(face);
  face_opt(face, false);
  point_opt(face, "Point for --op minimal");
  face->add_option("--op", cfg.op, "minimal, conjugate, double-conjugate or exposed")
      ->check(CLI::IsMember({"minimal", "conjugate", "double-conjugate", "exposed"}));

  auto* constants = app.add_subcommand("constants", "Slice radius, antipodality constant and the slice bound");
  spec_opt(constants);
  face_opt(constants, false);
  constants->add_option("--kappa-slice", cfg.kappa_slice, "Error-bound constant of the slice");

  auto* sung_tam = app.add_subcommand("sung-tam", "Search for extreme rays of K* converging to F^Δ");
  spec_opt(sung_tam);
  face_opt(sung_tam, true);

  auto* build = app.add_subcommand("build-projection", "Idempotent map onto a ray (one point) or a 2-dim face");
  spec_opt(build);
  face_opt(build, false);
  point_opt(build, "Generator of the face; repeat for a rank-two map")->required();

  auto* verify = app.add_subcommand("verify", "Run named checks (all by default)");
  verify->add_option("checks", cfg.checks, "Check names or 'all'");

  auto* plot = app.add_subcommand("plot-data", "Write CSV series for the gallery figures and tables");

  for (CLI::App* s : {project, probe, blr, face, constants, sung_tam, build, verify, plot}) common_options(*s, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return conelab::cli::kExitBadInput;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return conelab::cli::run_command(cfg, std::cout, std::cerr);
}
