#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "conelab/linalg.hpp"

namespace conelab::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 1;
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitCheckFailed = 3;

struct RunConfig {
  std::string command;
  std::string spec_path;
  std::vector<std::string> points;
  std::string face;
  std::string region;  // "c1,...,cd,radius"
  std::uint64_t seed = 1;
  int samples = 0;  // 0 picks the command default
  Tolerance tol;
  std::string out;  // output directory; empty writes the report to stdout
  std::string format = "json";  // json, csv or both
  bool force = false;
  std::string op = "minimal";  // face command: minimal, conjugate, double-conjugate, exposed
  double kappa_slice = 1.0;
  std::vector<std::string> checks;
};

// Runs one command; reports go to `out` or to files, diagnostics to `err`.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace conelab::cli
