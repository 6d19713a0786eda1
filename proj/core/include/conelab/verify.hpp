#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Named numerical checks of the gallery constructions and the cone
// machinery. Each one measures quantities, compares them with a stated
// bound and reports pass/fail; none of them adjusts its tolerance.
namespace conelab::verify {

struct Measurement {
  std::string name;
  double value = 0.0;
  std::string expected;  // human-readable bound, e.g. "<= 1e-10"
  bool ok = false;
};

struct CheckResult {
  std::string name;
  std::string description;
  bool passed = false;
  double seconds = 0.0;  // wall time; kept out of serialized reports
  std::vector<Measurement> measurements;
  std::vector<std::string> notes;
};

struct CheckOptions {
  std::uint64_t seed = 1;
  int density = 2048;  // samples per gallery curve
};

// witness_asymptotics, det_M, exposing_normals, dual_sum, sturm, slice_bound,
// moreau, dykstra_dnn, projections_dim4, sung_tam_gallery, equivalence.
std::vector<std::string> check_names();
bool has_check(const std::string& name);
// Throws kInvalidArgument for unknown names.
CheckResult run_check(const std::string& name, const CheckOptions& opt = {});

}  // namespace conelab::verify
