#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conelab/amenability.hpp"
#include "conelab/face.hpp"
#include "conelab/hull_constants.hpp"
#include "conelab/proj_exposed.hpp"
#include "conelab/verify.hpp"

// Wire formats: cone-spec JSON in, deterministic JSON and CSV out.
namespace conelab::io {

using Json = nlohmann::json;

const char* version();

// Malformed input, with a human-readable location (line/column for syntax
// errors, a JSON pointer for schema errors).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(ErrorCode::kInvalidArgument, what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Tagged union mirroring ConeSpec, for example
//   {"type": "product", "factors": [{"type": "second_order", "dim": 3},
//                                   {"type": "psd", "n": 2}]}
// Matrices are row-major nested arrays; symmetric matrices are given in full
// and checked symmetric to 1e-12.
ConeSpec parse_cone_spec(const Json& j);
Json parse_json_text(const std::string& text, const std::string& source = "<input>");
ConeSpec load_cone_spec(const std::filesystem::path& path);

// Canonical text of a spec document and its FNV-1a 64-bit hash (hex).
std::string canonical_text(const Json& j);
std::uint64_t fnv1a64(const std::string& data);
std::string hash_hex(std::uint64_t h);

// "1,0,0" or a symmetric matrix "[a,b;b,c]" (converted with svec).
Vec parse_point(const std::string& text);
// "[1,0;0,1;0,0]": rows separated by ';'.
Mat parse_matrix(const std::string& text);
// "center,radius" where center is comma separated: "0,0,1,2" is the ball of
// radius 2 around (0,0,1).
BoundedRegion parse_region(const std::string& text, Index dim);

// Face descriptors:
//   whole | zero | minimal:<point> | ray:<point> | orthant:support=i,j,...
//   psd:range=<matrix> | rows:i,j,... | generators:i,j,... | gallery:<name>
// generators: also selects slice points of a conic hull of fixed points.
FaceHandle resolve_face(const ConeSpec& k, const std::string& descriptor, int density = 2048);

// JSON text with every floating-point number printed with 17 significant
// digits ("C" formatting); non-finite numbers become null.
std::string dump(const Json& j, int indent = 2);
std::string format_double(double v);

Json to_json(const Vec& v);
Json to_json(const Mat& m);  // row-major
Json to_json(const Tolerance& t);
Json to_json(const ProjectionResult& r);
Json to_json(const MoreauSplit& m);
Json face_summary(const FaceHandle& f);
Json to_json(const ExposureResult& r);
Json to_json(const ErrorBoundEstimate& e, bool with_samples = true);
Json to_json(const WitnessReport& w);
Json to_json(const HullConstants& h);
Json to_json(const SliceBoundReport& r);
Json to_json(const MonotoneShiftReport& r);
Json to_json(const ProjectionMap& p);
Json to_json(const SungTamResult& r);
Json to_json(const Codim1Report& r);
// Wall time is left out so that reports stay reproducible.
Json to_json(const verify::CheckResult& r);

// Envelope shared by every report.
Json report_envelope(const std::string& command, const std::string& spec_hash, std::uint64_t seed,
                     const Tolerance& tol);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::string text() const;
};

// Writes `content`; refuses to replace an existing file unless force is set.
void write_file(const std::filesystem::path& path, const std::string& content, bool force);

}  // namespace conelab::io
