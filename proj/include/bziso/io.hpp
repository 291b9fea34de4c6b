#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bziso/bounds.hpp"
#include "bziso/curve.hpp"
#include "bziso/pipe.hpp"
#include "bziso/verify.hpp"

namespace bziso::io {

using Json = nlohmann::ordered_json;

// CurveFile grammar (one record per line, '#' comments and blank lines ignored):
//
//   bezier <version> <degree> <num_segments>
//   [pipe_radius <r>]
//   segment                      repeated num_segments times,
//   <x> <y> <z>                  each followed by degree+1 point lines
//   [polyline <count>            optional trailing PL section
//    <x> <y> <z> ...]
struct CurveFile {
  int version = 1;
  int degree = 0;
  std::vector<std::vector<Point3>> segments;
  std::optional<double> pipe_radius;
  std::optional<std::vector<Point3>> polyline;

  friend bool operator==(const CurveFile&, const CurveFile&) = default;
};

inline constexpr int kFormatVersion = 1;

/// 17 significant digits, as "%.17g"; parses back to the same double.
std::string format_double(double value);

/// Throws ParseError with 1-based line and column.
CurveFile parse_curve_file(std::string_view text);
/// Canonical form: parse_curve_file(format_curve_file(f)) == f, and
/// format_curve_file(parse_curve_file(t)) == t for canonical t.
std::string format_curve_file(const CurveFile& file);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

struct LoadedCurve {
  CurveFile file;
  CompositeBezier curve;
  Diagnostics diagnostics;
};

/// Parses and validates. Throws ParseError, or ValidationError naming the
/// violated assumption ("shared_junction", "C1", "regular"). A sampled
/// self-intersection is left in the diagnostics for the caller to act on.
LoadedCurve load_curve(const std::filesystem::path& path);
LoadedCurve load_curve_text(std::string_view text);

std::string format_polyline(std::span<const Point3> vertices);
/// `v x y z` and `f i j k` lines, 1-based indices.
std::string format_mesh(const TriangleMesh& mesh);

Json to_json(const Vec3& v);
Json to_json(const GeometricConstants& gc);
Json to_json(const IterationBounds& b);
Json to_json(const PipeEstimate& p);
Json to_json(const Diagnostics& d);
Json to_json(const TopologyCertificate& cert);

/// Indented `key: value` tree. Strings are quoted, doubles always carry a
/// decimal point or exponent, list items start with "- ".
std::string write_tree(const Json& value);
/// Inverse of write_tree. Throws ParseError.
Json parse_tree(std::string_view text);

}  // namespace bziso::io
