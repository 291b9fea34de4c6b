#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bziso/bounds.hpp"
#include "bziso/curve.hpp"
#include "bziso/metrics.hpp"
#include "bziso/pipe.hpp"

namespace bziso {

struct SimplicityResult {
  bool simple = true;
  /// Offending edge pair when not simple (equal indices: zero-length edge).
  std::size_t edge_a = 0;
  std::size_t edge_b = 0;
};

/// Exhaustive edge-pair test. Edges sharing a vertex may touch only there.
/// A negative eps selects 1e-10 * (bounding-box diagonal).
SimplicityResult is_simple_polyline(std::span<const Point3> polyline, bool closed,
                                    double eps = -1.0);

struct SampledMax {
  double value = 0.0;
  double argmax = 0.0;
};

/// max |P(t) - B(t)| over `samples` uniform parameters plus every node of the union polygon.
SampledMax parameterwise_distance(const CompositeBezier& curve, const SubdivisionResult& result,
                                  int samples);

/// max angle between B'(t) and the slope of the union-polygon edge containing t,
/// over `samples` uniform parameters plus both one-sided slopes at every node.
/// Throws RegularityError on a zero-length edge.
SampledMax max_derivative_angle(const CompositeBezier& curve, const SubdivisionResult& result,
                                int samples);

/// Largest exterior angle at an interior vertex of any piece.
double measure_max_exterior_angle(const SubdivisionResult& result);

std::vector<double> piece_total_curvatures(const SubdivisionResult& result);

/// Whether the plane through q_0 normal to q_1 - q_0 meets the polygon only at q_0.
bool normal_plane_meets_only_at_start(const ControlPolygon& piece);

enum class CertificateLevel { SimplePieces, Homeomorphic, Isotopic };

std::string_view to_string(CertificateLevel level);
/// Accepts "simple", "homeo", "isotopy" and the long names.
std::optional<CertificateLevel> parse_level(std::string_view text);

struct Check {
  std::string name;
  bool passed = false;
  /// Worst observed value and the bound it was compared against.
  double value = 0.0;
  double limit = 0.0;
  std::string witness;
};

struct CertifyOptions {
  /// Overrides the pipe estimator.
  std::optional<double> pipe_radius;
  int samples = 2000;
  PipeOptions pipe;
  SigmaOptions sigma;
  SubdivisionOptions subdivision;
};

struct TopologyCertificate {
  CertificateLevel level = CertificateLevel::SimplePieces;
  /// ceil(bound) for the level.
  int iterations = 0;
  /// iterations + 1, honoring the strict "i > N" form; the checks ran here.
  int verification_iterations = 0;
  std::optional<GeometricConstants> constants;
  std::optional<IterationBounds> bounds;
  std::optional<PipeEstimate> pipe;
  int samples = 0;
  std::vector<Check> checks;
  bool verified = false;

  const Check* failed_check() const;
};

/// Constants, bounds, ceil(bound)+1 subdivisions, then the level's oracles.
/// Oracle or assumption failures yield verified = false with a named check.
TopologyCertificate certify(const CompositeBezier& curve, CertificateLevel level,
                            const CertifyOptions& options = {});

}  // namespace bziso
