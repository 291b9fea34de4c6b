#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bziso/curve.hpp"

namespace bziso {

struct Frame {
  Vec3 tangent;
  Vec3 normal;
  Vec3 binormal;
  /// Normal propagated by double reflection because the curvature vanished here.
  bool rotation_minimizing = false;
};

/// Curvature |B' x B''| / |B'|^3 at global t.
double curvature(const CompositeBezier& curve, double t);

/// Frenet frames at the given (increasing) parameters, with a
/// rotation-minimizing fallback wherever the curvature is numerically zero.
/// Throws RegularityError at a zero tangent.
std::vector<Frame> frames(const CompositeBezier& curve, std::span<const double> params);

struct PipeOptions {
  /// Samples per segment.
  int density = 512;
  double safety = 0.8;
  /// Doubly-critical criterion: chord within this angle of orthogonal to the tangents.
  double angle_tolerance = 5.0 * std::numbers::pi / 180.0;
  /// Radius cap for (near-)straight curves; defaults to the control-point bounding-box diagonal.
  std::optional<double> max_radius;
};

struct PipeEstimate {
  double radius = 0.0;
  /// Max sampled curvature.
  double curvature_bound = 0.0;
  /// Smallest doubly-critical self-distance found; +inf if none.
  double min_self_distance = 0.0;
  double safety_factor = 0.0;
  int sample_density = 0;
  /// Local-exclusion window, as a fraction of total arc length.
  double window = 0.0;
  double radius_cap = 0.0;
  std::optional<std::pair<double, double>> critical_pair;
  /// "curvature", "self_distance" or "cap".
  std::string limiting_term;
};

/// r = safety * min(cap, 1/kappa_max, d_min/2) from dense sampling.
/// Throws NotSimpleError when the spine is found to cross itself.
PipeEstimate estimate_pipe_radius(const CompositeBezier& curve, const PipeOptions& options = {});

struct Containment {
  bool contained = false;
  double max_distance = 0.0;
  double worst_t = 0.0;
};

/// Whether max |P(t) - B(t)| < r over `samples` uniform parameters plus the polygon nodes.
Containment pipe_contains(const CompositeBezier& curve, const ControlPolygon& polygon, double r,
                          int samples);

struct TriangleMesh {
  std::vector<Point3> vertices;
  /// 0-based vertex indices.
  std::vector<std::array<std::size_t, 3>> faces;
  /// Spine point of each ring; vertex k belongs to ring k / ring_size.
  std::vector<Point3> spine;
  std::size_t ring_size = 0;
};

/// Samples c(t) + r (cos(theta) n(t) + sin(theta) b(t)) on a
/// (density_t + 1) x density_theta grid and stitches the rings into triangles.
TriangleMesh pipe_surface_mesh(const CompositeBezier& curve, double r, int density_t,
                               int density_theta);

}  // namespace bziso
