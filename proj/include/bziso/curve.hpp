#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bziso/vec3.hpp"

namespace bziso {

/// Closed parameter interval [lo, hi] with lo < hi.
struct ParamInterval {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  double mid() const { return (lo + hi) / 2.0; }
  friend bool operator==(const ParamInterval&, const ParamInterval&) = default;
};

/// Ordered vertex list with the parameter interval it covers.
///
/// A degree-n Bezier segment has n+1 vertices. A single vertex is allowed so
/// that the hodograph of a degree-1 polygon is representable.
class ControlPolygon {
 public:
  ControlPolygon() = default;
  explicit ControlPolygon(std::vector<Point3> vertices, ParamInterval interval = {});

  std::span<const Point3> vertices() const { return vertices_; }
  const Point3& operator[](std::size_t i) const { return vertices_[i]; }
  std::size_t size() const { return vertices_.size(); }
  int degree() const { return static_cast<int>(vertices_.size()) - 1; }
  const ParamInterval& interval() const { return interval_; }
  const Point3& front() const { return vertices_.front(); }
  const Point3& back() const { return vertices_.back(); }

  friend bool operator==(const ControlPolygon&, const ControlPolygon&) = default;

 private:
  std::vector<Point3> vertices_;
  ParamInterval interval_;
};

/// Composite Bezier curve: same-degree segments sharing endpoints, segment k
/// occupying [k/S, (k+1)/S] of the global parameter.
///
/// Construction checks degree, finiteness and exact endpoint sharing. C1 and
/// regularity are reported by validate().
class CompositeBezier {
 public:
  explicit CompositeBezier(std::vector<std::vector<Point3>> segments);

  int degree() const { return degree_; }
  std::size_t segment_count() const { return segments_.size(); }
  const ControlPolygon& segment(std::size_t k) const { return segments_[k]; }
  std::span<const ControlPolygon> segments() const { return segments_; }

  /// Segment index and local parameter in [0,1] for a global t.
  std::pair<std::size_t, double> locate(double t) const;

  /// All control points, junction points listed once.
  std::vector<Point3> all_control_points() const;

 private:
  int degree_ = 0;
  std::vector<ControlPolygon> segments_;
};

struct SubdivisionResult {
  int iterations = 0;
  /// 2^i pieces per segment, in curve order.
  std::vector<ControlPolygon> pieces;
  /// Concatenation of the pieces over [0,1], shared endpoints listed once.
  ControlPolygon union_polygon;
};

struct SubdivisionOptions {
  int max_iterations = 64;
  /// Upper limit on union_polygon vertices; exceeding it is a ResourceError.
  std::size_t max_vertices = std::size_t{1} << 26;
};

/// de Casteljau evaluation of the polygon as a Bezier curve at local s in [0,1].
Point3 de_casteljau(std::span<const Point3> pts, double s);

/// Bezier point at global t in [0,1].
Point3 evaluate(const CompositeBezier& curve, double t);

/// First derivative dB/dt with respect to the global parameter.
Vec3 evaluate_derivative(const CompositeBezier& curve, double t);

/// Second derivative d2B/dt2 with respect to the global parameter.
Vec3 evaluate_second_derivative(const CompositeBezier& curve, double t);

/// Split at parameter 1/2. The intervals are the two halves of the input interval.
std::pair<ControlPolygon, ControlPolygon> subdivide_once(const ControlPolygon& polygon);

SubdivisionResult subdivide(const CompositeBezier& curve, int iterations,
                            const SubdivisionOptions& options = {});

/// Bezier hodograph: n (p_{j+1} - p_j), derivative w.r.t. the polygon's own [0,1].
ControlPolygon hodograph(const ControlPolygon& polygon);

/// Discrete derivative over the uniform parametrization of polygon.interval():
/// (p_{j+1} - p_j) / ((hi - lo) / n). Coincides with hodograph() on [0,1].
ControlPolygon discrete_derivative(const ControlPolygon& polygon);

/// Uniform-parametrization PL interpolation at t in polygon.interval().
Point3 pl_evaluate(const ControlPolygon& polygon, double t);

/// Concatenate consecutive polygons into one PL curve over the union of their intervals.
ControlPolygon concatenate(std::span<const ControlPolygon> pieces);

/// `samples` uniformly spaced parameters over polygon.interval(), merged
/// with the node parameters of its uniform parametrization. Sorted, unique.
std::vector<double> aligned_parameters(const ControlPolygon& polygon, int samples);

struct Diagnostics {
  /// |n(p_n - p_{n-1}) - n(q_1 - q_0)| per junction.
  std::vector<double> c1_residuals;
  double c1_tolerance = 0.0;
  bool c1_ok = true;
  std::optional<double> sigma;
  bool regular = true;
  bool spot_check_simple = true;
  /// Sample parameters of a suspected self-intersection.
  std::optional<std::pair<double, double>> self_intersection;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks the simple/regular/C1 assumptions. Never throws for a constructed curve.
Diagnostics validate(const CompositeBezier& curve, int spot_check_samples = 256);

}  // namespace bziso
