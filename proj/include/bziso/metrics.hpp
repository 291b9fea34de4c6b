#pragma once

#include <optional>
#include <span>

#include "bziso/curve.hpp"
#include "bziso/vec3.hpp"

namespace bziso {

/// Exterior (turning) angle at b between edges a->b and b->c, in [0, pi].
///
/// Throws DegenerateEdgeError when an edge is not longer than `eps`. A negative
/// eps selects the default 1e-12 * (bounding-box diagonal of the three points).
double exterior_angle(const Point3& a, const Point3& b, const Point3& c, double eps = -1.0);

/// Sum of exterior angles. An open polyline contributes its interior vertices;
/// a closed one also its wrap-around vertices (a repeated last vertex is ignored).
double total_curvature(std::span<const Point3> polyline, bool closed);
double total_curvature(const ControlPolygon& polygon, bool closed = false);

struct SecondDifference {
  /// Per-coordinate max |p_{m-1} - 2 p_m + p_{m+1}|.
  Vec3 per_coordinate;
  double norm = 0.0;
  /// Set when fewer than three vertices were available (value is zero).
  bool degenerate = false;
};

SecondDifference second_difference_norm(std::span<const Point3> vertices);
SecondDifference second_difference_norm(const ControlPolygon& polygon);

/// floor(n/2) * ceil(n/2) / (2n).
double n_infinity(int n);

/// Max distance between consecutive vertices of the initial discrete-derivative
/// polygons, over all segments.
double max_first_difference(const CompositeBezier& curve);

/// Certified lower bound on the distance from the origin to the convex hull of
/// `points`. Nonpositive when the hull may contain the origin.
double hull_distance_lower_bound(std::span<const Vec3> points);

struct SigmaOptions {
  /// Accept once (upper - lower) <= rel_tolerance * upper on the minimising piece.
  double rel_tolerance = 1e-3;
  int max_depth = 40;
  std::size_t max_pieces = 1'000'000;
};

/// Certified lower bound on min_t |B'(t)| (global parameter), strictly positive.
/// Throws RegularityError if positivity cannot be certified within the caps.
double min_derivative_norm(const CompositeBezier& curve, const SigmaOptions& options = {});

/// (1/4^i) N_inf(n) |D2 P|.
double b_dist(int iterations, int degree, double delta2_norm);

/// (1/4^i) N_inf(n-1) |D2 P'|; zero for n < 2.
double b_prime_dist(int iterations, int degree, double delta2_prime_norm);

/// Same as b_prime_dist with a real-valued iteration count.
double b_prime_dist_real(double iterations, int degree, double delta2_prime_norm);

struct GeometricConstants {
  int degree = 0;
  double M = 0.0;
  double sigma = 0.0;
  /// Of the control points (per segment, maximised per coordinate over segments).
  SecondDifference delta2_P;
  /// Of the global-parameter hodograph polygons, likewise.
  SecondDifference delta2_Pprime;
  std::optional<double> pipe_radius;
};

/// Everything except the pipe radius, which comes from the pipe module or the user.
GeometricConstants compute_constants(const CompositeBezier& curve,
                                     std::optional<double> pipe_radius = std::nullopt,
                                     const SigmaOptions& sigma_options = {});

}  // namespace bziso
