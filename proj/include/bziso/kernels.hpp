#pragma once

// Data-parallel oracle kernels. Each OpenMP kernel has a serial reference
// counterpart with identical results; the references are kept for tests and
// the benchmark.

#include <cstddef>
#include <span>
#include <vector>

#include "bziso/curve.hpp"
#include "bziso/vec3.hpp"

namespace bziso::kernels {

/// Closest distance between segments [a0,a1] and [b0,b1].
double segment_segment_distance(const Point3& a0, const Point3& a1, const Point3& b0,
                                const Point3& b1);

/// Closest distance from p to segment [a0,a1].
double point_segment_distance(const Point3& p, const Point3& a0, const Point3& a1);

/// Lexicographically smallest offending edge pair (i <= j); i == j marks a
/// zero-length edge.
struct EdgeHit {
  bool found = false;
  std::size_t i = 0;
  std::size_t j = 0;
};

/// Whether edges i and j (i < j) of the polyline violate simplicity. Edges
/// sharing a vertex may only meet at that vertex.
bool edges_conflict(std::span<const Point3> pts, std::size_t i, std::size_t j, bool closed,
                    double eps);

/// Exhaustive O(m^2) edge-pair scan.
EdgeHit first_intersection_serial(std::span<const Point3> pts, bool closed, double eps);

/// Same answer as the serial scan, pruned by an x-sorted sweep and run in parallel.
EdgeHit first_intersection_parallel(std::span<const Point3> pts, bool closed, double eps);

struct MaxSample {
  double value = 0.0;
  double argmax = 0.0;
};

/// max over params of |pl_evaluate(polygon, t) - evaluate(curve, t)|. Ties keep the smaller t.
MaxSample max_distance_serial(const CompositeBezier& curve, const ControlPolygon& polygon,
                              std::span<const double> params);
MaxSample max_distance_parallel(const CompositeBezier& curve, const ControlPolygon& polygon,
                                std::span<const double> params);

/// Sample index pair whose distance is a discrete local minimum on the pair grid.
struct PairCandidate {
  std::size_t a = 0;
  std::size_t b = 0;
  double distance = 0.0;
};

/// Grid pairs (a < b) with arc[b] - arc[a] > window that are not farther apart
/// than any in-window grid neighbour. Sorted by (a, b).
std::vector<PairCandidate> distance_local_minima_serial(std::span<const Point3> samples,
                                                        std::span<const double> arc,
                                                        double window);
std::vector<PairCandidate> distance_local_minima_parallel(std::span<const Point3> samples,
                                                          std::span<const double> arc,
                                                          double window);

}  // namespace bziso::kernels
