#include "bziso/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>


namespace bziso::kernels {

namespace {

std::size_t effective_vertex_count(std::span<const Point3> pts, bool closed) {
  std::size_t count = pts.size();
  if (closed && count > 1 && pts.front() == pts.back()) --count;
  return count;
}

std::size_t edge_count(std::size_t vertices, bool closed) {
  if (vertices < 2) return 0;
  return closed ? vertices : vertices - 1;
}

struct Edge {
  const Point3& a;
  const Point3& b;
};

Edge edge_at(std::span<const Point3> pts, std::size_t vertices, std::size_t k) {
  return {pts[k], pts[(k + 1) % vertices]};
}

bool hit_less(const EdgeHit& x, const EdgeHit& y) {
  if (!x.found) return false;
  if (!y.found) return true;
  return std::pair(x.i, x.j) < std::pair(y.i, y.j);
}

}  // namespace

double point_segment_distance(const Point3& p, const Point3& a0, const Point3& a1) {
  const Vec3 d = a1 - a0;
  const double dd = squared_norm(d);
  if (dd == 0.0) return distance(p, a0);
  const double t = std::clamp(dot(p - a0, d) / dd, 0.0, 1.0);
  return distance(p, a0 + t * d);
}

double segment_segment_distance(const Point3& a0, const Point3& a1, const Point3& b0,
                                const Point3& b1) {
  // Closest points of two segments, clamped parametric form.
  const Vec3 d1 = a1 - a0;
  const Vec3 d2 = b1 - b0;
  const Vec3 r = a0 - b0;
  const double a = dot(d1, d1);
  const double e = dot(d2, d2);
  const double f = dot(d2, r);
  double s = 0.0;
  double t = 0.0;
  if (a == 0.0 && e == 0.0) return norm(r);
  if (a == 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e == 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return distance(a0 + s * d1, b0 + t * d2);
}

bool edges_conflict(std::span<const Point3> pts, std::size_t i, std::size_t j, bool closed,
                    double eps) {
  const std::size_t nv = effective_vertex_count(pts, closed);
  const std::size_t m = edge_count(nv, closed);
  const Edge ei = edge_at(pts, nv, i);
  const Edge ej = edge_at(pts, nv, j);
  if (j == i + 1) {
    // ei.b == ej.a is the shared vertex.
    return point_segment_distance(ei.a, ej.a, ej.b) <= eps ||
           point_segment_distance(ej.b, ei.a, ei.b) <= eps;
  }
  if (closed && i == 0 && j == m - 1) {
    // ej.b == ei.a is the shared vertex.
    return point_segment_distance(ei.b, ej.a, ej.b) <= eps ||
           point_segment_distance(ej.a, ei.a, ei.b) <= eps;
  }
  return segment_segment_distance(ei.a, ei.b, ej.a, ej.b) <= eps;
}

EdgeHit first_intersection_serial(std::span<const Point3> pts, bool closed, double eps) {
  const std::size_t nv = effective_vertex_count(pts, closed);
  const std::size_t m = edge_count(nv, closed);
  for (std::size_t i = 0; i < m; ++i) {
    const Edge ei = edge_at(pts, nv, i);
    if (distance(ei.a, ei.b) <= eps) return {true, i, i};
    for (std::size_t j = i + 1; j < m; ++j) {
      const Edge ej = edge_at(pts, nv, j);
      if (distance(ej.a, ej.b) <= eps) continue;  // reported when i reaches j
      if (edges_conflict(pts, i, j, closed, eps)) return {true, i, j};
    }
  }
  return {};
}

EdgeHit first_intersection_parallel(std::span<const Point3> pts, bool closed, double eps) {
  const std::size_t nv = effective_vertex_count(pts, closed);
  const std::size_t m = edge_count(nv, closed);
  if (m == 0) return {};

  std::vector<Vec3> lo(m), hi(m);
  std::vector<char> zero(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Edge e = edge_at(pts, nv, k);
    lo[k] = {std::min(e.a.x, e.b.x), std::min(e.a.y, e.b.y), std::min(e.a.z, e.b.z)};
    hi[k] = {std::max(e.a.x, e.b.x), std::max(e.a.y, e.b.y), std::max(e.a.z, e.b.z)};
    zero[k] = distance(e.a, e.b) <= eps ? 1 : 0;
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return lo[x].x < lo[y].x || (lo[x].x == lo[y].x && x < y);
  });

  EdgeHit best;
  for (std::size_t k = 0; k < m; ++k) {
    if (zero[k]) {
      best = {true, k, k};
      break;
    }
  }

  const auto count = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel
  {
    EdgeHit local;
#pragma omp for schedule(dynamic, 64) nowait
    for (std::ptrdiff_t pa = 0; pa < count; ++pa) {
      const std::size_t ia = order[static_cast<std::size_t>(pa)];
      if (zero[ia]) continue;
      for (std::size_t pb = static_cast<std::size_t>(pa) + 1; pb < m; ++pb) {
        const std::size_t ib = order[pb];
        if (lo[ib].x > hi[ia].x + eps) break;
        if (zero[ib]) continue;
        if (lo[ib].y > hi[ia].y + eps || lo[ia].y > hi[ib].y + eps) continue;
        if (lo[ib].z > hi[ia].z + eps || lo[ia].z > hi[ib].z + eps) continue;
        const std::size_t i = std::min(ia, ib);
        const std::size_t j = std::max(ia, ib);
        const EdgeHit candidate{true, i, j};
        if (!hit_less(candidate, local)) continue;
        if (edges_conflict(pts, i, j, closed, eps)) local = candidate;
      }
    }
#pragma omp critical(bziso_first_intersection)
    {
      if (hit_less(local, best)) best = local;
    }
  }
  return best;
}

MaxSample max_distance_serial(const CompositeBezier& curve, const ControlPolygon& polygon,
                              std::span<const double> params) {
  MaxSample best{-1.0, 0.0};
  for (double t : params) {
    const double d = distance(pl_evaluate(polygon, t), evaluate(curve, t));
    if (d > best.value || (d == best.value && t < best.argmax)) best = {d, t};
  }
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

MaxSample max_distance_parallel(const CompositeBezier& curve, const ControlPolygon& polygon,
                                std::span<const double> params) {
  MaxSample best{-1.0, 0.0};
  const auto count = static_cast<std::ptrdiff_t>(params.size());
#pragma omp parallel
  {
    MaxSample local{-1.0, 0.0};
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      const double t = params[static_cast<std::size_t>(k)];
      const double d = distance(pl_evaluate(polygon, t), evaluate(curve, t));
      if (d > local.value || (d == local.value && t < local.argmax)) local = {d, t};
    }
#pragma omp critical(bziso_max_distance)
    {
      if (local.value > best.value || (local.value == best.value && local.argmax < best.argmax)) {
        best = local;
      }
    }
  }
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

namespace {

void scan_row(std::span<const Point3> samples, std::span<const double> arc, double window,
              std::size_t a, std::vector<PairCandidate>& out) {
  const std::size_t n = samples.size();
  auto valid = [&](std::size_t x, std::size_t y) { return x < y && arc[y] - arc[x] > window; };
  auto dist = [&](std::size_t x, std::size_t y) { return distance(samples[x], samples[y]); };
  for (std::size_t b = a + 1; b < n; ++b) {
    if (!valid(a, b)) continue;
    const double d = dist(a, b);
    bool minimum = true;
    if (a > 0 && valid(a - 1, b) && dist(a - 1, b) < d) minimum = false;
    if (minimum && a + 1 < n && valid(a + 1, b) && dist(a + 1, b) < d) minimum = false;
    if (minimum && valid(a, b - 1) && dist(a, b - 1) < d) minimum = false;
    if (minimum && b + 1 < n && dist(a, b + 1) < d) minimum = false;
    if (minimum) out.push_back({a, b, d});
  }
}

}  // namespace

std::vector<PairCandidate> distance_local_minima_serial(std::span<const Point3> samples,
                                                        std::span<const double> arc,
                                                        double window) {
  std::vector<PairCandidate> out;
  for (std::size_t a = 0; a < samples.size(); ++a) scan_row(samples, arc, window, a, out);
  return out;
}

std::vector<PairCandidate> distance_local_minima_parallel(std::span<const Point3> samples,
                                                          std::span<const double> arc,
                                                          double window) {
  const std::size_t n = samples.size();
  std::vector<std::vector<PairCandidate>> rows(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t a = 0; a < count; ++a) {
    scan_row(samples, arc, window, static_cast<std::size_t>(a), rows[static_cast<std::size_t>(a)]);
  }
  std::vector<PairCandidate> out;
  for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace bziso::kernels
