#include "bziso/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "bziso/errors.hpp"

namespace bziso {

namespace {

double angle_with_eps(const Point3& a, const Point3& b, const Point3& c, double eps,
                      std::size_t edge_index) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - b;
  if (norm(e1) <= eps) throw DegenerateEdgeError("zero-length edge", edge_index);
  if (norm(e2) <= eps) throw DegenerateEdgeError("zero-length edge", edge_index + 1);
  return angle_between(e1, e2);
}

}  // namespace

double exterior_angle(const Point3& a, const Point3& b, const Point3& c, double eps) {
  if (eps < 0.0) {
    const Point3 pts[] = {a, b, c};
    eps = 1e-12 * bbox_diagonal(pts);
  }
  return angle_with_eps(a, b, c, eps, 0);
}

double total_curvature(std::span<const Point3> polyline, bool closed) {
  std::size_t count = polyline.size();
  if (closed && count > 1 && polyline.front() == polyline.back()) --count;
  const double eps = 1e-12 * bbox_diagonal(polyline);

  if (!closed) {
    double sum = 0.0;
    for (std::size_t m = 1; m + 1 < count; ++m) {
      sum += angle_with_eps(polyline[m - 1], polyline[m], polyline[m + 1], eps, m - 1);
    }
    return sum;
  }

  if (count < 3) throw DomainError("closed polyline needs at least three distinct vertices");
  double sum = 0.0;
  for (std::size_t m = 0; m < count; ++m) {
    const std::size_t prev = (m + count - 1) % count;
    const std::size_t next = (m + 1) % count;
    sum += angle_with_eps(polyline[prev], polyline[m], polyline[next], eps, prev);
  }
  return sum;
}

double total_curvature(const ControlPolygon& polygon, bool closed) {
  return total_curvature(polygon.vertices(), closed);
}

SecondDifference second_difference_norm(std::span<const Point3> vertices) {
  SecondDifference out;
  if (vertices.size() < 3) {
    out.degenerate = true;
    return out;
  }
  double mx = 0.0, my = 0.0, mz = 0.0;
  for (std::size_t m = 1; m + 1 < vertices.size(); ++m) {
    const Vec3 d = vertices[m - 1] - 2.0 * vertices[m] + vertices[m + 1];
    mx = std::max(mx, std::abs(d.x));
    my = std::max(my, std::abs(d.y));
    mz = std::max(mz, std::abs(d.z));
  }
  out.per_coordinate = {mx, my, mz};
  out.norm = norm(out.per_coordinate);
  return out;
}

SecondDifference second_difference_norm(const ControlPolygon& polygon) {
  return second_difference_norm(polygon.vertices());
}

double n_infinity(int n) {
  if (n <= 0) throw DomainError("N_inf(n) needs n >= 1");
  const int lo = n / 2;
  const int hi = n - lo;
  return static_cast<double>(lo) * static_cast<double>(hi) / (2.0 * n);
}

double max_first_difference(const CompositeBezier& curve) {
  double best = 0.0;
  for (const auto& seg : curve.segments()) {
    const auto d = discrete_derivative(seg);
    for (std::size_t j = 0; j + 1 < d.size(); ++j) best = std::max(best, distance(d[j], d[j + 1]));
  }
  return best;
}

double hull_distance_lower_bound(std::span<const Vec3> points) {
  if (points.empty()) throw DomainError("empty point set");
  // Frank-Wolfe on min |x|^2 over the hull; every iterate direction yields the
  // separating-plane bound min_j <q_j, x/|x|>.
  Vec3 x = *std::min_element(points.begin(), points.end(), [](const Vec3& a, const Vec3& b) {
    return squared_norm(a) < squared_norm(b);
  });
  double best = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double xn = norm(x);
    if (xn == 0.0) return std::max(best, 0.0);
    std::size_t arg = 0;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < points.size(); ++j) {
      const double v = dot(points[j], x);
      if (v < lowest) {
        lowest = v;
        arg = j;
      }
    }
    best = std::max(best, lowest / xn);
    if (xn - best <= 1e-14 * xn) break;
    const Vec3 d = points[arg] - x;
    const double dd = squared_norm(d);
    if (dd == 0.0) break;
    const double gamma = std::clamp(-dot(x, d) / dd, 0.0, 1.0);
    if (gamma == 0.0) break;
    x += gamma * d;
  }
  return best;
}

namespace {

struct SigmaPiece {
  double lower;
  int depth;
  ControlPolygon polygon;
};

struct ByLower {
  bool operator()(const SigmaPiece& a, const SigmaPiece& b) const { return a.lower > b.lower; }
};

}  // namespace

double min_derivative_norm(const CompositeBezier& curve, const SigmaOptions& options) {
  std::priority_queue<SigmaPiece, std::vector<SigmaPiece>, ByLower> queue;
  for (const auto& seg : curve.segments()) {
    auto h = discrete_derivative(seg);
    const double lb = hull_distance_lower_bound(h.vertices());
    queue.push({lb, 0, std::move(h)});
  }
  std::size_t processed = 0;
  while (!queue.empty()) {
    SigmaPiece top = queue.top();
    queue.pop();
    const double upper = std::min(norm(top.polygon.front()), norm(top.polygon.back()));
    const bool converged = top.lower > 0.0 && upper - top.lower <= options.rel_tolerance * upper;
    const bool exhausted = top.depth >= options.max_depth || processed >= options.max_pieces ||
                           top.polygon.size() == 1;
    if (converged || (exhausted && top.lower > 0.0)) return top.lower;
    if (exhausted) {
      throw RegularityError("cannot certify |B'(t)| > 0 near t = " +
                            std::to_string(top.polygon.interval().mid()));
    }
    auto [left, right] = subdivide_once(top.polygon);
    const double ll = hull_distance_lower_bound(left.vertices());
    const double rl = hull_distance_lower_bound(right.vertices());
    queue.push({ll, top.depth + 1, std::move(left)});
    queue.push({rl, top.depth + 1, std::move(right)});
    ++processed;
  }
  throw RegularityError("empty curve");
}

double b_dist(int iterations, int degree, double delta2_norm) {
  if (iterations < 0) throw DomainError("iteration count must be nonnegative");
  return std::ldexp(1.0, -2 * iterations) * n_infinity(degree) * delta2_norm;
}

double b_prime_dist(int iterations, int degree, double delta2_prime_norm) {
  if (iterations < 0) throw DomainError("iteration count must be nonnegative");
  return b_prime_dist_real(static_cast<double>(iterations), degree, delta2_prime_norm);
}

double b_prime_dist_real(double iterations, int degree, double delta2_prime_norm) {
  if (degree < 2) return 0.0;
  return std::exp2(-2.0 * iterations) * n_infinity(degree - 1) * delta2_prime_norm;
}

GeometricConstants compute_constants(const CompositeBezier& curve,
                                     std::optional<double> pipe_radius,
                                     const SigmaOptions& sigma_options) {
  GeometricConstants gc;
  gc.degree = curve.degree();
  gc.M = max_first_difference(curve);
  gc.sigma = min_derivative_norm(curve, sigma_options);

  Vec3 d2{}, d2p{};
  bool d2_degenerate = false, d2p_degenerate = false;
  for (const auto& seg : curve.segments()) {
    const auto a = second_difference_norm(seg);
    const auto b = second_difference_norm(discrete_derivative(seg));
    d2 = {std::max(d2.x, a.per_coordinate.x), std::max(d2.y, a.per_coordinate.y),
          std::max(d2.z, a.per_coordinate.z)};
    d2p = {std::max(d2p.x, b.per_coordinate.x), std::max(d2p.y, b.per_coordinate.y),
           std::max(d2p.z, b.per_coordinate.z)};
    d2_degenerate = d2_degenerate || a.degenerate;
    d2p_degenerate = d2p_degenerate || b.degenerate;
  }
  gc.delta2_P = {d2, norm(d2), d2_degenerate};
  gc.delta2_Pprime = {d2p, norm(d2p), d2p_degenerate};

  if (pipe_radius && !(*pipe_radius > 0.0)) throw DomainError("pipe radius must be positive");
  gc.pipe_radius = pipe_radius;
  return gc;
}

}  // namespace bziso
