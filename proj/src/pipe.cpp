#include "bziso/pipe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bziso/errors.hpp"
#include "bziso/kernels.hpp"

namespace bziso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec3 any_perpendicular(const Vec3& t) {
  const Vec3 axis = std::abs(t.x) <= std::abs(t.y) && std::abs(t.x) <= std::abs(t.z)
                        ? Vec3{1, 0, 0}
                        : (std::abs(t.y) <= std::abs(t.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  const Vec3 p = cross(t, axis);
  return p / norm(p);
}

struct Refined {
  double t = 0.0;
  double s = 0.0;
  double d = kInf;
};

// Gauss-Newton on F(t,s) = B(t) - B(s) over the unit square.
Refined refine_pair(const CompositeBezier& curve, double t, double s) {
  Vec3 f = evaluate(curve, t) - evaluate(curve, s);
  double g = squared_norm(f);
  for (int it = 0; it < 60 && g > 0.0; ++it) {
    const Vec3 jt = evaluate_derivative(curve, t);
    const Vec3 js = -evaluate_derivative(curve, s);
    const double a11 = dot(jt, jt), a12 = dot(jt, js), a22 = dot(js, js);
    const double b1 = -dot(jt, f), b2 = -dot(js, f);
    const double det = a11 * a22 - a12 * a12;
    double dt, ds;
    if (det > 1e-14 * a11 * a22) {
      dt = (b1 * a22 - b2 * a12) / det;
      ds = (a11 * b2 - a12 * b1) / det;
    } else {
      const double scale = 1.0 / std::max(a11 + a22, 1e-300);
      dt = b1 * scale;
      ds = b2 * scale;
    }
    bool improved = false;
    for (double lambda = 1.0; lambda > 1e-9; lambda /= 2.0) {
      const double nt = std::clamp(t + lambda * dt, 0.0, 1.0);
      const double ns = std::clamp(s + lambda * ds, 0.0, 1.0);
      const Vec3 nf = evaluate(curve, nt) - evaluate(curve, ns);
      const double ng = squared_norm(nf);
      if (ng < g) {
        const double moved = std::abs(nt - t) + std::abs(ns - s);
        t = nt;
        s = ns;
        f = nf;
        g = ng;
        improved = moved > 1e-15;
        break;
      }
    }
    if (!improved) break;
  }
  return {std::min(t, s), std::max(t, s), std::sqrt(g)};
}

}  // namespace

double curvature(const CompositeBezier& curve, double t) {
  const Vec3 d1 = evaluate_derivative(curve, t);
  const Vec3 d2 = evaluate_second_derivative(curve, t);
  const double speed = norm(d1);
  if (speed == 0.0) throw RegularityError("zero tangent at t = " + std::to_string(t));
  return norm(cross(d1, d2)) / (speed * speed * speed);
}

std::vector<Frame> frames(const CompositeBezier& curve, std::span<const double> params) {
  std::vector<Frame> out(params.size());
  const auto pts = curve.all_control_points();
  const double scale = std::max(bbox_diagonal(pts), 1e-300);
  Point3 previous_point{};
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double t = params[k];
    const Vec3 d1 = evaluate_derivative(curve, t);
    const Vec3 d2 = evaluate_second_derivative(curve, t);
    const double speed = norm(d1);
    if (speed == 0.0) throw RegularityError("zero tangent at t = " + std::to_string(t));
    Frame fr;
    fr.tangent = d1 / speed;
    const Point3 here = evaluate(curve, t);
    const double kappa = norm(cross(d1, d2)) / (speed * speed * speed);
    if (kappa * scale > 1e-8) {
      const Vec3 n = d2 - dot(d2, fr.tangent) * fr.tangent;
      fr.normal = n / norm(n);
    } else {
      fr.rotation_minimizing = true;
      if (k == 0) {
        fr.normal = any_perpendicular(fr.tangent);
      } else {
        // Double reflection from the previous frame.
        const Frame& prev = out[k - 1];
        Vec3 r = prev.normal;
        Vec3 tl = prev.tangent;
        const Vec3 v1 = here - previous_point;
        const double c1 = dot(v1, v1);
        if (c1 > 0.0) {
          r = r - (2.0 / c1) * dot(v1, r) * v1;
          tl = tl - (2.0 / c1) * dot(v1, tl) * v1;
        }
        const Vec3 v2 = fr.tangent - tl;
        const double c2 = dot(v2, v2);
        if (c2 > 0.0) r = r - (2.0 / c2) * dot(v2, r) * v2;
        r = r - dot(r, fr.tangent) * fr.tangent;
        const double rn = norm(r);
        fr.normal = rn > 0.0 ? r / rn : any_perpendicular(fr.tangent);
      }
    }
    fr.binormal = cross(fr.tangent, fr.normal);
    out[k] = fr;
    previous_point = here;
  }
  return out;
}

PipeEstimate estimate_pipe_radius(const CompositeBezier& curve, const PipeOptions& options) {
  if (options.density < 2) throw DomainError("pipe sample density must be at least 2");
  if (!(options.safety > 0.0 && options.safety <= 1.0)) {
    throw DomainError("safety factor must lie in (0, 1]");
  }
  const auto control = curve.all_control_points();
  const double diag = bbox_diagonal(control);

  PipeEstimate est;
  est.safety_factor = options.safety;
  est.sample_density = options.density;
  est.radius_cap = options.max_radius.value_or(diag);
  if (!(est.radius_cap > 0.0)) throw DomainError("radius cap must be positive");

  const std::size_t count =
      static_cast<std::size_t>(options.density) * curve.segment_count() + 1;
  const double step = 1.0 / static_cast<double>(count - 1);
  std::vector<Point3> samples(count);
  std::vector<double> kappa(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * step;
    const Vec3 d1 = evaluate_derivative(curve, t);
    const Vec3 d2 = evaluate_second_derivative(curve, t);
    const double speed = norm(d1);
    samples[static_cast<std::size_t>(k)] = evaluate(curve, t);
    kappa[static_cast<std::size_t>(k)] =
        speed > 0.0 ? norm(cross(d1, d2)) / (speed * speed * speed) : kInf;
  }
  est.curvature_bound = *std::max_element(kappa.begin(), kappa.end());
  if (std::isinf(est.curvature_bound)) throw RegularityError("zero tangent on the sample grid");

  std::vector<double> arc(count, 0.0);
  for (std::size_t k = 1; k < count; ++k) arc[k] = arc[k - 1] + distance(samples[k - 1], samples[k]);
  const double total = arc.back();
  if (!(total > 0.0)) throw RegularityError("curve has zero length");
  for (auto& a : arc) a /= total;
  double window = 0.0;
  for (std::size_t k = 0; k + 4 < count; ++k) window = std::max(window, arc[k + 4] - arc[k]);
  est.window = window;

  auto arc_at = [&](double t) {
    const double u = t * static_cast<double>(count - 1);
    const auto k = std::min(static_cast<std::size_t>(u), count - 2);
    return arc[k] + (arc[k + 1] - arc[k]) * (u - static_cast<double>(k));
  };

  const auto candidates = kernels::distance_local_minima_parallel(samples, arc, window);
  const double touch = 1e-8 * std::max(diag, 1e-300);
  const double sin_tol = std::sin(options.angle_tolerance);

  Refined best;
  bool crossed = false;
  Refined crossing;
  const auto nc = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel
  {
    Refined local;
    bool local_crossed = false;
    Refined local_crossing;
#pragma omp for schedule(dynamic, 8) nowait
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
      const auto& cand = candidates[static_cast<std::size_t>(c)];
      const Refined r = refine_pair(curve, static_cast<double>(cand.a) * step,
                                    static_cast<double>(cand.b) * step);
      if (arc_at(r.s) - arc_at(r.t) <= window) continue;
      if (r.d <= touch) {
        if (!local_crossed || r.t < local_crossing.t) local_crossing = r;
        local_crossed = true;
        continue;
      }
      const Vec3 chord = evaluate(curve, r.s) - evaluate(curve, r.t);
      const double len = norm(chord);
      auto orthogonal_at = [&](double u) {
        if (u <= 0.0 || u >= 1.0) return true;
        const Vec3 tan = evaluate_derivative(curve, u);
        return std::abs(dot(chord, tan)) <= sin_tol * len * norm(tan);
      };
      if (!orthogonal_at(r.t) || !orthogonal_at(r.s)) continue;
      if (r.d < local.d || (r.d == local.d && r.t < local.t)) local = r;
    }
#pragma omp critical(bziso_pipe_reduce)
    {
      if (local.d < best.d || (local.d == best.d && local.t < best.t)) best = local;
      if (local_crossed && (!crossed || local_crossing.t < crossing.t)) crossing = local_crossing;
      crossed = crossed || local_crossed;
    }
  }
  if (crossed) {
    throw NotSimpleError("spine self-intersects near t = " + std::to_string(crossing.t) +
                             " and s = " + std::to_string(crossing.s),
                         crossing.t, crossing.s);
  }

  est.min_self_distance = best.d;
  if (std::isfinite(best.d)) est.critical_pair = std::pair(best.t, best.s);

  const double from_curvature = est.curvature_bound > 0.0 ? 1.0 / est.curvature_bound : kInf;
  const double from_distance = est.min_self_distance / 2.0;
  double limit = est.radius_cap;
  est.limiting_term = "cap";
  if (from_curvature < limit) {
    limit = from_curvature;
    est.limiting_term = "curvature";
  }
  if (from_distance < limit) {
    limit = from_distance;
    est.limiting_term = "self_distance";
  }
  est.radius = options.safety * limit;
  return est;
}

Containment pipe_contains(const CompositeBezier& curve, const ControlPolygon& polygon, double r,
                          int samples) {
  const auto params = aligned_parameters(polygon, samples);
  const auto worst = kernels::max_distance_parallel(curve, polygon, params);
  return {worst.value < r, worst.value, worst.argmax};
}

TriangleMesh pipe_surface_mesh(const CompositeBezier& curve, double r, int density_t,
                               int density_theta) {
  if (!(r > 0.0)) throw DomainError("pipe radius must be positive");
  if (density_t < 1 || density_theta < 3) {
    throw DomainError("mesh needs density_t >= 1 and density_theta >= 3");
  }
  std::vector<double> params(static_cast<std::size_t>(density_t) + 1);
  for (std::size_t k = 0; k < params.size(); ++k) {
    params[k] = static_cast<double>(k) / density_t;
  }
  const auto fr = frames(curve, params);

  TriangleMesh mesh;
  const auto ring = static_cast<std::size_t>(density_theta);
  mesh.ring_size = ring;
  mesh.spine.reserve(params.size());
  mesh.vertices.reserve(params.size() * ring);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Point3 c = evaluate(curve, params[k]);
    mesh.spine.push_back(c);
    for (std::size_t j = 0; j < ring; ++j) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / density_theta;
      mesh.vertices.push_back(c + r * (std::cos(theta) * fr[k].normal +
                                       std::sin(theta) * fr[k].binormal));
    }
  }
  for (std::size_t k = 0; k + 1 < params.size(); ++k) {
    for (std::size_t j = 0; j < ring; ++j) {
      const std::size_t v00 = k * ring + j;
      const std::size_t v01 = k * ring + (j + 1) % ring;
      const std::size_t v10 = (k + 1) * ring + j;
      const std::size_t v11 = (k + 1) * ring + (j + 1) % ring;
      mesh.faces.push_back({v00, v10, v11});
      mesh.faces.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

}  // namespace bziso
