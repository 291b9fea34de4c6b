#include "bziso/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "bziso/errors.hpp"

namespace bziso {

ControlPolygon::ControlPolygon(std::vector<Point3> vertices, ParamInterval interval)
    : vertices_(std::move(vertices)), interval_(interval) {
  if (vertices_.empty()) throw DomainError("control polygon needs at least one vertex");
  if (!(interval_.lo < interval_.hi) || !std::isfinite(interval_.lo) ||
      !std::isfinite(interval_.hi)) {
    throw DomainError("control polygon parameter interval must satisfy lo < hi");
  }
  for (const auto& p : vertices_) {
    if (!is_finite(p)) throw DomainError("control polygon vertex is not finite");
  }
}

CompositeBezier::CompositeBezier(std::vector<std::vector<Point3>> segments) {
  if (segments.empty()) throw DomainError("composite curve needs at least one segment");
  const std::size_t count = segments.size();
  degree_ = static_cast<int>(segments.front().size()) - 1;
  if (degree_ < 1) throw DomainError("segment degree must be at least 1");

  segments_.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (static_cast<int>(segments[k].size()) - 1 != degree_) {
      throw DomainError("segment " + std::to_string(k) + " has degree " +
                        std::to_string(static_cast<int>(segments[k].size()) - 1) +
                        ", expected " + std::to_string(degree_));
    }
    if (k > 0 && !(segments_.back().back() == segments[k].front())) {
      throw ValidationError("shared_junction",
                            "junction " + std::to_string(k - 1) + " between segments " +
                                std::to_string(k - 1) + " and " + std::to_string(k) +
                                " does not share an endpoint");
    }
    const double lo = static_cast<double>(k) / static_cast<double>(count);
    const double hi = static_cast<double>(k + 1) / static_cast<double>(count);
    segments_.emplace_back(std::move(segments[k]), ParamInterval{lo, hi});
  }
}

std::pair<std::size_t, double> CompositeBezier::locate(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("parameter t must lie in [0,1]");
  const double scaled = t * static_cast<double>(segments_.size());
  auto k = static_cast<std::size_t>(std::floor(scaled));
  if (k >= segments_.size()) k = segments_.size() - 1;
  const double s = std::clamp(scaled - static_cast<double>(k), 0.0, 1.0);
  return {k, s};
}

std::vector<Point3> CompositeBezier::all_control_points() const {
  std::vector<Point3> out;
  out.reserve(segments_.size() * static_cast<std::size_t>(degree_) + 1);
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    auto v = segments_[k].vertices();
    out.insert(out.end(), v.begin() + (k == 0 ? 0 : 1), v.end());
  }
  return out;
}

namespace {

Point3 de_casteljau_inplace(std::span<Point3> work, double s) {
  for (std::size_t level = work.size(); level > 1; --level) {
    for (std::size_t j = 0; j + 1 < level; ++j) work[j] = lerp(work[j], work[j + 1], s);
  }
  return work.front();
}

}  // namespace

Point3 de_casteljau(std::span<const Point3> pts, double s) {
  if (pts.empty()) throw DomainError("de Casteljau needs at least one point");
  constexpr std::size_t kStack = 24;
  if (pts.size() <= kStack) {
    std::array<Point3, kStack> buffer;
    std::copy(pts.begin(), pts.end(), buffer.begin());
    return de_casteljau_inplace(std::span<Point3>(buffer.data(), pts.size()), s);
  }
  std::vector<Point3> work(pts.begin(), pts.end());
  return de_casteljau_inplace(work, s);
}

Point3 evaluate(const CompositeBezier& curve, double t) {
  const auto [k, s] = curve.locate(t);
  return de_casteljau(curve.segment(k).vertices(), s);
}

Vec3 evaluate_derivative(const CompositeBezier& curve, double t) {
  const auto [k, s] = curve.locate(t);
  return de_casteljau(discrete_derivative(curve.segment(k)).vertices(), s);
}

Vec3 evaluate_second_derivative(const CompositeBezier& curve, double t) {
  const auto [k, s] = curve.locate(t);
  const auto first = discrete_derivative(curve.segment(k));
  if (first.size() < 2) return {};
  return de_casteljau(discrete_derivative(first).vertices(), s);
}

std::pair<ControlPolygon, ControlPolygon> subdivide_once(const ControlPolygon& polygon) {
  const std::size_t count = polygon.size();
  std::vector<Point3> work(polygon.vertices().begin(), polygon.vertices().end());
  std::vector<Point3> left(count);
  std::vector<Point3> right(count);
  // Row r of the triangle has count - r points; its first goes left, its last right.
  for (std::size_t r = 0; r < count; ++r) {
    left[r] = work.front();
    right[count - 1 - r] = work[count - 1 - r];
    for (std::size_t j = 0; j + 1 < count - r; ++j) work[j] = midpoint(work[j], work[j + 1]);
  }
  const auto& iv = polygon.interval();
  return {ControlPolygon(std::move(left), {iv.lo, iv.mid()}),
          ControlPolygon(std::move(right), {iv.mid(), iv.hi})};
}

SubdivisionResult subdivide(const CompositeBezier& curve, int iterations,
                            const SubdivisionOptions& options) {
  if (iterations < 0) throw DomainError("iteration count must be nonnegative");
  if (iterations > options.max_iterations) {
    throw ResourceError("subdivision iterations " + std::to_string(iterations) +
                        " exceed the cap " + std::to_string(options.max_iterations));
  }
  const double vertex_count = static_cast<double>(curve.segment_count()) *
                                  std::ldexp(1.0, iterations) * curve.degree() +
                              1.0;
  if (vertex_count > static_cast<double>(options.max_vertices)) {
    throw ResourceError("subdivision to " + std::to_string(iterations) +
                        " iterations needs more than " + std::to_string(options.max_vertices) +
                        " vertices");
  }

  std::vector<ControlPolygon> pieces(curve.segments().begin(), curve.segments().end());
  for (int it = 0; it < iterations; ++it) {
    std::vector<ControlPolygon> next(pieces.size() * 2);
    const auto count = static_cast<std::ptrdiff_t>(pieces.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      auto halves = subdivide_once(pieces[static_cast<std::size_t>(k)]);
      next[2 * static_cast<std::size_t>(k)] = std::move(halves.first);
      next[2 * static_cast<std::size_t>(k) + 1] = std::move(halves.second);
    }
    pieces = std::move(next);
  }

  SubdivisionResult result;
  result.iterations = iterations;
  result.union_polygon = concatenate(pieces);
  result.pieces = std::move(pieces);
  return result;
}

ControlPolygon hodograph(const ControlPolygon& polygon) {
  const int n = polygon.degree();
  if (n < 1) throw DomainError("hodograph of a degree-0 polygon is undefined");
  std::vector<Point3> out(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (polygon[j + 1] - polygon[j]) * n;
  return ControlPolygon(std::move(out), polygon.interval());
}

ControlPolygon discrete_derivative(const ControlPolygon& polygon) {
  const int n = polygon.degree();
  if (n < 1) throw DomainError("discrete derivative of a single vertex is undefined");
  const double scale = static_cast<double>(n) / polygon.interval().width();
  std::vector<Point3> out(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (polygon[j + 1] - polygon[j]) * scale;
  return ControlPolygon(std::move(out), polygon.interval());
}

Point3 pl_evaluate(const ControlPolygon& polygon, double t) {
  const auto& iv = polygon.interval();
  const double slack = 1e-12 * std::max(1.0, std::abs(iv.hi));
  if (!(t >= iv.lo - slack && t <= iv.hi + slack)) {
    throw DomainError("parameter outside the polygon's interval");
  }
  const int n = polygon.degree();
  if (n == 0) return polygon.front();
  const double u = std::clamp((t - iv.lo) / iv.width(), 0.0, 1.0) * n;
  auto j = static_cast<std::size_t>(std::floor(u));
  if (j >= static_cast<std::size_t>(n)) j = static_cast<std::size_t>(n) - 1;
  return lerp(polygon[j], polygon[j + 1], u - static_cast<double>(j));
}

ControlPolygon concatenate(std::span<const ControlPolygon> pieces) {
  if (pieces.empty()) throw DomainError("nothing to concatenate");
  std::vector<Point3> vertices;
  std::size_t total = 1;
  for (const auto& p : pieces) total += p.size() - 1;
  vertices.reserve(total);
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    auto v = pieces[k].vertices();
    vertices.insert(vertices.end(), v.begin() + (k == 0 ? 0 : 1), v.end());
  }
  return ControlPolygon(std::move(vertices),
                        {pieces.front().interval().lo, pieces.back().interval().hi});
}

std::vector<double> aligned_parameters(const ControlPolygon& polygon, int samples) {
  if (samples < 2) throw DomainError("need at least two samples");
  const auto& iv = polygon.interval();
  const int n = polygon.degree();
  std::vector<double> params;
  params.reserve(static_cast<std::size_t>(samples + n + 1));
  for (int k = 0; k < samples; ++k) {
    params.push_back(iv.lo + iv.width() * static_cast<double>(k) / (samples - 1));
  }
  for (int j = 0; j <= n; ++j) {
    params.push_back(n == 0 ? iv.lo : iv.lo + iv.width() * static_cast<double>(j) / n);
  }
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  return params;
}

}  // namespace bziso
