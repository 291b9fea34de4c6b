#include "bziso/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bziso/errors.hpp"
#include "bziso/kernels.hpp"

namespace bziso {

SimplicityResult is_simple_polyline(std::span<const Point3> polyline, bool closed, double eps) {
  if (eps < 0.0) eps = 1e-10 * bbox_diagonal(polyline);
  const auto hit = kernels::first_intersection_parallel(polyline, closed, eps);
  if (!hit.found) return {};
  return {false, hit.i, hit.j};
}

SampledMax parameterwise_distance(const CompositeBezier& curve, const SubdivisionResult& result,
                                  int samples) {
  const auto params = aligned_parameters(result.union_polygon, samples);
  const auto worst = kernels::max_distance_parallel(curve, result.union_polygon, params);
  return {worst.value, worst.argmax};
}

SampledMax max_derivative_angle(const CompositeBezier& curve, const SubdivisionResult& result,
                                int samples) {
  if (samples < 2) throw DomainError("need at least two samples");
  const auto& poly = result.union_polygon;
  const std::size_t edges = poly.size() - 1;
  const double eps = 1e-14 * bbox_diagonal(poly.vertices());
  for (std::size_t j = 0; j < edges; ++j) {
    if (distance(poly[j], poly[j + 1]) <= eps) {
      throw RegularityError("zero-length polygon edge " + std::to_string(j));
    }
  }

  // Each query: (t, edge index).
  std::vector<std::pair<double, std::size_t>> queries;
  queries.reserve(static_cast<std::size_t>(samples) + 2 * edges);
  const double m = static_cast<double>(edges);
  for (int k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / (samples - 1);
    auto j = static_cast<std::size_t>(std::floor(t * m));
    queries.emplace_back(t, std::min(j, edges - 1));
  }
  for (std::size_t j = 0; j < edges; ++j) {
    queries.emplace_back(static_cast<double>(j) / m, j);
    queries.emplace_back(static_cast<double>(j + 1) / m, j);
  }

  SampledMax best{-1.0, 0.0};
  const auto count = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel
  {
    SampledMax local{-1.0, 0.0};
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t q = 0; q < count; ++q) {
      const auto [t, j] = queries[static_cast<std::size_t>(q)];
      const double angle =
          angle_between(evaluate_derivative(curve, t), poly[j + 1] - poly[j]);
      if (angle > local.value || (angle == local.value && t < local.argmax)) local = {angle, t};
    }
#pragma omp critical(bziso_angle_reduce)
    {
      if (local.value > best.value || (local.value == best.value && local.argmax < best.argmax)) {
        best = local;
      }
    }
  }
  return best;
}

double measure_max_exterior_angle(const SubdivisionResult& result) {
  double best = 0.0;
  for (const auto& piece : result.pieces) {
    const auto v = piece.vertices();
    const double eps = 1e-12 * bbox_diagonal(v);
    for (std::size_t m = 1; m + 1 < v.size(); ++m) {
      best = std::max(best, exterior_angle(v[m - 1], v[m], v[m + 1], eps));
    }
  }
  return best;
}

std::vector<double> piece_total_curvatures(const SubdivisionResult& result) {
  std::vector<double> out(result.pieces.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = total_curvature(result.pieces[k], false);
  return out;
}

bool normal_plane_meets_only_at_start(const ControlPolygon& piece) {
  if (piece.size() < 2) return true;
  const Vec3 d = piece[1] - piece[0];
  const double dn = norm(d);
  if (dn == 0.0) return false;
  const double tol = 1e-12 * bbox_diagonal(piece.vertices());
  for (std::size_t j = 1; j < piece.size(); ++j) {
    if (dot(piece[j] - piece[0], d) / dn <= tol) return false;
  }
  return true;
}

std::string_view to_string(CertificateLevel level) {
  switch (level) {
    case CertificateLevel::SimplePieces:
      return "simple-pieces";
    case CertificateLevel::Homeomorphic:
      return "homeomorphic";
    case CertificateLevel::Isotopic:
      return "isotopic";
  }
  return "unknown";
}

std::optional<CertificateLevel> parse_level(std::string_view text) {
  if (text == "simple" || text == "simple-pieces") return CertificateLevel::SimplePieces;
  if (text == "homeo" || text == "homeomorphic") return CertificateLevel::Homeomorphic;
  if (text == "isotopy" || text == "isotopic") return CertificateLevel::Isotopic;
  return std::nullopt;
}

const Check* TopologyCertificate::failed_check() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

namespace {

TopologyCertificate& fail(TopologyCertificate& cert, std::string name, std::string witness) {
  cert.checks.push_back({std::move(name), false, 0.0, 0.0, std::move(witness)});
  cert.verified = false;
  return cert;
}

Check pieces_simple_check(const SubdivisionResult& result) {
  const auto count = static_cast<std::ptrdiff_t>(result.pieces.size());
  std::ptrdiff_t first_bad = count;
#pragma omp parallel for schedule(static) reduction(min : first_bad)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto& piece = result.pieces[static_cast<std::size_t>(k)];
    if (!is_simple_polyline(piece.vertices(), false).simple) first_bad = std::min(first_bad, k);
  }
  Check c{"piece_simple", first_bad == count, 0.0, 0.0, ""};
  if (!c.passed) c.witness = "piece " + std::to_string(first_bad);
  return c;
}

Check global_simple_check(const SubdivisionResult& result) {
  const auto s = is_simple_polyline(result.union_polygon.vertices(), false);
  Check c{"global_simple", s.simple, 0.0, 0.0, ""};
  if (!s.simple) {
    c.witness = "edges " + std::to_string(s.edge_a) + " and " + std::to_string(s.edge_b);
  }
  return c;
}

Check curvature_check(const SubdivisionResult& result, std::string name, double limit) {
  Check c{std::move(name), false, 0.0, limit, ""};
  try {
    const auto curv = piece_total_curvatures(result);
    const auto it = std::max_element(curv.begin(), curv.end());
    c.value = *it;
    c.passed = c.value < limit;
    c.witness = "piece " + std::to_string(it - curv.begin());
  } catch (const DegenerateEdgeError& e) {
    c.witness = std::string("degenerate edge: ") + e.what();
  }
  return c;
}

}  // namespace

TopologyCertificate certify(const CompositeBezier& curve, CertificateLevel level,
                            const CertifyOptions& options) {
  TopologyCertificate cert;
  cert.level = level;
  cert.samples = options.samples;
  const int n = curve.degree();

  const auto diag = validate(curve, 2);
  if (!diag.c1_ok) {
    const double worst = *std::max_element(diag.c1_residuals.begin(), diag.c1_residuals.end());
    cert.checks.push_back({"c1_junctions", false, worst, diag.c1_tolerance, diag.violations.front()});
    return cert;
  }

  std::optional<double> radius = options.pipe_radius;
  if (radius) {
    if (!(*radius > 0.0)) return fail(cert, "pipe_radius", "supplied radius is not positive");
  } else {
    try {
      cert.pipe = estimate_pipe_radius(curve, options.pipe);
      radius = cert.pipe->radius;
    } catch (const NotSimpleError& e) {
      return fail(cert, "pipe_radius", e.what());
    } catch (const RegularityError& e) {
      return fail(cert, "pipe_radius", e.what());
    }
  }

  try {
    cert.constants = compute_constants(curve, radius, options.sigma);
  } catch (const RegularityError& e) {
    return fail(cert, "regularity", e.what());
  }
  const auto& gc = *cert.constants;

  std::vector<double> nus;
  if (n >= 3) nus = {std::numbers::pi / (n - 1), std::numbers::pi / (2.0 * (n - 1))};
  try {
    cert.bounds = compute_bounds(gc, nus);
  } catch (const InconsistentConstantsError& e) {
    return fail(cert, "bounds", e.what());
  }
  const auto& b = *cert.bounds;
  switch (level) {
    case CertificateLevel::SimplePieces:
      cert.iterations = b.simplicity;
      break;
    case CertificateLevel::Homeomorphic:
      cert.iterations = b.N_hat;
      break;
    case CertificateLevel::Isotopic:
      cert.iterations = b.N_star;
      break;
  }
  cert.verification_iterations = cert.iterations + 1;

  SubdivisionResult result;
  try {
    result = subdivide(curve, cert.verification_iterations, options.subdivision);
  } catch (const ResourceError& e) {
    return fail(cert, "subdivision_budget", e.what());
  }

  cert.checks.push_back(pieces_simple_check(result));
  if (n <= 2) {
    // Three control points of a regular curve: planar, open, no folds.
    cert.checks.push_back(global_simple_check(result));
    cert.checks.push_back({"low_degree", gc.sigma > 0.0, gc.sigma, 0.0, "degree " + std::to_string(n)});
  } else {
    const double pi = std::numbers::pi;
    if (level == CertificateLevel::SimplePieces) {
      cert.checks.push_back(curvature_check(result, "piece_total_curvature_lt_pi", pi));
    } else {
      cert.checks.push_back(curvature_check(result, "piece_total_curvature_lt_half_pi", pi / 2.0));
      bool planes_ok = true;
      std::size_t bad_piece = 0;
      for (std::size_t k = 0; k < result.pieces.size() && planes_ok; ++k) {
        if (!normal_plane_meets_only_at_start(result.pieces[k])) {
          planes_ok = false;
          bad_piece = k;
        }
      }
      cert.checks.push_back({"normal_plane_single_point", planes_ok, 0.0, 0.0,
                             planes_ok ? "" : "piece " + std::to_string(bad_piece)});
      cert.checks.push_back(global_simple_check(result));

      const auto dist = parameterwise_distance(curve, result, options.samples);
      cert.checks.push_back({"pipe_containment", dist.value < *radius, dist.value, *radius,
                             "t = " + std::to_string(dist.argmax)});
      if (level == CertificateLevel::Isotopic) {
        cert.checks.push_back({"distance_lt_half_r", dist.value < *radius / 2.0, dist.value,
                               *radius / 2.0, "t = " + std::to_string(dist.argmax)});
        try {
          const auto ang = max_derivative_angle(curve, result, options.samples);
          cert.checks.push_back({"derivative_angle_lt_pi_over_6", ang.value < pi / 6.0, ang.value,
                                 pi / 6.0, "t = " + std::to_string(ang.argmax)});
        } catch (const RegularityError& e) {
          cert.checks.push_back({"derivative_angle_lt_pi_over_6", false, 0.0, pi / 6.0, e.what()});
        }
      }
    }
  }

  cert.verified = std::all_of(cert.checks.begin(), cert.checks.end(),
                              [](const Check& c) { return c.passed; });
  return cert;
}

}  // namespace bziso
