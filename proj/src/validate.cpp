#include <algorithm>
#include <string>
#include <vector>

#include "bziso/curve.hpp"
#include "bziso/errors.hpp"
#include "bziso/kernels.hpp"
#include "bziso/metrics.hpp"

namespace bziso {

Diagnostics validate(const CompositeBezier& curve, int spot_check_samples) {
  Diagnostics diag;
  const int n = curve.degree();

  double scale = 0.0;
  for (const auto& seg : curve.segments()) {
    const auto h = hodograph(seg);
    for (const auto& v : h.vertices()) scale = std::max(scale, norm(v));
  }
  diag.c1_tolerance = 1e-9 * std::max(scale, 1e-300);
  for (std::size_t k = 0; k + 1 < curve.segment_count(); ++k) {
    const auto& p = curve.segment(k);
    const auto& q = curve.segment(k + 1);
    const Vec3 left = (p[static_cast<std::size_t>(n)] - p[static_cast<std::size_t>(n - 1)]) * n;
    const Vec3 right = (q[1] - q[0]) * n;
    const double residual = norm(left - right);
    diag.c1_residuals.push_back(residual);
    if (residual > diag.c1_tolerance) {
      diag.c1_ok = false;
      diag.violations.push_back("C1: junction " + std::to_string(k) + " tangent mismatch " +
                                std::to_string(residual));
    }
  }

  try {
    diag.sigma = min_derivative_norm(curve);
  } catch (const RegularityError& e) {
    diag.regular = false;
    diag.violations.push_back(std::string("regular: ") + e.what());
  }

  const std::size_t count =
      static_cast<std::size_t>(std::max(spot_check_samples, 2)) * curve.segment_count() + 1;
  std::vector<Point3> samples(count);
  for (std::size_t k = 0; k < count; ++k) {
    samples[k] = evaluate(curve, static_cast<double>(k) / static_cast<double>(count - 1));
  }
  if (diag.regular) {
    const double eps = 1e-10 * bbox_diagonal(samples);
    const auto hit = kernels::first_intersection_parallel(samples, false, eps);
    if (hit.found) {
      diag.spot_check_simple = false;
      const double step = 1.0 / static_cast<double>(count - 1);
      diag.self_intersection = {static_cast<double>(hit.i) * step,
                                static_cast<double>(hit.j) * step};
      diag.violations.push_back("simple: sampled curve edges " + std::to_string(hit.i) + " and " +
                                std::to_string(hit.j) + " meet");
    }
  }
  return diag;
}

}  // namespace bziso
