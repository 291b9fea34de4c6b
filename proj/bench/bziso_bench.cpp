// Serial reference kernels against their OpenMP versions, plus end-to-end
// certification. The parallel intersection kernel also prunes with a sorted
// sweep, so its ratio reflects the algorithm as well as the thread count.
// Usage: bziso_bench [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

#include "bziso/kernels.hpp"
#include "bziso/verify.hpp"

using namespace bziso;

namespace {

double best_of(int repeats, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    body();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

/// serial < 0 marks a skipped reference run.
void row(const char* name, std::size_t size, double serial, double parallel) {
  if (serial < 0) {
    std::printf("%-22s %10zu %12s %12.4f %9s\n", name, size, "-", parallel * 1e3, "-");
    return;
  }
  std::printf("%-22s %10zu %12.4f %12.4f %8.2fx\n", name, size, serial * 1e3, parallel * 1e3,
              parallel > 0 ? serial / parallel : 0.0);
}

CompositeBezier spiral(int degree) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  std::vector<Point3> pts;
  for (int j = 0; j <= degree; ++j) {
    const double a = 1.3 * j;
    pts.push_back({std::cos(a) + jitter(rng), std::sin(a) + jitter(rng), 0.4 * j});
  }
  return CompositeBezier({pts});
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads %d, best of %d\n", omp_get_max_threads(), repeats);
  std::printf("%-22s %10s %12s %12s %9s\n", "kernel", "size", "serial ms", "parallel ms", "speedup");

  const auto curve = spiral(5);
  for (int i : {8, 10, 12}) {
    const auto res = subdivide(curve, i);
    const auto pts = res.union_polygon.vertices();
    const double eps = 1e-10 * bbox_diagonal(pts);
    // The serial scan is quadratic; skip it where it would dominate the run.
    const double s = pts.size() <= 6000
                         ? best_of(repeats, [&] { kernels::first_intersection_serial(pts, false, eps); })
                         : -1.0;
    const double p = best_of(repeats, [&] { kernels::first_intersection_parallel(pts, false, eps); });
    row("first_intersection", pts.size(), s, p);

    const auto params = aligned_parameters(res.union_polygon, 2000);
    const double ds = best_of(repeats, [&] { kernels::max_distance_serial(curve, res.union_polygon, params); });
    const double dp = best_of(repeats, [&] { kernels::max_distance_parallel(curve, res.union_polygon, params); });
    row("max_distance", params.size(), ds, dp);
  }

  for (std::size_t count : {500, 2000}) {
    std::vector<Point3> samples;
    std::vector<double> arc{0.0};
    for (std::size_t k = 0; k < count; ++k) {
      samples.push_back(evaluate(curve, static_cast<double>(k) / static_cast<double>(count - 1)));
      if (k > 0) arc.push_back(arc.back() + distance(samples[k - 1], samples[k]));
    }
    for (auto& a : arc) a /= arc.back();
    const double s = best_of(repeats, [&] { kernels::distance_local_minima_serial(samples, arc, 0.05); });
    const double p = best_of(repeats, [&] { kernels::distance_local_minima_parallel(samples, arc, 0.05); });
    row("distance_local_minima", count, s, p);
  }

  for (auto level : {CertificateLevel::SimplePieces, CertificateLevel::Homeomorphic, CertificateLevel::Isotopic}) {
    TopologyCertificate cert;
    const double t = best_of(repeats, [&] { cert = certify(curve, level); });
    std::printf("certify %-14s iterations %2d  verified %d  %10.2f ms\n", std::string(to_string(level)).c_str(),
                cert.iterations, cert.verified ? 1 : 0, t * 1e3);
  }
  return 0;
}
