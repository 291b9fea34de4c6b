#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bziso/errors.hpp"
#include "bziso/verify.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace bziso;
using namespace bziso::testing;

namespace {

constexpr double kPi = std::numbers::pi;

const Check* find_check(const TopologyCertificate& cert, std::string_view name) {
  for (const auto& c : cert.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("simplicity oracle on elementary polylines") {
  const std::vector<Point3> square{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  CHECK(is_simple_polyline(square, false).simple);
  CHECK(is_simple_polyline(square, true).simple);

  const std::vector<Point3> bowtie{{0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}};
  const auto b = is_simple_polyline(bowtie, false);
  CHECK_FALSE(b.simple);
  CHECK(b.edge_a == 0);
  CHECK(b.edge_b == 2);

  const std::vector<Point3> repeated{{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  const auto r = is_simple_polyline(repeated, false);
  CHECK_FALSE(r.simple);
  // Edges 0 and 2 are not adjacent but share the repeated vertex.
  CHECK(r.edge_a == 0);
  CHECK(r.edge_b == 2);

  const std::vector<Point3> backtrack{{0, 0, 0}, {2, 0, 0}, {1, 0, 0}};
  CHECK_FALSE(is_simple_polyline(backtrack, false).simple);
}

TEST_CASE("chains turning less than pi are simple") {
  Rng rng(61);
  for (int k = 0; k < 300; ++k) {
    const auto p = small_angle_chain(rng, 4 + k % 40, 0.999 * kPi);
    REQUIRE(total_curvature(p, false) < kPi);
    CHECK(is_simple_polyline(p, false).simple);
  }
}

TEST_CASE("simplicity agrees with the orientation predicate") {
  Rng rng(62);
  int band = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t count = 4 + k % 47;
    auto p = random_polyline(rng, count, true);
    if (k % 3 == 0) {
      // Small integer grid: exact touches and collinear overlaps are common.
      for (auto& v : p) v = {std::round(v.x * 3), std::round(v.y * 3), 0.0};
    }
    const bool closed = k % 4 == 1;
    const double eps = 1e-10 * bbox_diagonal(p);
    const bool ours = is_simple_polyline(p, closed, eps).simple;
    const bool theirs = simple2d(p, closed);
    if (ours != theirs) {
      ++band;
      CHECK(closest_approach2d(p, closed) <= 2 * eps);
    }
  }
  CHECK(band <= 5);
}

TEST_CASE("parameterwise distance") {
  const auto line = straight_line(4);
  for (int i = 0; i <= 4; ++i) {
    CHECK(parameterwise_distance(line, subdivide(line, i), 500).value < 1e-14);
  }
  Rng rng(63);
  for (int degree = 2; degree <= 5; ++degree) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto c = random_regular_curve(rng, degree);
      const auto gc = compute_constants(c);
      for (int i = 0; i <= 6; ++i) {
        const auto res = subdivide(c, i);
        const auto d = parameterwise_distance(c, res, 1000);
        CHECK(d.value <= b_dist(i, degree, gc.delta2_P.norm) + 1e-9 * (1 + gc.delta2_P.norm));
        // The reported argmax attains the value.
        CHECK(distance(pl_evaluate(res.union_polygon, d.argmax), evaluate(c, d.argmax)) == d.value);
      }
    }
  }
}

TEST_CASE("dense nodes drive the parameterwise distance to zero") {
  Rng rng(64);
  const auto c = random_regular_curve(rng, 3);
  std::vector<Point3> samples;
  for (int k = 0; k <= 3000; ++k) samples.push_back(evaluate(c, k / 3000.0));
  SubdivisionResult fake;
  fake.union_polygon = ControlPolygon(samples);
  CHECK(parameterwise_distance(c, fake, 1000).value < 1e-5);
}

TEST_CASE("derivative angle") {
  const auto line = straight_line(3);
  CHECK(max_derivative_angle(line, subdivide(line, 2), 400).value < 1e-7);

  Rng rng(65);
  const auto pts = monotone_polygon(rng, 4);
  auto scaled = pts;
  for (auto& p : scaled) p = 7.5 * p;
  const auto a = max_derivative_angle(single_segment(pts), subdivide(single_segment(pts), 3), 500);
  const auto b = max_derivative_angle(single_segment(scaled), subdivide(single_segment(scaled), 3), 500);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
  CHECK(a.argmax == b.argmax);

  // Brute-force restatement over the union polygon edges.
  const auto res = subdivide(single_segment(pts), 3);
  const auto& u = res.union_polygon;
  const std::size_t m = u.size() - 1;
  double worst = 0.0;
  for (int k = 0; k <= 499; ++k) {
    const double t = k / 499.0;
    const std::size_t e = std::min(static_cast<std::size_t>(t * m), m - 1);
    worst = std::max(worst, angle_between(central_difference(single_segment(pts), t, 1e-7), u[e + 1] - u[e]));
  }
  CHECK(a.value >= worst - 1e-5);

  SubdivisionResult degenerate;
  degenerate.union_polygon = ControlPolygon({{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {2, 0, 0}});
  CHECK_THROWS_AS(max_derivative_angle(line, degenerate, 10), RegularityError);
}

TEST_CASE("exterior angles and per-piece curvature") {
  const auto line = straight_line(5);
  CHECK(measure_max_exterior_angle(subdivide(line, 3)) < 1e-7);
  for (double k : piece_total_curvatures(subdivide(line, 2))) CHECK(k < 1e-7);

  Rng rng(66);
  const auto c = random_regular_curve(rng, 5);
  double previous = 10.0;
  for (int i = 0; i <= 10; ++i) {
    const auto res = subdivide(c, i);
    const double a = measure_max_exterior_angle(res);
    if (i >= 3) CHECK(a <= previous);
    previous = a;
    const auto curv = piece_total_curvatures(res);
    CHECK(curv.size() == res.pieces.size());
    for (std::size_t k = 0; k < curv.size(); ++k) {
      CHECK(curv[k] == doctest::Approx(total_curvature(res.pieces[k], false)));
    }
  }
}

TEST_CASE("normal plane test") {
  const ControlPolygon flat({{0, 0, 0}, {1, 0, 0}, {2, 0.5, 0}, {3, 0.5, 0}});
  CHECK(normal_plane_meets_only_at_start(flat));
  const ControlPolygon hook({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {-0.5, 1, 0}});
  CHECK_FALSE(normal_plane_meets_only_at_start(hook));

  // Pieces with total curvature below pi/2 pass, checked against plane crossings.
  Rng rng(67);
  for (int k = 0; k < 300; ++k) {
    const auto p = small_angle_chain(rng, 3 + k % 8, kPi / 2);
    REQUIRE(total_curvature(p, false) < kPi / 2);
    const ControlPolygon poly(p);
    CHECK(normal_plane_meets_only_at_start(poly));
    const Vec3 d = p[1] - p[0];
    for (std::size_t j = 1; j + 1 < p.size(); ++j) {
      const double h0 = dot(p[j] - p[0], d), h1 = dot(p[j + 1] - p[0], d);
      CHECK((h0 > 0 && h1 > 0));
    }
  }
}

TEST_CASE("level names") {
  CHECK(parse_level("simple") == CertificateLevel::SimplePieces);
  CHECK(parse_level("homeo") == CertificateLevel::Homeomorphic);
  CHECK(parse_level("isotopy") == CertificateLevel::Isotopic);
  CHECK(parse_level("isotopic") == CertificateLevel::Isotopic);
  CHECK_FALSE(parse_level("knot").has_value());
  CHECK(to_string(CertificateLevel::Homeomorphic) == "homeomorphic");
}

TEST_CASE("straight line certifies at every level with no subdivision") {
  for (auto level : {CertificateLevel::SimplePieces, CertificateLevel::Homeomorphic,
                     CertificateLevel::Isotopic}) {
    for (int n : {1, 2, 3, 5}) {
      const auto cert = certify(straight_line(n), level);
      CHECK(cert.verified);
      CHECK(cert.iterations == 0);
      CHECK(cert.verification_iterations == 1);
      CHECK(cert.failed_check() == nullptr);
    }
  }
}

TEST_CASE("planar quadratic certifies as isotopic") {
  const auto cert =
      certify(single_segment({{0, 0, 0}, {1, 1, 0}, {2, 0, 0}}), CertificateLevel::Isotopic);
  CHECK(cert.verified);
  REQUIRE(cert.constants.has_value());
  CHECK(cert.constants->degree == 2);
  CHECK(find_check(cert, "low_degree") != nullptr);
}

TEST_CASE("self-intersecting spine fails at the pipe radius") {
  for (auto level : {CertificateLevel::SimplePieces, CertificateLevel::Isotopic}) {
    const auto cert = certify(self_intersecting_cubic(), level);
    CHECK_FALSE(cert.verified);
    REQUIRE(cert.failed_check() != nullptr);
    CHECK(cert.failed_check()->name == "pipe_radius");
  }
}

TEST_CASE("certificates carry the level's checks and honour the bound") {
  Rng rng(68);
  for (int degree = 3; degree <= 5; ++degree) {
    const auto c = random_composite(rng, degree, 2);
    const auto simple = certify(c, CertificateLevel::SimplePieces);
    const auto homeo = certify(c, CertificateLevel::Homeomorphic);
    const auto iso = certify(c, CertificateLevel::Isotopic);
    CHECK(simple.verified);
    CHECK(homeo.verified);
    CHECK(iso.verified);
    CHECK(simple.iterations == simple.bounds->simplicity);
    CHECK(homeo.iterations == homeo.bounds->N_hat);
    CHECK(iso.iterations == iso.bounds->N_star);
    CHECK(find_check(simple, "piece_total_curvature_lt_pi") != nullptr);
    CHECK(find_check(homeo, "pipe_containment") != nullptr);
    CHECK(find_check(homeo, "global_simple") != nullptr);
    CHECK(find_check(iso, "derivative_angle_lt_pi_over_6") != nullptr);
    CHECK(find_check(iso, "distance_lt_half_r")->value < iso.pipe->radius / 2);
  }
}

TEST_CASE("an undersized budget is reported as a failed check") {
  Rng rng(69);
  CertifyOptions opts;
  opts.subdivision.max_vertices = 8;
  const auto cert = certify(random_regular_curve(rng, 4), CertificateLevel::Isotopic, opts);
  CHECK_FALSE(cert.verified);
  CHECK(cert.failed_check()->name == "subdivision_budget");
}

TEST_CASE("a user radius overrides the estimator") {
  Rng rng(70);
  const auto c = random_regular_curve(rng, 3);
  CertifyOptions opts;
  opts.pipe_radius = 1e-4;
  const auto cert = certify(c, CertificateLevel::Homeomorphic, opts);
  CHECK(cert.verified);
  CHECK_FALSE(cert.pipe.has_value());
  CHECK(cert.constants->pipe_radius == 1e-4);
  CHECK(cert.iterations >= static_cast<int>(std::ceil(cert.bounds->N_prime_r)));
}
