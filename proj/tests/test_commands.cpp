#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "bziso/commands.hpp"
#include "bziso/errors.hpp"
#include "support/corpus.hpp"

using namespace bziso;
using namespace bziso::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kData = BZISO_DATA_DIR;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "bziso_test_commands";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_curve(const std::string& name, const CompositeBezier& c,
                     std::optional<double> radius = std::nullopt) {
  io::CurveFile f;
  f.degree = c.degree();
  for (std::size_t k = 0; k < c.segment_count(); ++k) {
    const auto v = c.segment(k).vertices();
    f.segments.emplace_back(v.begin(), v.end());
  }
  f.pipe_radius = radius;
  const auto path = scratch(name);
  io::write_text(path, io::format_curve_file(f));
  return path;
}

}  // namespace

TEST_CASE("bounds of a straight line are all zero") {
  const auto r = cmd_bounds(kData / "line.bz");
  CHECK(r.exit_code == 0);
  const auto& b = r.report["bounds"];
  for (const char* key : {"N1", "N2", "N_prime_r", "N_hat_real", "N_star_real"}) {
    CHECK(b[key].get<double>() == 0.0);
  }
  CHECK(b["simplicity"] == 0);
  CHECK(b["N_hat"] == 0);
  CHECK(b["N_star"] == 0);
  CHECK(r.report["pipe"]["source"] == "estimator");
}

TEST_CASE("bounds report for the sample quadratic") {
  const auto r = cmd_bounds(kData / "quadratic.bz");
  const auto& c = r.report["constants"];
  CHECK(c["degree"] == 2);
  CHECK(c["N_inf_n"].get<double>() == 0.25);
  CHECK(c["delta2_P"]["norm"].get<double>() == doctest::Approx(2.0));
  CHECK(r.report["bounds"]["N_star"] == 0);
  CHECK(r.report.contains("timing"));
  // The text form names the constant the way the CLI test expects.
  CHECK(io::write_tree(r.report).find("N_inf_n: 0.25\n") != std::string::npos);
}

TEST_CASE("halving the radius raises N'(r) by one half") {
  const auto path = kData / "cubic.bz";
  BoundsFlags a, b;
  a.pipe_radius = 1e-5;
  b.pipe_radius = 5e-6;
  const double na = cmd_bounds(path, a).report["bounds"]["N_prime_r"].get<double>();
  const double nb = cmd_bounds(path, b).report["bounds"]["N_prime_r"].get<double>();
  CHECK(nb - na == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cmd_bounds(path, a).report["pipe"]["source"] == "flag");
}

TEST_CASE("radius precedence: flag, then file, then estimator") {
  Rng rng(81);
  const auto c = random_regular_curve(rng, 3);
  const auto with = write_curve("with_radius.bz", c, 0.01);
  CHECK(cmd_bounds(with).report["pipe"]["source"] == "file");
  CHECK(cmd_bounds(with).report["constants"]["pipe_radius"].get<double>() == 0.01);
  BoundsFlags f;
  f.pipe_radius = 0.02;
  CHECK(cmd_bounds(with, f).report["constants"]["pipe_radius"].get<double>() == 0.02);
  CHECK(cmd_certify(with, CertificateLevel::Homeomorphic).report["constants"]["pipe_radius"] == 0.01);
}

TEST_CASE("extra nu values extend the table") {
  BoundsFlags f;
  f.nus = {0.1, 0.2};
  const auto r = cmd_bounds(kData / "cubic.bz", f);
  const auto& table = r.report["bounds"]["N_of_nu"];
  REQUIRE(table.size() == 4);
  CHECK(table[2]["nu"].get<double>() == 0.1);
  CHECK(table[3]["N"].get<int>() <= table[2]["N"].get<int>());
}

TEST_CASE("subdivide writes pieces and the union polygon") {
  const auto out0 = scratch("quad_0.bz");
  const auto r0 = cmd_subdivide(kData / "quadratic.bz", 0, out0);
  const auto reread0 = io::parse_curve_file(io::read_text(out0));
  const auto input = io::parse_curve_file(io::read_text(kData / "quadratic.bz"));
  CHECK(reread0.segments == input.segments);
  CHECK(r0.report["output"]["pieces"] == 1);

  const auto out2 = scratch("quad_2.bz");
  const auto r2 = cmd_subdivide(kData / "quadratic.bz", 2, out2);
  CHECK(r2.report["output"]["pieces"] == 4);
  CHECK(r2.report["output"]["union_vertices"] == 4 * 2 + 1);
  const auto text = io::read_text(out2);
  const auto reread = io::parse_curve_file(text);
  CHECK(io::format_curve_file(reread) == text);
  REQUIRE(reread.polyline.has_value());
  CHECK(reread.polyline->size() == 9);

  // Every written control point equals the in-memory subdivision bit for bit.
  const auto loaded = io::load_curve(kData / "quadratic.bz");
  const auto res = subdivide(loaded.curve, 2);
  for (std::size_t k = 0; k < res.pieces.size(); ++k) {
    for (std::size_t j = 0; j < res.pieces[k].size(); ++j) {
      CHECK(reread.segments[k][j] == res.pieces[k][j]);
    }
  }

  // The output is itself a valid curve file, representing the same curve.
  const auto again = io::load_curve(out2);
  CHECK(again.curve.segment_count() == 4);
  CHECK(distance(evaluate(again.curve, 0.3), evaluate(loaded.curve, 0.3)) < 1e-14);

  CHECK_THROWS_AS(cmd_subdivide(kData / "quadratic.bz", -1, out2), DomainError);
}

TEST_CASE("cubic subdivided twice has thirteen union vertices") {
  const auto r = cmd_subdivide(kData / "cubic.bz", 2, scratch("cubic_2.bz"));
  CHECK(r.report["output"]["union_vertices"] == 13);
}

TEST_CASE("certify exit codes") {
  const auto line = cmd_certify(kData / "line.bz", CertificateLevel::Isotopic);
  CHECK(line.exit_code == 0);
  CHECK(line.report["certificate"]["iterations"] == 0);
  CHECK(line.report["certificate"]["verified"] == true);

  Rng rng(82);
  for (int trial = 0; trial < 3; ++trial) {
    const auto path = write_curve("random_cubic.bz", random_regular_curve(rng, 3));
    const auto r = cmd_certify(path, CertificateLevel::Homeomorphic);
    CHECK(r.exit_code == 0);
    CHECK(r.report["certificate"]["level"] == "homeomorphic");
  }

  const auto bad = cmd_certify(kData / "self_intersecting.bz", CertificateLevel::Isotopic);
  CHECK(bad.exit_code != 0);
  CHECK(bad.report["certificate"]["verified"] == false);
  CHECK(bad.report["certificate"]["failed_check"] == "pipe_radius");
  CHECK(bad.report["diagnostics"]["spot_check_simple"] == false);
}

TEST_CASE("load errors propagate") {
  CHECK_THROWS_AS(cmd_certify(kData / "bad_degree.bz", CertificateLevel::SimplePieces), ParseError);
  CHECK_THROWS(cmd_bounds(kData / "does_not_exist.bz"));
}

TEST_CASE("reports are reproducible apart from timing") {
  const auto path = kData / "composite.bz";
  for (auto level : {CertificateLevel::SimplePieces, CertificateLevel::Isotopic}) {
    const auto a = cmd_certify(path, level);
    const auto b = cmd_certify(path, level);
    CHECK(without_timing(a.report) == without_timing(b.report));
    CHECK(io::write_tree(without_timing(a.report)) == io::write_tree(without_timing(b.report)));
    CHECK_FALSE(without_timing(a.report).contains("timing"));
  }
  CHECK(without_timing(cmd_bounds(path).report) == without_timing(cmd_bounds(path).report));
}

TEST_CASE("mesh command writes an OBJ-style file") {
  MeshFlags f;
  f.radius = 0.05;
  f.out = scratch("composite.obj");
  f.density_t = 8;
  f.density_theta = 6;
  const auto r = cmd_mesh(kData / "composite.bz", f);
  // Two segments, eight rings each, plus the closing ring.
  CHECK(r.report["output"]["vertices"] == 17 * 6);
  CHECK(r.report["output"]["faces"] == 16 * 6 * 2);
  const auto text = io::read_text(f.out);
  CHECK(std::count(text.begin(), text.end(), '\n') == 17 * 6 + 16 * 6 * 2);
}
