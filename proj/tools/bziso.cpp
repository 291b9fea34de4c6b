// bziso: subdivision counts and topology certificates for composite Bezier curves.

#include <exception>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "bziso/commands.hpp"
#include "bziso/errors.hpp"

namespace {

void emit(const bziso::CommandResult& res, bool json) {
  if (json) {
    std::cout << res.report.dump(2) << '\n';
  } else {
    std::cout << bziso::io::write_tree(res.report);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified control-polygon topology for composite Bezier curves"};
  app.require_subcommand(1);
  bool json = false;

  std::string path;
  auto* bounds = app.add_subcommand("bounds", "print constants and iteration bounds");
  bziso::BoundsFlags bflags;
  double bounds_radius = 0.0;
  bounds->add_option("file", path, "curve file")->required()->check(CLI::ExistingFile);
  bounds->add_option("--nu", bflags.nus, "extra angles (radians) for the N(nu) table")
      ->check(CLI::Range(1e-12, std::numbers::pi));
  auto* bounds_r = bounds->add_option("--pipe-radius", bounds_radius, "pipe radius override")
                       ->check(CLI::PositiveNumber);
  bounds->add_option("--density", bflags.pipe.density, "pipe estimator samples per segment")
      ->check(CLI::Range(8, 1 << 16));
  bounds->add_option("--safety", bflags.pipe.safety, "pipe estimator safety factor")
      ->check(CLI::Range(1e-6, 1.0));
  bounds->add_flag("--json", json, "JSON output");

  auto* sub = app.add_subcommand("subdivide", "write the subdivided pieces and union polygon");
  int iters = 0;
  std::string out;
  sub->add_option("file", path, "curve file")->required()->check(CLI::ExistingFile);
  sub->add_option("--iters", iters, "subdivision iterations")->required()->check(CLI::Range(0, 64));
  sub->add_option("--out", out, "output curve file")->required();
  sub->add_flag("--json", json, "JSON output");

  auto* cert = app.add_subcommand("certify", "certify topology at a level");
  std::string level_text;
  bziso::CertifyOptions copts;
  double cert_radius = 0.0;
  cert->add_option("file", path, "curve file")->required()->check(CLI::ExistingFile);
  cert->add_option("--level", level_text, "simple | homeo | isotopy")
      ->required()
      ->check(CLI::IsMember({"simple", "homeo", "isotopy"}));
  auto* cert_r = cert->add_option("--pipe-radius", cert_radius, "pipe radius override")
                     ->check(CLI::PositiveNumber);
  cert->add_option("--samples", copts.samples, "oracle samples")->check(CLI::Range(2, 10'000'000));
  cert->add_option("--density", copts.pipe.density, "pipe estimator samples per segment")
      ->check(CLI::Range(8, 1 << 16));
  cert->add_option("--safety", copts.pipe.safety, "pipe estimator safety factor")
      ->check(CLI::Range(1e-6, 1.0));
  cert->add_flag("--json", json, "JSON output");

  auto* mesh = app.add_subcommand("mesh", "export a pipe surface mesh");
  bziso::MeshFlags mflags;
  mesh->add_option("file", path, "curve file")->required()->check(CLI::ExistingFile);
  mesh->add_option("--radius", mflags.radius, "pipe radius")->required()->check(CLI::PositiveNumber);
  mesh->add_option("--out", out, "output mesh file")->required();
  mesh->add_option("--density-t", mflags.density_t, "rings per segment")->check(CLI::Range(1, 1 << 16));
  mesh->add_option("--density-theta", mflags.density_theta, "vertices per ring")
      ->check(CLI::Range(3, 1 << 12));
  mesh->add_flag("--json", json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    bziso::CommandResult res;
    if (*bounds) {
      if (*bounds_r) bflags.pipe_radius = bounds_radius;
      res = bziso::cmd_bounds(path, bflags);
    } else if (*sub) {
      res = bziso::cmd_subdivide(path, iters, out);
    } else if (*cert) {
      if (*cert_r) copts.pipe_radius = cert_radius;
      res = bziso::cmd_certify(path, *bziso::parse_level(level_text), copts);
    } else {
      mflags.out = out;
      res = bziso::cmd_mesh(path, mflags);
    }
    emit(res, json);
    if (res.exit_code != 0) {
      const auto& failed = res.report["certificate"]["failed_check"];
      std::cerr << "not verified: failed check "
                << (failed.is_string() ? failed.get<std::string>() : "unknown") << '\n';
    }
    return res.exit_code;
  } catch (const bziso::ParseError& e) {
    std::cerr << path << ": parse error: " << e.what() << '\n';
  } catch (const bziso::ValidationError& e) {
    std::cerr << path << ": assumption '" << e.assumption() << "' violated: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}
