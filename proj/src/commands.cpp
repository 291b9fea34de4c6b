#include "bziso/commands.hpp"

#include <chrono>
#include <numbers>

#include "bziso/errors.hpp"

namespace bziso {

namespace {

using io::Json;
using Clock = std::chrono::steady_clock;

Json describe_input(const std::filesystem::path& path, const io::CurveFile& file) {
  Json segments = Json::array();
  for (const auto& seg : file.segments) {
    Json pts = Json::array();
    for (const auto& p : seg) pts.push_back(io::to_json(p));
    segments.push_back(std::move(pts));
  }
  return Json{{"path", path.string()},
              {"format_version", file.version},
              {"degree", file.degree},
              {"segment_count", file.segments.size()},
              {"pipe_radius", file.pipe_radius ? Json(*file.pipe_radius) : Json(nullptr)},
              {"segments", std::move(segments)}};
}

Json describe_pipe_options(const PipeOptions& p) {
  return Json{{"density", p.density},
              {"safety", p.safety},
              {"angle_tolerance", p.angle_tolerance},
              {"max_radius", p.max_radius ? Json(*p.max_radius) : Json(nullptr)}};
}

Json timing_since(Clock::time_point start) {
  const std::chrono::duration<double> dt = Clock::now() - start;
  return Json{{"seconds", dt.count()}};
}

}  // namespace

Json without_timing(Json report) {
  report.erase("timing");
  return report;
}

CommandResult cmd_bounds(const std::filesystem::path& path, const BoundsFlags& flags) {
  const auto start = Clock::now();
  const auto loaded = io::load_curve(path);
  const int n = loaded.curve.degree();

  Json report;
  report["command"] = "bounds";
  report["input"] = describe_input(path, loaded.file);

  std::optional<double> radius = flags.pipe_radius ? flags.pipe_radius : loaded.file.pipe_radius;
  Json pipe;
  if (radius) {
    pipe = Json{{"source", flags.pipe_radius ? "flag" : "file"}, {"radius", *radius}};
  } else {
    try {
      const auto est = estimate_pipe_radius(loaded.curve, flags.pipe);
      radius = est.radius;
      pipe = Json{{"source", "estimator"}, {"estimate", io::to_json(est)}};
    } catch (const NotSimpleError& e) {
      pipe = Json{{"source", "estimator"}, {"error", e.what()}};
    }
  }
  pipe["options"] = describe_pipe_options(flags.pipe);
  Json nus_json = Json::array();
  for (double nu : flags.nus) nus_json.push_back(nu);
  report["flags"] = Json{{"nu", std::move(nus_json)},
                         {"pipe_radius", flags.pipe_radius ? Json(*flags.pipe_radius) : Json(nullptr)}};

  const auto gc = compute_constants(loaded.curve, radius);
  std::vector<double> nus;
  if (n >= 3) nus = {std::numbers::pi / (n - 1), std::numbers::pi / (2.0 * (n - 1))};
  nus.insert(nus.end(), flags.nus.begin(), flags.nus.end());
  const auto bounds = compute_bounds(gc, nus);

  report["pipe"] = std::move(pipe);
  report["constants"] = io::to_json(gc);
  report["bounds"] = io::to_json(bounds);
  report["timing"] = timing_since(start);
  return {std::move(report), 0};
}

CommandResult cmd_subdivide(const std::filesystem::path& path, int iterations,
                            const std::filesystem::path& out) {
  const auto start = Clock::now();
  if (iterations < 0) throw DomainError("iterations must be non-negative");
  const auto loaded = io::load_curve(path);
  const auto result = subdivide(loaded.curve, iterations);

  io::CurveFile file;
  file.version = io::kFormatVersion;
  file.degree = loaded.curve.degree();
  for (const auto& piece : result.pieces) {
    file.segments.emplace_back(piece.vertices().begin(), piece.vertices().end());
  }
  file.polyline = std::vector<Point3>(result.union_polygon.vertices().begin(),
                                      result.union_polygon.vertices().end());
  io::write_text(out, io::format_curve_file(file));

  Json report;
  report["command"] = "subdivide";
  report["input"] = describe_input(path, loaded.file);
  report["flags"] = Json{{"iterations", iterations}, {"out", out.string()}};
  report["output"] = Json{{"pieces", result.pieces.size()},
                          {"union_vertices", result.union_polygon.size()}};
  report["timing"] = timing_since(start);
  return {std::move(report), 0};
}

CommandResult cmd_certify(const std::filesystem::path& path, CertificateLevel level,
                          const CertifyOptions& options) {
  const auto start = Clock::now();
  const auto loaded = io::load_curve(path);
  CertifyOptions opts = options;
  if (!opts.pipe_radius) opts.pipe_radius = loaded.file.pipe_radius;

  const auto cert = certify(loaded.curve, level, opts);

  Json report;
  report["command"] = "certify";
  report["input"] = describe_input(path, loaded.file);
  report["flags"] =
      Json{{"level", std::string(to_string(level))},
           {"samples", opts.samples},
           {"pipe_radius", options.pipe_radius ? Json(*options.pipe_radius) : Json(nullptr)},
           {"pipe", describe_pipe_options(opts.pipe)},
           {"sigma_rel_tolerance", opts.sigma.rel_tolerance}};
  report["diagnostics"] = io::to_json(loaded.diagnostics);
  report["constants"] = cert.constants ? io::to_json(*cert.constants) : Json(nullptr);
  report["bounds"] = cert.bounds ? io::to_json(*cert.bounds) : Json(nullptr);
  report["certificate"] = io::to_json(cert);
  report["timing"] = timing_since(start);
  return {std::move(report), cert.verified ? 0 : 1};
}

CommandResult cmd_mesh(const std::filesystem::path& path, const MeshFlags& flags) {
  const auto start = Clock::now();
  if (!(flags.radius > 0.0)) throw DomainError("mesh radius must be positive");
  const auto loaded = io::load_curve(path);
  const int rings = flags.density_t * static_cast<int>(loaded.curve.segment_count());
  const auto mesh = pipe_surface_mesh(loaded.curve, flags.radius, rings, flags.density_theta);
  io::write_text(flags.out, io::format_mesh(mesh));

  Json report;
  report["command"] = "mesh";
  report["input"] = describe_input(path, loaded.file);
  report["flags"] = Json{{"radius", flags.radius},
                         {"out", flags.out.string()},
                         {"density_t", flags.density_t},
                         {"density_theta", flags.density_theta}};
  report["output"] = Json{{"vertices", mesh.vertices.size()}, {"faces", mesh.faces.size()}};
  report["timing"] = timing_since(start);
  return {std::move(report), 0};
}

}  // namespace bziso
