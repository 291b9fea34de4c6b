#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "bziso/io.hpp"
#include "bziso/verify.hpp"

namespace bziso {

struct CommandResult {
  io::Json report;
  /// 0 success or verified, 1 not verified.
  int exit_code = 0;
};

struct BoundsFlags {
  /// Extra nu values for the N(nu) table; pi/(n-1) and pi/(2(n-1)) are always listed.
  std::vector<double> nus;
  std::optional<double> pipe_radius;
  PipeOptions pipe;
};

struct MeshFlags {
  double radius = 0.0;
  std::filesystem::path out;
  /// Rings per segment.
  int density_t = 64;
  int density_theta = 16;
};

// Each command loads the file itself; load failures propagate as ParseError,
// ValidationError or std::runtime_error. A radius given in the file is used
// unless a flag overrides it.

CommandResult cmd_bounds(const std::filesystem::path& path, const BoundsFlags& flags = {});
CommandResult cmd_subdivide(const std::filesystem::path& path, int iterations,
                            const std::filesystem::path& out);
CommandResult cmd_certify(const std::filesystem::path& path, CertificateLevel level,
                          const CertifyOptions& options = {});
CommandResult cmd_mesh(const std::filesystem::path& path, const MeshFlags& flags);

/// Drops the "timing" member, for reproducibility comparisons.
io::Json without_timing(io::Json report);

}  // namespace bziso
