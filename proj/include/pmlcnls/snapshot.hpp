#pragma once

// Binary field snapshots:
//   "CNLSSNAP" | u32 version | u32 header bytes | JSON header | payload
// The payload holds N*nx*ny (re, im) pairs of little-endian doubles, component
// by component in storage order (ix*ny + iy).

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "pmlcnls/model.hpp"

namespace pmlcnls {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotData {
  ComplexState state;
  double time = 0.0;
  std::optional<CnlsCoefficients> coeffs;
  std::map<std::string, double> attributes;  // e.g. the stationary residual
};

void write_snapshot(const std::filesystem::path& path, const SnapshotData& data);

/// Throws ConfigError on a bad magic, version, header or payload length.
SnapshotData read_snapshot(const std::filesystem::path& path);

}  // namespace pmlcnls
