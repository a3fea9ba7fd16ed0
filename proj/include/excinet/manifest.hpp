#ifndef EXCINET_MANIFEST_HPP
#define EXCINET_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace excinet {

/// FNV-1a 64-bit checksum, used to fingerprint emitted artifacts.
std::uint64_t fnv1a64(const std::string& bytes);

/// Provenance record for one CLI run: what was executed, with which resolved
/// parameters, and checksums of everything written. Serialized as JSON and
/// written atomically (temp file + rename) at the end of the run.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::map<std::string, std::string> parameters;  ///< resolved inputs
  std::uint64_t seed = 0;
  std::string output_directory;
  struct Artifact {
    std::string path;       ///< relative to the output directory
    std::uint64_t bytes = 0;
    std::string fnv1a64;    ///< 16 hex digits
  };
  std::vector<Artifact> artifacts;
  double duration_seconds = 0.0;

  std::string to_json() const;
};

/// Writes `bytes` to dir/name and records it in the manifest.
void write_artifact(RunManifest& manifest, const std::filesystem::path& dir,
                    const std::string& name, const std::string& bytes);

/// Atomic JSON dump to dir/manifest.json.
void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& dir);

}  // namespace excinet

#endif  // EXCINET_MANIFEST_HPP
