#include "excinet/manifest.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "excinet/common.hpp"

namespace excinet {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

namespace {

std::string hex16(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config_path"] = config_path;
  j["parameters"] = parameters;
  j["seed"] = seed;
  j["output_directory"] = output_directory;
  j["artifacts"] = nlohmann::json::array();
  for (const auto& a : artifacts) {
    j["artifacts"].push_back(
        {{"path", a.path}, {"bytes", a.bytes}, {"fnv1a64", a.fnv1a64}});
  }
  j["duration_seconds"] = duration_seconds;
  return j.dump(1) + "\n";
}

void write_artifact(RunManifest& manifest, const std::filesystem::path& dir,
                    const std::string& name, const std::string& bytes) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot write artifact " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  manifest.artifacts.push_back(
      {name, bytes.size(), hex16(fnv1a64(bytes))});
}

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string body = manifest.to_json();
  const auto tmp = dir / "manifest.json.tmp";
  const auto final_path = dir / "manifest.json";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot write " + tmp.string());
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
  }
  std::filesystem::rename(tmp, final_path);
}

}  // namespace excinet
