#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace rdbn {

inline constexpr const char* kToolName = "rdbn";
inline constexpr const char* kToolVersion = "0.1.0";

/// Record of one command run: resolved flags, master seed, input digests
/// and produced files. Written as manifest.json in every output directory;
/// replaying a manifest reproduces the primary outputs byte-identically.
struct RunManifest {
  std::string command;
  nlohmann::json flags;  // resolved option values, command-specific
  std::uint64_t seed = 0;
  int jobs = 1;
  std::map<std::string, std::string> input_digests;  // path -> fnv1a64
  std::vector<std::string> outputs;                  // file names in out dir
  std::string version = kToolVersion;
  std::string created_utc;
};

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);
std::string digest_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& manifest_path);

std::string utc_timestamp();

}  // namespace rdbn
