#include "rdbn/manifest.hpp"

#include "rdbn/types.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rdbn {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(bytes);
  return out.str();
}

std::string digest_file(const std::filesystem::path& path) {
  return fnv1a64_hex(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << content;
  if (!out) throw ValidationError("write failed for " + path.string());
}

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest) {
  nlohmann::json doc;
  doc["tool"] = kToolName;
  doc["version"] = manifest.version;
  doc["command"] = manifest.command;
  doc["flags"] = manifest.flags;
  doc["seed"] = manifest.seed;
  doc["jobs"] = manifest.jobs;
  doc["inputs"] = manifest.input_digests;
  doc["outputs"] = manifest.outputs;
  doc["created_utc"] = manifest.created_utc;
  write_file(out_dir / "manifest.json", doc.dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& manifest_path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(manifest_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("manifest " + manifest_path.string() + ": " + e.what());
  }
  try {
    RunManifest manifest;
    manifest.command = doc.at("command").get<std::string>();
    manifest.flags = doc.at("flags");
    manifest.seed = doc.at("seed").get<std::uint64_t>();
    manifest.jobs = doc.value("jobs", 1);
    manifest.input_digests =
        doc.value("inputs", std::map<std::string, std::string>{});
    manifest.outputs = doc.value("outputs", std::vector<std::string>{});
    manifest.version = doc.value("version", std::string{kToolVersion});
    manifest.created_utc = doc.value("created_utc", std::string{});
    return manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest " + manifest_path.string() + ": " + e.what());
  }
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace rdbn
