#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tgk/error.hpp"

namespace tgk::cli {

/// A file on disk does not match the digest its manifest recorded.
struct DigestMismatch : Error {
  using Error::Error;
};

std::string sha256_hex(std::string_view data);
std::string file_digest(const std::string& path);

/// One pipeline stage: what ran, with which settings, on what, producing what.
struct StageRecord {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, std::string>> inputs;   ///< path, digest
  std::vector<std::pair<std::string, std::string>> outputs;  ///< file name in the directory, digest

  void param(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }
};

/// Stage records in execution order. The last record produced the files of
/// the directory the manifest lives in; earlier ones are upstream history.
struct Manifest {
  std::vector<StageRecord> stages;
};

inline constexpr std::string_view kManifestName = "manifest.txt";

/// manifest.txt format, one record per block:
///
///   stage <command>
///   param <key>=<value>
///   input <path> <sha256>
///   output <file> <sha256>
///   end
std::string serialize(const Manifest& m);
Manifest parse_manifest(std::string_view text);

/// Reads `dir`/manifest.txt and checks every output of its last stage.
/// Throws DigestMismatch on any difference or missing file. Returns an empty
/// manifest (after a warning on stderr) if the directory has none.
Manifest verify_directory(const std::string& dir);

/// Digest to record for an input: the manifest's for directories, the file's otherwise.
std::string input_digest(const std::string& path);

/// Hashes `files` (names relative to `dir`) into `record`, appends it to
/// `upstream` and writes the result to `dir`/manifest.txt.
void finish_stage(const std::string& dir, Manifest upstream, StageRecord record, const std::vector<std::string>& files);

}  // namespace tgk::cli
