#include "manifest.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "tgk/text.hpp"

namespace tgk::cli {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string file_digest(const std::string& path) { return sha256_hex(read_file(path)); }

std::string serialize(const Manifest& m) {
  std::ostringstream out;
  for (const auto& s : m.stages) {
    out << "stage " << s.command << '\n';
    for (const auto& [k, v] : s.params) out << "param " << k << '=' << v << '\n';
    for (const auto& [p, d] : s.inputs) out << "input " << p << ' ' << d << '\n';
    for (const auto& [f, d] : s.outputs) out << "output " << f << ' ' << d << '\n';
    out << "end\n";
  }
  return out.str();
}

Manifest parse_manifest(std::string_view text) {
  Manifest m;
  StageRecord* open = nullptr;
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    const auto head = line.substr(0, sp);
    const auto rest = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp + 1));
    if (head == "stage") {
      if (open) throw ParseError(line_no, "manifest: stage without end");
      m.stages.emplace_back();
      open = &m.stages.back();
      open->command = std::string(rest);
      continue;
    }
    if (!open) throw ParseError(line_no, "manifest: entry outside a stage");
    if (head == "end") {
      open = nullptr;
    } else if (head == "param") {
      const auto eq = rest.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, "manifest: param without '='");
      open->param(std::string(rest.substr(0, eq)), std::string(rest.substr(eq + 1)));
    } else if (head == "input" || head == "output") {
      const auto cut = rest.rfind(' ');
      if (cut == std::string_view::npos) throw ParseError(line_no, "manifest: missing digest");
      auto& list = head == "input" ? open->inputs : open->outputs;
      list.emplace_back(std::string(trim(rest.substr(0, cut))), std::string(rest.substr(cut + 1)));
    } else {
      throw ParseError(line_no, "manifest: unknown entry '" + std::string(head) + "'");
    }
  }
  if (open) throw ParseError(line_no, "manifest: unterminated stage");
  return m;
}

Manifest verify_directory(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error("input directory '" + dir + "' does not exist");
  const auto path = fs::path(dir) / kManifestName;
  if (!fs::exists(path)) {
    std::fprintf(stderr, "tgk: warning: '%s' has no %s, inputs are not verified\n", dir.c_str(),
                 std::string(kManifestName).c_str());
    return {};
  }
  auto m = parse_manifest(read_file(path.string()));
  if (m.stages.empty()) return m;
  for (const auto& [file, digest] : m.stages.back().outputs) {
    const auto p = fs::path(dir) / file;
    if (!fs::exists(p)) throw DigestMismatch("'" + p.string() + "' is listed in the manifest but missing");
    const auto actual = file_digest(p.string());
    if (actual != digest) {
      throw DigestMismatch("'" + p.string() + "' has digest " + actual + " but the manifest records " + digest +
                           "; the file changed after the stage that wrote it, rerun that stage");
    }
  }
  return m;
}

std::string input_digest(const std::string& path) {
  if (fs::is_directory(path)) {
    const auto m = fs::path(path) / kManifestName;
    return fs::exists(m) ? file_digest(m.string()) : "unverified";
  }
  return file_digest(path);
}

void finish_stage(const std::string& dir, Manifest upstream, StageRecord record,
                  const std::vector<std::string>& files) {
  for (const auto& f : files) record.outputs.emplace_back(f, file_digest((fs::path(dir) / f).string()));
  upstream.stages.push_back(std::move(record));
  write_file_atomic((fs::path(dir) / kManifestName).string(), serialize(upstream));
}

}  // namespace tgk::cli
