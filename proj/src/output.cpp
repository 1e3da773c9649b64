// output.cpp — deterministic CSV, SHA-256 manifests, staged writes
#include "vqs/output.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <stdexcept>

namespace vqs {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != header_.size()) throw std::invalid_argument("csv row width mismatch");
  rows_.push_back(row);
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
  out += '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_double(r[i]);
    }
    out += '\n';
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

OutputSet::OutputSet(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

void OutputSet::add(const std::string& name, const std::string& content) {
  const fs::path tmp = dir_ / (name + ".tmp");
  std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + tmp.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + tmp.string());
  staged_.push_back(name);
  sums_[name] = sha256_hex(content);
}

void OutputSet::finalize(
    const std::string& manifest_name,
    const std::function<std::string(const std::map<std::string, std::string>&)>& body) {
  write_file_atomic(dir_ / manifest_name, body(sums_));
  for (const auto& n : staged_) fs::rename(dir_ / (n + ".tmp"), dir_ / n);
  staged_.clear();
}

fs::path output_root(const std::string& configured) {
  if (const char* env = std::getenv("VQS_OUTPUT_DIR"); env && *env) return fs::path(env);
  return fs::path(configured);
}

}  // namespace vqs
