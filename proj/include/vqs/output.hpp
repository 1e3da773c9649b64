// output.hpp — CSV formatting, checksums and staged file output
#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace vqs {

std::string format_double(double v);  // %.17g

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

std::string sha256_hex(const std::string& bytes);

// Data files are staged under temporary names, hashed, the manifest is
// written, then the data files are renamed into place.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);
  void add(const std::string& name, const std::string& content);
  const std::map<std::string, std::string>& checksums() const { return sums_; }
  // manifest_body receives the checksum map and returns the manifest text
  void finalize(const std::string& manifest_name,
                const std::function<std::string(const std::map<std::string, std::string>&)>&
                    manifest_body);
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> staged_;
  std::map<std::string, std::string> sums_;
};

void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// VQS_OUTPUT_DIR wins over the configured directory
std::filesystem::path output_root(const std::string& configured);

}  // namespace vqs
