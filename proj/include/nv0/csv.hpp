#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nv0 {

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }

  // LF line endings, no quoting (cells never contain commas)
  std::string str() const;
  void write(const std::filesystem::path& path) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace nv0
