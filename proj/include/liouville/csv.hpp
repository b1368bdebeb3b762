#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace liouville {

/** Fixed 17-significant-digit rendering, which round-trips every double. */
std::string format_real(double value);

/** Rows of comma-separated fields; reals always use format_real. */
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  template <class... Fields>
  void row(const Fields&... fields) {
    std::vector<std::string> cells{field(fields)...};
    append(cells);
  }
  void comment(const std::string& text);
  std::string str() const { return out_.str(); }

 private:
  static std::string field(double v) { return format_real(v); }
  static std::string field(int v) { return std::to_string(v); }
  static std::string field(long v) { return std::to_string(v); }
  static std::string field(long long v) { return std::to_string(v); }
  static std::string field(unsigned long v) { return std::to_string(v); }
  static std::string field(bool v) { return v ? "1" : "0"; }
  static std::string field(const char* v) { return v; }
  static std::string field(const std::string& v) { return v; }
  void append(const std::vector<std::string>& cells);

  std::size_t columns_;
  std::ostringstream out_;
};

/** Writes content to path through a temporary file in the same directory and a rename. */
void write_atomic(const std::string& path, const std::string& content);

}  // namespace liouville
