#pragma once

#include <string>
#include <vector>

namespace stylebench::util {

// Pinned numeric rendering for reports: printf "%.*g". Every CSV the harness
// writes goes through this so identical inputs give byte-identical files.
std::string format_g(double v, int precision = 6);

// RFC-4180 style quoting, only when needed.
std::string csv_escape(const std::string& field);

class CsvWriter {
  public:
    void header(std::vector<std::string> cols);
    void row(std::vector<std::string> cells);
    const std::string& str() const { return buf_; }
    void write_file(const std::string& path) const;

  private:
    void emit(const std::vector<std::string>& cells);
    std::string buf_;
    std::size_t width_ = 0;
};

}  // namespace stylebench::util
