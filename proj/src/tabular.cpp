#include "stylebench/util/tabular.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace stylebench::util {

std::string format_g(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::header(std::vector<std::string> cols) {
    width_ = cols.size();
    emit(cols);
}

void CsvWriter::row(std::vector<std::string> cells) {
    if (width_ != 0 && cells.size() != width_)
        throw std::logic_error("CsvWriter: row width does not match header");
    emit(cells);
}

void CsvWriter::emit(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += csv_escape(cells[i]);
    }
    buf_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << buf_;
}

}  // namespace stylebench::util
