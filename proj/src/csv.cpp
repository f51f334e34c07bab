#include "qdecoh/csv.hpp"

#include "qdecoh/errors.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace qdecoh {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) {
        throw io_error("failed to format double");
    }
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : m_out(path, std::ios::binary), m_path(path), m_columns(header.size()) {
    if (!m_out) {
        throw io_error("cannot open output file: " + path);
    }
    std::string line;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) line += ',';
        line += header[i];
    }
    put_line(line);
}

void CsvWriter::row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_double(values[i]);
    }
    if (values.size() != m_columns) {
        throw io_error("row width does not match header in " + m_path);
    }
    put_line(line);
}

void CsvWriter::row_raw(const std::vector<std::string>& cells) {
    if (cells.size() != m_columns) {
        throw io_error("row width does not match header in " + m_path);
    }
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    put_line(line);
}

void CsvWriter::put_line(const std::string& line) {
    m_out << line << '\n';
    if (!m_out) {
        throw io_error("write failed: " + m_path);
    }
}

} // namespace qdecoh
