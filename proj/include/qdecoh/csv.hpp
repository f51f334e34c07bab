#pragma once

#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

namespace qdecoh {

// Shortest round-trip decimal rendering (std::to_chars); the CSV contract is
// byte exact for identical inputs.
std::string format_double(double value);

// Comma separated, header row, '.' decimal point, LF line endings, UTF-8.
// Failures throw io_error; the CLI maps them to exit code 2.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    void row_raw(const std::vector<std::string>& cells);

private:
    std::ofstream m_out;
    std::string m_path;
    std::size_t m_columns;
    void put_line(const std::string& line);
};

} // namespace qdecoh
