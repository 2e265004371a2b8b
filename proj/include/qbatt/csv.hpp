// csv.hpp — deterministic CSV emission: fixed column order, header row,
// 17-significant-digit floats, LF line endings.  Every CSV gets a sidecar
// metadata file (same stem, .meta) with the full config, grid, tool version
// and wall time.

#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace qbatt::cli {

inline constexpr const char* kToolVersion = "0.1.0";

std::string format_double(double v);  // %.17g

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);

    void header(std::span<const std::string> columns);
    void row(std::span<const double> values);
    void close();

private:
    std::ofstream file_;
    std::string path_;
    std::size_t columns_ = 0;
};

// replace the extension of `csv_path` with .meta
std::string meta_path_for(const std::string& csv_path);

class MetaWriter {
public:
    MetaWriter(const std::string& csv_path, const std::string& command);

    void put(const std::string& key, const std::string& value);
    void put(const std::string& key, double value);
    void put(const std::string& key, long long value);

    // writes the file, appending units policy and elapsed wall time
    void finish(double wall_seconds, int warnings = 0);

private:
    std::string path_;
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace qbatt::cli
