#include "qbatt/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace qbatt::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) : file_(path, std::ios::binary), path_(path) {
    if (!file_) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
}

void CsvWriter::header(std::span<const std::string> columns) {
    columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) file_ << ',';
        file_ << columns[i];
    }
    file_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != columns_) {
        throw std::logic_error("csv: row width differs from header in '" + path_ + "'");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) file_ << ',';
        file_ << format_double(values[i]);
    }
    file_ << '\n';
}

void CsvWriter::close() {
    file_.close();
    if (!file_) throw std::runtime_error("csv: write failure on '" + path_ + "'");
}

std::string meta_path_for(const std::string& csv_path) {
    const auto slash = csv_path.find_last_of("/\\");
    const auto dot = csv_path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return csv_path + ".meta";
    }
    return csv_path.substr(0, dot) + ".meta";
}

MetaWriter::MetaWriter(const std::string& csv_path, const std::string& command)
    : path_(meta_path_for(csv_path)) {
    entries_.emplace_back("command", command);
    entries_.emplace_back("tool_version", kToolVersion);
}

void MetaWriter::put(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
}
void MetaWriter::put(const std::string& key, double value) {
    entries_.emplace_back(key, format_double(value));
}
void MetaWriter::put(const std::string& key, long long value) {
    entries_.emplace_back(key, std::to_string(value));
}

void MetaWriter::finish(double wall_seconds, int warnings) {
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw std::runtime_error("meta: cannot open '" + path_ + "' for writing");
    for (const auto& [k, v] : entries_) f << k << " = " << v << '\n';
    f << "units_energy = Delta\n";
    f << "units_time = 1/Delta\n";
    f << "warnings = " << warnings << '\n';
    f << "wall_time_s = " << format_double(wall_seconds) << '\n';
}

}  // namespace qbatt::cli
