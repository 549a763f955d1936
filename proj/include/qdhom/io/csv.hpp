#pragma once

#include "qdhom/analysis/histogram.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qdhom::io {

// Shortest decimal spelling that reads back to the same double.
std::string format_double(double v);

// Strict number parsing; `what` names the value in the error message.
double parse_double(const std::string& text, const std::string& what);
long long parse_integer(const std::string& text, const std::string& what);

// Histogram CSV: header "time_ps,counts", one row per bin, time at the bin
// centre. Bin width and origin come from the data; spacing must be uniform.
analysis::Histogram read_histogram_csv(const std::filesystem::path& path);
analysis::Histogram parse_histogram_csv(const std::string& text, const std::string& source);
void write_histogram_csv(const std::filesystem::path& path, const analysis::Histogram& h);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qdhom::io
