#include "qdhom/io/csv.hpp"

#include "qdhom/error.hpp"
#include "qdhom/io/ini.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qdhom::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& text, const std::string& what) {
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    double v = 0.0;
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last || text.empty()) {
        throw ValidationError(what + ": '" + text + "' is not a number");
    }
    if (!std::isfinite(v)) throw ValidationError(what + ": value must be finite");
    return v;
}

long long parse_integer(const std::string& text, const std::string& what) {
    long long v = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError(what + ": '" + text + "' is not an integer");
    }
    return v;
}

analysis::Histogram parse_histogram_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    int row = 0;
    auto fail = [&](int r, int col, const std::string& msg) {
        std::ostringstream m;
        m << source << ": row " << r;
        if (col > 0) m << ", column " << col;
        m << ": " << msg;
        throw ValidationError(m.str());
    };
    if (!std::getline(in, line)) fail(1, 0, "empty file, expected header 'time_ps,counts'");
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line != "time_ps,counts") fail(1, 0, "header must be 'time_ps,counts', got '" + line + "'");

    std::vector<double> times;
    analysis::Histogram h;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) fail(row, 0, "expected two comma-separated values");
        if (line.find(',', comma + 1) != std::string::npos) fail(row, 3, "unexpected extra column");
        double t = 0.0, c = 0.0;
        try {
            t = parse_double(line.substr(0, comma), "time_ps");
        } catch (const ValidationError& e) {
            fail(row, 1, e.what());
        }
        try {
            c = parse_double(line.substr(comma + 1), "counts");
        } catch (const ValidationError& e) {
            fail(row, 2, e.what());
        }
        if (c < 0.0) fail(row, 2, "counts must be nonnegative");
        times.push_back(t);
        h.counts.push_back(c);
    }
    if (times.size() < 2) fail(row, 0, "histogram needs at least two bins");
    h.origin = times.front();
    h.bin_width = times[1] - times[0];
    if (!(h.bin_width > 0.0)) fail(3, 1, "times must increase");
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double expected = h.origin + h.bin_width * static_cast<double>(i);
        if (std::abs(times[i] - expected) > 1e-6 * h.bin_width + 1e-9 * std::abs(expected)) {
            fail(static_cast<int>(i) + 2, 1, "bin spacing is not uniform");
        }
    }
    return h;
}

analysis::Histogram read_histogram_csv(const std::filesystem::path& path) {
    return parse_histogram_csv(read_text_file(path), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

void write_histogram_csv(const std::filesystem::path& path, const analysis::Histogram& h) {
    std::string s = "time_ps,counts\n";
    for (std::size_t i = 0; i < h.size(); ++i) {
        s += format_double(h.center(i));
        s += ',';
        s += format_double(h.counts[i]);
        s += '\n';
    }
    write_text_file(path, s);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::string s;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) s += ',';
        s += table.columns[c];
    }
    s += '\n';
    for (const auto& r : table.rows) {
        if (r.size() != table.columns.size()) throw IoError("CSV row width mismatch for " + path.string());
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) s += ',';
            s += r[c];
        }
        s += '\n';
    }
    write_text_file(path, s);
}

}  // namespace qdhom::io
