#include "qdhom/io/ini.hpp"

#include "qdhom/error.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace qdhom::io {
namespace {

std::string_view trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string_view strip_comment(std::string_view s) {
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] == '#' && (s[i - 1] == ' ' || s[i - 1] == '\t')) return s.substr(0, i);
    }
    return s;
}

bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
            return false;
        }
    }
    return true;
}

}  // namespace

IniDocument parse_ini(std::string_view text, std::string source) {
    IniDocument doc;
    doc.source = std::move(source);
    doc.sections.push_back({"", 0, {}});
    auto fail = [&](int line, const std::string& what) {
        throw ValidationError(doc.source + ":" + std::to_string(line) + ": " + what);
    };
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        const std::string_view raw =
            text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        line = trim(strip_comment(line));
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "section header is missing ']'");
            const auto name = trim(line.substr(1, line.size() - 2));
            if (!valid_name(name)) fail(line_no, "invalid section name '" + std::string(name) + "'");
            doc.sections.push_back({std::string(name), line_no, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (!valid_name(key)) fail(line_no, "invalid key '" + std::string(key) + "'");
        auto& sec = doc.sections.back();
        for (const auto& e : sec.entries) {
            if (e.key == key) {
                fail(line_no, "key '" + std::string(key) + "' repeated (first on line " +
                                  std::to_string(e.line) + ")");
            }
        }
        sec.entries.push_back({std::string(key), std::string(value), line_no});
    }
    return doc;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading " + path.string());
    return ss.str();
}

IniDocument read_ini(const std::filesystem::path& path) {
    return parse_ini(read_text_file(path), path.string());
}

}  // namespace qdhom::io
