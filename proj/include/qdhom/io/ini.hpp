#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qdhom::io {

// Line-oriented "key = value" text grouped by "[section]" headers. '#' and ';'
// start comments at the beginning of a line, '#' also after whitespace inside
// one. Keys before the first header belong to the section named "".
struct IniEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct IniSection {
    std::string name;
    int line = 0;
    std::vector<IniEntry> entries;
};

struct IniDocument {
    std::string source;  // file name used in messages
    std::vector<IniSection> sections;
};

// Throws ValidationError("<source>:<line>: ...") on malformed lines and on a
// key repeated within one section.
IniDocument parse_ini(std::string_view text, std::string source);
IniDocument read_ini(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);  // IoError on failure

}  // namespace qdhom::io
