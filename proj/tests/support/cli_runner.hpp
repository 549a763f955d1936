#pragma once
// Runs the qdhom executable (path baked in as QDHOM_CLI) in scratch
// directories and reads back its CSV outputs.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace cli_runner {

namespace fs = std::filesystem;

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::absolute("scratch") / name) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    fs::path operator/(const std::string& rel) const { return dir / rel; }
    void write(const std::string& rel, const std::string& text) const {
        fs::create_directories((dir / rel).parent_path());
        std::ofstream(dir / rel) << text;
    }
};

struct Run {
    int code = -1;
    std::string out;
    std::string err;
    double seconds = 0.0;
};

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline Run cli(const Scratch& s, const std::string& args) {
    const auto out = s / "stdout.txt";
    const auto err = s / "stderr.txt";
    const std::string cmd = "cd '" + s.dir.string() + "' && '" QDHOM_CLI "' " + args + " > '" +
                            out.string() + "' 2> '" + err.string() + "'";
    const auto t0 = std::chrono::steady_clock::now();
    const int status = std::system(cmd.c_str());
    Run r;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

using Row = std::map<std::string, std::string>;

inline std::vector<Row> read_csv(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::string line;
    std::vector<std::string> header;
    std::vector<Row> rows;
    auto split = [](const std::string& l) {
        std::vector<std::string> cells;
        std::stringstream ss(l);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        if (!l.empty() && l.back() == ',') cells.emplace_back();
        return cells;
    };
    std::getline(in, line);
    header = split(line);
    while (std::getline(in, line)) {
        const auto cells = split(line);
        Row r;
        for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) r[header[i]] = cells[i];
        rows.push_back(r);
    }
    return rows;
}

inline double number(const Row& r, const std::string& key) { return std::stod(r.at(key)); }

// Every regular file under `dir` keyed by relative path, with its bytes.
inline std::map<std::string, std::string> tree(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
    }
    return files;
}

}  // namespace cli_runner
