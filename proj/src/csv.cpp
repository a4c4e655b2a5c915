#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "predbound/cli.hpp"

namespace predbound::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<double> read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line) || trim(line) != "x") {
        throw InvalidInput(path.string() + ": line 1: expected header `x`");
    }
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto field = trim(line);
        if (field.empty()) continue;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
            throw InvalidInput(path.string() + ": line " + std::to_string(line_no) + " (row " +
                               std::to_string(line_no - 1) + "): not a finite number: '" +
                               std::string(field) + "'");
        }
        values.push_back(v);
    }
    if (in.bad()) throw IoError("read failure on " + path.string());
    if (values.empty()) throw InvalidInput(path.string() + ": no samples");
    return values;
}

std::string format_series_csv(std::span<const double> values) {
    std::string out = "x\n";
    out.reserve(values.size() * 24 + 2);
    char buf[64];
    for (double v : values) {
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
        out.append(buf, ptr);
        out.push_back('\n');
    }
    return out;
}

void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
    std::vector<std::filesystem::path> temps;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& t : temps) std::filesystem::remove(t, ec);
    };
    for (const auto& [path, contents] : files) {
        auto tmp = path;
        tmp += ".tmp";
        temps.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            cleanup();
            throw IoError("cannot write " + path.string());
        }
        out << contents;
        out.close();
        if (!out) {
            cleanup();
            throw IoError("write failure on " + path.string());
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::error_code ec;
        std::filesystem::rename(temps[i], files[i].first, ec);
        if (ec) {
            cleanup();
            throw IoError("cannot rename into " + files[i].first.string() + ": " + ec.message());
        }
    }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    auto p = csv;
    p += ".meta.json";
    return p;
}

}  // namespace predbound::cli
