#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "toolspan/core/entry.hpp"
#include "toolspan/core/errors.hpp"

namespace toolspan {

// Calls fn(line, line_number) for every non-blank line; line numbers are 1-based.
inline void for_each_line(const std::filesystem::path& path,
                          const std::function<void(const std::string&, std::size_t)>& fn) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        fn(line, n);
    }
}

inline std::vector<Entry> read_entries(const std::filesystem::path& path) {
    std::vector<Entry> out;
    for_each_line(path, [&](const std::string& line, std::size_t n) {
        try {
            out.push_back(parse_entry(line));
        } catch (const ParseError& ex) {
            throw DataError(path.string() + ":" + std::to_string(n) + ": " + ex.what());
        }
    });
    return out;
}

inline void write_entries(const std::filesystem::path& path, const std::vector<Entry>& entries) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& e : entries) out << serialize_entry(e) << '\n';
}

template <typename Json>
void write_json_lines(const std::filesystem::path& path, const std::vector<Json>& docs) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& d : docs) out << d.dump() << '\n';
}

template <typename Json>
void write_json(const std::filesystem::path& path, const Json& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

}  // namespace toolspan
