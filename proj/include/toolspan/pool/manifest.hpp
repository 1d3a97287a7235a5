#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "toolspan/core/errors.hpp"
#include "toolspan/core/text.hpp"
#include "toolspan/core/jsonl.hpp"
#include "toolspan/pool/adapters.hpp"

namespace toolspan::pool {

// {"sources": [{"source_id": "...", "adapter": "chatml", "path": "..."}, ...]}
// Relative paths resolve against the manifest's directory.
inline std::vector<SourceDescriptor> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw ConfigError("manifest " + path.string() + ": " + ex.what());
    }
    if (!doc.contains("sources") || !doc["sources"].is_array())
        throw ConfigError("manifest has no 'sources' list");
    std::vector<SourceDescriptor> out;
    for (const auto& s : doc["sources"]) {
        SourceDescriptor d;
        try {
            d.source_id = s.at("source_id").get<std::string>();
            auto adapter = parse_adapter(s.value("adapter", std::string("chatml")));
            if (!adapter) throw ConfigError("unknown adapter for " + d.source_id);
            d.adapter = *adapter;
            d.path = s.at("path").get<std::string>();
        } catch (const nlohmann::json::exception& ex) {
            throw ConfigError(std::string("manifest entry: ") + ex.what());
        }
        if (d.path.is_relative()) d.path = path.parent_path() / d.path;
        if (!std::filesystem::exists(d.path)) throw ConfigError("source file missing: " + d.path.string());
        out.push_back(std::move(d));
    }
    return out;
}

// Human review labels, one row per reviewed entry: source_id,entry_index,clean
// with clean in {0,1}. A leading header row is skipped. Returns
// source_id -> (entry_index -> clean).
using CleanLabels = std::map<std::string, std::map<std::size_t, bool>>;

inline CleanLabels load_labels(const std::filesystem::path& path) {
    CleanLabels out;
    for_each_line(path, [&](const std::string& line, std::size_t n) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(text::trim(col));
        if (n == 1 && cols.size() == 3 && cols[1] == "entry_index") return;
        if (cols.size() != 3 || (cols[2] != "0" && cols[2] != "1"))
            throw DataError(path.string() + ":" + std::to_string(n) + ": expected source_id,entry_index,clean");
        std::size_t index = 0;
        try {
            index = std::stoul(cols[1]);
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(n) + ": bad entry_index");
        }
        out[cols[0]][index] = cols[2] == "1";
    });
    return out;
}

}  // namespace toolspan::pool
