#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "toolspan/core/entry.hpp"
#include "toolspan/core/segment.hpp"
#include "toolspan/core/text.hpp"

namespace toolspan {

// Top-level module names imported by a snippet. Only lines that start (after
// indentation) with `import` or `from ... import` count; `import a.b as c, d`
// yields {a, d}. Relative imports (`from . import x`) are skipped.
inline std::vector<std::string> imported_modules(std::string_view code) {
    std::vector<std::string> mods;
    auto head = [](std::string_view dotted) {
        dotted = text::trim_view(dotted);
        auto cut = dotted.find_first_of(". \t");
        return std::string(dotted.substr(0, cut));
    };
    auto is_name = [](const std::string& s) {
        if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
        for (char c : s)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
        return true;
    };
    for (const auto& raw : text::split_lines(code)) {
        std::string_view line = text::trim_view(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = text::trim_view(line.substr(0, hash));
        if (text::starts_with(line, "import ") || text::starts_with(line, "import\t")) {
            std::string_view rest = line.substr(7);
            while (!rest.empty()) {
                auto comma = rest.find(',');
                auto name = head(rest.substr(0, comma));
                if (is_name(name)) mods.push_back(name);
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
        } else if (text::starts_with(line, "from ") || text::starts_with(line, "from\t")) {
            std::string_view rest = text::trim_view(line.substr(5));
            if (rest.find(" import") == std::string_view::npos) continue;
            auto name = head(rest);
            if (is_name(name)) mods.push_back(name);
        }
    }
    return mods;
}

struct SourceStats {
    std::size_t entries = 0;
    std::size_t tool_calls = 0;
    std::map<std::string, std::size_t> library_usage;  // module -> spans importing it
};

struct StatsReport {
    std::map<std::string, SourceStats> sources;

    std::size_t entries() const {
        std::size_t n = 0;
        for (const auto& [_, s] : sources) n += s.entries;
        return n;
    }
    std::size_t tool_calls() const {
        std::size_t n = 0;
        for (const auto& [_, s] : sources) n += s.tool_calls;
        return n;
    }
    std::map<std::string, std::size_t> library_usage() const {
        std::map<std::string, std::size_t> all;
        for (const auto& [_, s] : sources)
            for (const auto& [lib, n] : s.library_usage) all[lib] += n;
        return all;
    }

    void add(const Entry& e, const SpecialTokens& toks = SpecialTokens::defaults()) {
        auto& s = sources[e.source_id.value_or("")];
        ++s.entries;
        for (const auto& m : e.messages) {
            if (m.role != Role::Assistant) continue;
            for (const auto& seg : segment(m.content, toks)) {
                auto* code = std::get_if<ToolCode>(&seg);
                if (!code) continue;
                ++s.tool_calls;
                auto mods = imported_modules(code->source);
                std::set<std::string> unique(mods.begin(), mods.end());
                for (const auto& lib : unique) ++s.library_usage[lib];
            }
        }
    }

    void merge(const StatsReport& other) {
        for (const auto& [id, o] : other.sources) {
            auto& s = sources[id];
            s.entries += o.entries;
            s.tool_calls += o.tool_calls;
            for (const auto& [lib, n] : o.library_usage) s.library_usage[lib] += n;
        }
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["sources"] = nlohmann::ordered_json::array();
        for (const auto& [id, s] : sources) {
            nlohmann::ordered_json row;
            row["source"] = id;
            row["entries"] = s.entries;
            row["tool_calls"] = s.tool_calls;
            row["libraries"] = s.library_usage.size();
            j["sources"].push_back(std::move(row));
        }
        auto usage = library_usage();
        j["totals"] = {{"entries", entries()}, {"tool_calls", tool_calls()}, {"libraries", usage.size()}};
        nlohmann::ordered_json lib = nlohmann::ordered_json::object();
        for (const auto& [name, n] : usage) lib[name] = n;
        j["library_usage"] = std::move(lib);
        return j;
    }
};

template <class Range>
StatsReport dataset_stats(const Range& entries, const SpecialTokens& toks = SpecialTokens::defaults()) {
    StatsReport r;
    for (const auto& e : entries) r.add(e, toks);
    return r;
}

}  // namespace toolspan
