#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "toolspan/core/entry.hpp"
#include "toolspan/core/errors.hpp"
#include "toolspan/core/jsonl.hpp"

namespace toolspan::pool {

enum class Adapter { ChatML, InstructionIO, Conversations, QAPair };

inline std::optional<Adapter> parse_adapter(std::string_view s) {
    if (s == "chatml") return Adapter::ChatML;
    if (s == "instruction_io") return Adapter::InstructionIO;
    if (s == "conversations") return Adapter::Conversations;
    if (s == "qa_pair") return Adapter::QAPair;
    return std::nullopt;
}

inline std::string_view to_string(Adapter a) {
    switch (a) {
        case Adapter::ChatML: return "chatml";
        case Adapter::InstructionIO: return "instruction_io";
        case Adapter::Conversations: return "conversations";
        case Adapter::QAPair: return "qa_pair";
    }
    return "chatml";
}

struct SourceDescriptor {
    std::string source_id;
    Adapter adapter = Adapter::ChatML;
    std::filesystem::path path;
    std::size_t entry_count = 0;  // filled in by normalization
};

namespace detail {

inline std::string field(const nlohmann::ordered_json& rec, const char* key, std::size_t line) {
    auto it = rec.find(key);
    if (it == rec.end() || !it->is_string())
        throw AdapterMismatch(line, std::string("missing string field '") + key + "'");
    return it->get<std::string>();
}

inline Role turn_role(const nlohmann::ordered_json& turn, std::size_t index, std::size_t line) {
    for (const char* key : {"from", "role"}) {
        auto it = turn.find(key);
        if (it == turn.end()) continue;
        if (!it->is_string()) throw AdapterMismatch(line, std::string("'") + key + "' is not a string");
        const auto tag = it->get<std::string>();
        if (tag == "human" || tag == "user") return Role::User;
        if (tag == "gpt" || tag == "assistant" || tag == "chatgpt" || tag == "bot") return Role::Assistant;
        if (tag == "system") return Role::System;
        throw AdapterMismatch(line, "unknown speaker '" + tag + "'");
    }
    // Untagged turns alternate, starting with the user.
    return index % 2 == 0 ? Role::User : Role::Assistant;
}

inline std::string turn_text(const nlohmann::ordered_json& turn, std::size_t line) {
    for (const char* key : {"value", "content", "text"}) {
        auto it = turn.find(key);
        if (it != turn.end() && it->is_string()) return it->get<std::string>();
    }
    throw AdapterMismatch(line, "turn has no text");
}

}  // namespace detail

// Maps one raw record onto ChatML. Throws AdapterMismatch on schema errors.
inline Entry normalize_record(std::string_view raw, Adapter adapter, std::size_t line) {
    nlohmann::ordered_json rec;
    try {
        rec = nlohmann::ordered_json::parse(raw);
    } catch (const nlohmann::json::parse_error& ex) {
        throw AdapterMismatch(line, std::string("malformed JSON: ") + ex.what());
    }
    if (!rec.is_object()) throw AdapterMismatch(line, "record is not an object");

    Entry e;
    switch (adapter) {
        case Adapter::ChatML:
            try {
                return entry_from_json(rec);
            } catch (const ParseError& ex) {
                throw AdapterMismatch(line, ex.what());
            }
        case Adapter::InstructionIO: {
            auto prompt = detail::field(rec, "instruction", line);
            auto input = rec.find("input");
            if (input != rec.end() && input->is_string() && !input->get<std::string>().empty())
                prompt += "\n\n" + input->get<std::string>();
            e.messages.push_back({Role::User, std::move(prompt)});
            e.messages.push_back({Role::Assistant, detail::field(rec, "output", line)});
            break;
        }
        case Adapter::Conversations: {
            auto turns = rec.find("conversations");
            if (turns == rec.end()) turns = rec.find("messages");
            if (turns == rec.end() || !turns->is_array() || turns->empty())
                throw AdapterMismatch(line, "missing 'conversations' list");
            std::size_t i = 0;
            for (const auto& turn : *turns) {
                if (!turn.is_object()) throw AdapterMismatch(line, "turn is not an object");
                e.messages.push_back({detail::turn_role(turn, i, line), detail::turn_text(turn, line)});
                ++i;
            }
            break;
        }
        case Adapter::QAPair:
            e.messages.push_back({Role::User, detail::field(rec, "question", line)});
            e.messages.push_back({Role::Assistant, detail::field(rec, "answer", line)});
            break;
    }
    return e;
}

struct NormalizeOptions {
    bool skip_bad_records = false;
    std::function<void(const AdapterMismatch&)> on_skip;  // log hook
};

struct NormalizeReport {
    std::size_t entries = 0;
    std::vector<std::size_t> skipped_lines;
};

// Streams every normalized entry of a source into `sink`, tagging it with the
// source id unless the record already carries one.
inline NormalizeReport normalize_source(SourceDescriptor& desc, const std::function<void(Entry&&)>& sink,
                                        const NormalizeOptions& options = {}) {
    NormalizeReport report;
    for_each_line(desc.path, [&](const std::string& line, std::size_t n) {
        Entry e;
        try {
            e = normalize_record(line, desc.adapter, n);
        } catch (const AdapterMismatch& ex) {
            if (!options.skip_bad_records) throw;
            report.skipped_lines.push_back(n);
            if (options.on_skip) options.on_skip(ex);
            return;
        }
        if (!e.source_id) e.source_id = desc.source_id;
        ++report.entries;
        sink(std::move(e));
    });
    desc.entry_count = report.entries;
    return report;
}

inline std::vector<Entry> normalize_all(SourceDescriptor& desc, const NormalizeOptions& options = {}) {
    std::vector<Entry> out;
    normalize_source(desc, [&](Entry&& e) { out.push_back(std::move(e)); }, options);
    return out;
}

}  // namespace toolspan::pool
