#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "toolspan/core/errors.hpp"

namespace toolspan {

enum class Role { User, Assistant, System };

inline std::string_view to_string(Role role) {
    switch (role) {
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
        case Role::System: return "system";
    }
    return "user";
}

inline std::optional<Role> parse_role(std::string_view s) {
    if (s == "user") return Role::User;
    if (s == "assistant") return Role::Assistant;
    if (s == "system") return Role::System;
    return std::nullopt;
}

struct Message {
    Role role = Role::User;
    std::string content;

    friend bool operator==(const Message&, const Message&) = default;
};

// One conversation in ChatML form. Unknown top-level keys of the source line
// are kept in `extra` so a parse/serialize cycle is lossless.
struct Entry {
    std::vector<Message> messages;
    std::optional<std::string> source_id;
    std::optional<std::string> entry_id;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();

    bool has_assistant() const {
        for (const auto& m : messages)
            if (m.role == Role::Assistant) return true;
        return false;
    }

    friend bool operator==(const Entry&, const Entry&) = default;
};

namespace detail {

inline std::string require_string(const nlohmann::json& obj, const char* key, const char* field) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(ParseError::Kind::MissingField, std::string("missing field '") + field + "'");
    if (!it->is_string())
        throw ParseError(ParseError::Kind::MalformedJson, std::string("field '") + field + "' is not a string");
    return it->get<std::string>();
}

}  // namespace detail

inline Entry entry_from_json(const nlohmann::ordered_json& doc) {
    if (!doc.is_object()) throw ParseError(ParseError::Kind::MalformedJson, "entry is not a JSON object");
    auto msgs = doc.find("messages");
    if (msgs == doc.end()) throw ParseError(ParseError::Kind::MissingField, "missing field 'messages'");
    if (!msgs->is_array()) throw ParseError(ParseError::Kind::MalformedJson, "'messages' is not a list");
    if (msgs->empty()) throw ParseError(ParseError::Kind::MissingField, "'messages' is empty");

    Entry e;
    e.messages.reserve(msgs->size());
    for (const auto& m : *msgs) {
        if (!m.is_object()) throw ParseError(ParseError::Kind::MalformedJson, "message is not an object");
        auto role_text = detail::require_string(m, "role", "role");
        auto role = parse_role(role_text);
        if (!role) throw ParseError(ParseError::Kind::UnknownRole, "unknown role '" + role_text + "'");
        e.messages.push_back({*role, detail::require_string(m, "content", "content")});
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const auto& key = it.key();
        if (key == "messages") continue;
        if (key == "source_id" || key == "entry_id") {
            if (!it->is_string())
                throw ParseError(ParseError::Kind::MalformedJson, "field '" + key + "' is not a string");
            (key == "source_id" ? e.source_id : e.entry_id) = it->get<std::string>();
            continue;
        }
        e.extra[key] = *it;
    }
    return e;
}

// Parses one JSONL line. Throws ParseError.
inline Entry parse_entry(std::string_view line) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& ex) {
        throw ParseError(ParseError::Kind::MalformedJson, ex.what());
    }
    return entry_from_json(doc);
}

inline nlohmann::ordered_json messages_to_json(const std::vector<Message>& messages) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& m : messages) {
        nlohmann::ordered_json jm;
        jm["role"] = to_string(m.role);
        jm["content"] = m.content;
        arr.push_back(std::move(jm));
    }
    return arr;
}

inline nlohmann::ordered_json entry_to_json(const Entry& e) {
    nlohmann::ordered_json doc;
    doc["messages"] = messages_to_json(e.messages);
    if (e.source_id) doc["source_id"] = *e.source_id;
    if (e.entry_id) doc["entry_id"] = *e.entry_id;
    for (auto it = e.extra.begin(); it != e.extra.end(); ++it) doc[it.key()] = *it;
    return doc;
}

// Single line, no trailing newline. JSON escaping never touches the special
// tokens, so they appear verbatim.
inline std::string serialize_entry(const Entry& e) { return entry_to_json(e).dump(); }

// Spaced layout (`{"messages": [{"role": "user", ...}]}`) used by the prompt
// examples; only the messages are included.
inline std::string prompt_json(const Entry& e) {
    std::string out = "{\"messages\": [";
    for (std::size_t i = 0; i < e.messages.size(); ++i) {
        if (i) out += ", ";
        out += "{\"role\": ";
        out += nlohmann::json(std::string(to_string(e.messages[i].role))).dump();
        out += ", \"content\": ";
        out += nlohmann::json(e.messages[i].content).dump();
        out += "}";
    }
    out += "]}";
    return out;
}

}  // namespace toolspan
