#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "toolspan/annotate/chat.hpp"
#include "toolspan/annotate/prompts.hpp"
#include "toolspan/core/entry.hpp"
#include "toolspan/core/errors.hpp"

namespace toolspan::annotate {

enum class Verdict { Yes, No, Ambiguous };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        case Verdict::Ambiguous: return "ambiguous";
    }
    return "ambiguous";
}

// Verdict is the first alphabetic word after leading whitespace.
inline Verdict parse_verdict(std::string_view reply) {
    std::size_t i = 0;
    while (i < reply.size() && std::isspace(static_cast<unsigned char>(reply[i]))) ++i;
    std::string word;
    while (i < reply.size() && std::isalpha(static_cast<unsigned char>(reply[i])))
        word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(reply[i++]))));
    if (word == "yes") return Verdict::Yes;
    if (word == "no") return Verdict::No;
    return Verdict::Ambiguous;
}

struct AnnotateOptions {
    double temperature = 0;
    std::size_t max_prompt_bytes = 0;  // 0 disables the check
};

inline ChatRequest build_request(PromptKind kind, const Entry& e, const AnnotateOptions& options) {
    auto prompt = fill_prompt(kind, prompt_json(e));
    if (options.max_prompt_bytes != 0 && prompt.size() > options.max_prompt_bytes)
        throw ContextTooLong(prompt.size(), options.max_prompt_bytes);
    ChatRequest req;
    req.messages.push_back({Role::User, std::move(prompt)});
    req.temperature = options.temperature;
    req.tag = e.entry_id.value_or("");
    return req;
}

// Throws RequestFailed once the client gives up.
inline Verdict judge_entry(const Entry& e, ChatClient& client, const AnnotateOptions& options = {}) {
    return parse_verdict(client.complete(build_request(PromptKind::Judge, e, options)));
}

// Ambiguous replies count as not valuable.
inline bool judge_valuable(const Entry& e, ChatClient& client, const AnnotateOptions& options = {}) {
    return judge_entry(e, client, options) == Verdict::Yes;
}

// Raw converter reply, unvalidated.
inline std::string convert_entry(const Entry& e, ChatClient& client, const AnnotateOptions& options = {}) {
    return client.complete(build_request(PromptKind::Convert, e, options));
}

}  // namespace toolspan::annotate
