#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "toolspan/core/errors.hpp"
#include "toolspan/core/jsonl.hpp"

namespace toolspan::bench {

inline constexpr std::array<std::string_view, 15> kFactTopics = {
    "Geography",     "History",         "Science",          "Technology",          "Mathematics",
    "Culture and Arts", "Sports",       "Politics",         "Language and Grammar", "Current Affairs",
    "Entertainment", "Medicine and Health", "Economics and Business", "Religion and Mythology",
    "General Knowledge",
};

inline std::string fact_prompt(std::string_view topic) {
    return "Generate 100 Q&A pairs for LLM factual retrieval testing. The question topic should be related with " +
           std::string(topic) + ". Return them as a Python dictionary, with concise answers (3-5 words).";
}

inline std::vector<std::string> emit_fact_prompts() {
    std::vector<std::string> out;
    for (auto t : kFactTopics) out.push_back(fact_prompt(t));
    return out;
}

// A hand-verified factual pair; the answer is matched as text.
struct FactPair {
    std::string question;
    std::string answer;
};

// JSONL lines {"question": ..., "answer": ...}.
inline std::vector<FactPair> load_fact_pairs(const std::filesystem::path& path) {
    std::vector<FactPair> out;
    for_each_line(path, [&](const std::string& line, std::size_t n) {
        try {
            auto j = nlohmann::json::parse(line);
            out.push_back({j.at("question").get<std::string>(), j.at("answer").get<std::string>()});
        } catch (const nlohmann::json::exception& ex) {
            throw DataError(path.string() + ":" + std::to_string(n) + ": " + ex.what());
        }
    });
    return out;
}

}  // namespace toolspan::bench
