#pragma once

#include <array>
#include <string>
#include <string_view>

#include "toolspan/core/errors.hpp"

namespace toolspan {

// Literal delimiters embedded in assistant content. They are matched as plain
// substrings, independent of any tokenizer.
struct SpecialTokens {
    std::string code_open = "<python>";
    std::string code_close = "</python>";
    std::string result_open = "<result>";
    std::string result_close = "</result>";
    std::string end_of_text = "<|end_of_text|>";

    std::array<std::string_view, 5> all() const {
        return {code_open, code_close, result_open, result_close, end_of_text};
    }

    // Throws ConfigError unless the five tokens are non-empty, pairwise
    // distinct, and none contains another.
    void validate() const {
        const auto toks = all();
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (toks[i].empty()) throw ConfigError("special token is empty");
            for (std::size_t j = 0; j < toks.size(); ++j) {
                if (i == j) continue;
                if (toks[i].find(toks[j]) != std::string_view::npos) {
                    throw ConfigError("special token '" + std::string(toks[j]) +
                                      "' overlaps '" + std::string(toks[i]) + "'");
                }
            }
        }
    }

    static const SpecialTokens& defaults() {
        static const SpecialTokens tokens;
        return tokens;
    }
};

}  // namespace toolspan
