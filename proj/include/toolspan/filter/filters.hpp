#pragma once

#include <string>
#include <vector>

#include "toolspan/core/entry.hpp"
#include "toolspan/core/segment.hpp"
#include "toolspan/core/text.hpp"
#include "toolspan/filter/executor.hpp"
#include "toolspan/filter/trivial.hpp"

namespace toolspan {

inline constexpr Seconds kDefaultExecTimeout{30};

struct InjectResult {
    Entry entry;
    bool kept = false;
    std::size_t succeeded = 0;
    std::size_t failed = 0;
    std::size_t timed_out = 0;
};

// Runs every code span of every assistant message, in order. A span whose
// code produced output gains a result span right after its close token; a
// span that failed or timed out is deleted with its delimiters. Result spans
// already present in the input are discarded first, so results always come
// from this executor. Text segments pass through untouched.
inline InjectResult execute_and_inject(const Entry& e, Executor& ex, Seconds timeout = kDefaultExecTimeout,
                                       const SpecialTokens& toks = SpecialTokens::defaults()) {
    InjectResult r;
    r.entry = e;
    for (auto& m : r.entry.messages) {
        if (m.role != Role::Assistant) continue;
        Segments out;
        for (auto& seg : segment(m.content, toks)) {
            if (std::holds_alternative<ToolResult>(seg)) continue;
            if (auto* code = std::get_if<ToolCode>(&seg)) {
                auto outcome = ex.run(CodeSnippet{code->source}, timeout);
                if (auto* cap = std::get_if<Captured>(&outcome)) {
                    ++r.succeeded;
                    out.push_back(std::move(seg));
                    out.push_back(ToolResult{text::trim(cap->output)});
                } else if (std::holds_alternative<Timeout>(outcome)) {
                    ++r.timed_out;
                } else {
                    ++r.failed;
                }
                continue;
            }
            out.push_back(std::move(seg));
        }
        m.content = render(out, toks);
    }
    r.kept = r.succeeded > 0;
    return r;
}

// True when any code span in any assistant message is a bare
// assign-then-print of a literal.
inline bool has_trivial_code(const Entry& e, const SpecialTokens& toks = SpecialTokens::defaults()) {
    for (const auto& m : e.messages) {
        if (m.role != Role::Assistant) continue;
        for (const auto& seg : segment(m.content, toks))
            if (auto* code = std::get_if<ToolCode>(&seg); code && is_trivial_assign_print(code->source)) return true;
    }
    return false;
}

// Every result span's trimmed output must occur verbatim in the plain text
// that follows it: the rest of its own message plus all later assistant
// messages. Code and result spans are not searched.
inline bool consistency_filter(const Entry& e, const SpecialTokens& toks = SpecialTokens::defaults()) {
    std::vector<Segments> segs;
    for (const auto& m : e.messages) {
        if (m.role != Role::Assistant) continue;
        segs.push_back(segment(m.content, toks));
    }
    // later_text[i] = plain text of assistant messages after i.
    std::vector<std::string> later_text(segs.size() + 1);
    for (std::size_t i = segs.size(); i-- > 0;) later_text[i] = plain_text(segs[i]) + later_text[i + 1];

    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& ms = segs[i];
        for (std::size_t k = 0; k < ms.size(); ++k) {
            auto* res = std::get_if<ToolResult>(&ms[k]);
            if (!res) continue;
            std::string following;
            for (std::size_t j = k + 1; j < ms.size(); ++j)
                if (auto* t = std::get_if<TextSegment>(&ms[j])) following += t->text;
            following += later_text[i + 1];
            if (following.find(text::trim_view(res->output)) == std::string::npos) return false;
        }
    }
    return true;
}

}  // namespace toolspan
