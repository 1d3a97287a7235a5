#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "toolspan/core/entry.hpp"
#include "toolspan/core/errors.hpp"
#include "toolspan/core/tokens.hpp"

namespace toolspan {

struct TextSegment {
    std::string text;
    friend bool operator==(const TextSegment&, const TextSegment&) = default;
};

struct ToolCode {
    std::string source;
    friend bool operator==(const ToolCode&, const ToolCode&) = default;
};

struct ToolResult {
    std::string output;
    friend bool operator==(const ToolResult&, const ToolResult&) = default;
};

using Segment = std::variant<TextSegment, ToolCode, ToolResult>;
using Segments = std::vector<Segment>;

namespace detail {

struct TokenHit {
    std::size_t pos = std::string_view::npos;
    int which = -1;  // 0 code_open, 1 code_close, 2 result_open, 3 result_close
};

inline TokenHit next_delimiter(std::string_view s, std::size_t from, const SpecialTokens& t) {
    const std::string_view delims[4] = {t.code_open, t.code_close, t.result_open, t.result_close};
    TokenHit best;
    for (int i = 0; i < 4; ++i) {
        auto p = s.find(delims[i], from);
        if (p < best.pos) best = {p, i};
    }
    return best;
}

}  // namespace detail

// Splits content at delimiter boundaries. Spans are flat: any delimiter other
// than the matching close inside an open span is rejected, as is a close with
// no open or an open that never closes.
inline Segments segment(std::string_view content, const SpecialTokens& toks = SpecialTokens::defaults()) {
    Segments out;
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto hit = detail::next_delimiter(content, pos, toks);
        if (hit.which < 0) {
            out.push_back(TextSegment{std::string(content.substr(pos))});
            break;
        }
        if (hit.pos > pos) out.push_back(TextSegment{std::string(content.substr(pos, hit.pos - pos))});
        if (hit.which == 1) throw UnbalancedTokens(hit.pos, "'" + toks.code_close + "' without opening token");
        if (hit.which == 3) throw UnbalancedTokens(hit.pos, "'" + toks.result_close + "' without opening token");

        const bool code = hit.which == 0;
        const std::string& open = code ? toks.code_open : toks.result_open;
        const std::string& close = code ? toks.code_close : toks.result_close;
        const std::size_t body = hit.pos + open.size();
        auto inner = detail::next_delimiter(content, body, toks);
        if (inner.which < 0) throw UnbalancedTokens(hit.pos, "'" + open + "' is never closed");
        if (inner.which != (code ? 1 : 3))
            throw UnbalancedTokens(inner.pos, "unexpected delimiter inside '" + open + "' span");
        std::string inside(content.substr(body, inner.pos - body));
        if (code)
            out.push_back(ToolCode{std::move(inside)});
        else
            out.push_back(ToolResult{std::move(inside)});
        pos = inner.pos + close.size();
    }
    return out;
}

inline void render_to(std::string& out, const Segment& seg, const SpecialTokens& toks) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TextSegment>) {
                out += s.text;
            } else if constexpr (std::is_same_v<T, ToolCode>) {
                out += toks.code_open;
                out += s.source;
                out += toks.code_close;
            } else {
                out += toks.result_open;
                out += s.output;
                out += toks.result_close;
            }
        },
        seg);
}

inline std::string render(const Segments& segs, const SpecialTokens& toks = SpecialTokens::defaults()) {
    std::string out;
    for (const auto& s : segs) render_to(out, s, toks);
    return out;
}

inline std::size_t count_code(const Segments& segs) {
    std::size_t n = 0;
    for (const auto& s : segs) n += std::holds_alternative<ToolCode>(s);
    return n;
}

inline std::size_t count_results(const Segments& segs) {
    std::size_t n = 0;
    for (const auto& s : segs) n += std::holds_alternative<ToolResult>(s);
    return n;
}

// Concatenation of the Text segments only.
inline std::string plain_text(const Segments& segs) {
    std::string out;
    for (const auto& s : segs)
        if (auto* t = std::get_if<TextSegment>(&s)) out += t->text;
    return out;
}

// Indices of ToolResult segments that do not directly follow a ToolCode.
// The parser accepts them; callers decide whether to warn.
inline std::vector<std::size_t> orphan_results(const Segments& segs) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (!std::holds_alternative<ToolResult>(segs[i])) continue;
        if (i == 0 || !std::holds_alternative<ToolCode>(segs[i - 1])) idx.push_back(i);
    }
    return idx;
}

// Removes every code and result span (delimiters included) from assistant
// messages. Surrounding whitespace is preserved verbatim.
inline Entry strip_tool_spans(const Entry& e, const SpecialTokens& toks = SpecialTokens::defaults()) {
    Entry out = e;
    for (auto& m : out.messages) {
        if (m.role != Role::Assistant) continue;
        m.content = plain_text(segment(m.content, toks));
    }
    return out;
}

}  // namespace toolspan
