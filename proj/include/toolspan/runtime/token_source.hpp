#pragma once

#include <deque>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "toolspan/annotate/chat.hpp"
#include "toolspan/core/errors.hpp"
#include "toolspan/core/tokens.hpp"

namespace toolspan::runtime {

using Tokens = std::vector<std::string>;

inline std::string join(const Tokens& toks, std::size_t from = 0, std::size_t to = std::string::npos) {
    std::string out;
    to = std::min(to, toks.size());
    for (std::size_t i = from; i < to; ++i) out += toks[i];
    return out;
}

// Cuts text into tokens: every special token stands alone, and the text in
// between is split into words that keep their leading whitespace. Joining the
// result gives back the input.
inline Tokens split_on_special(std::string_view text, const SpecialTokens& toks = SpecialTokens::defaults()) {
    Tokens out;
    auto words = [&](std::string_view s) {
        std::size_t i = 0;
        while (i < s.size()) {
            std::size_t j = i;
            while (j < s.size() && text::is_space(s[j])) ++j;
            while (j < s.size() && !text::is_space(s[j])) ++j;
            out.emplace_back(s.substr(i, j - i));
            i = j;
        }
    };
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t best = std::string_view::npos;
        std::string_view hit;
        for (auto t : toks.all()) {
            auto at = text.find(t, pos);
            if (at < best) {
                best = at;
                hit = t;
            }
        }
        if (best == std::string_view::npos) {
            words(text.substr(pos));
            break;
        }
        words(text.substr(pos, best - pos));
        out.emplace_back(hit);
        pos = best + hit.size();
    }
    return out;
}

// Produces the next token given everything generated so far (prompt plus
// outputs, including injected results). Returning the end-of-text token stops
// generation. begin() is called once per session before the first next().
class TokenSource {
public:
    virtual ~TokenSource() = default;
    virtual void begin(const Tokens& /*prompt*/) {}
    virtual std::string next(const Tokens& context) = 0;
};

// Replays a fixed token list; begin() rewinds, so every session sees the same
// stream. Emits end-of-text once the script runs out.
class ScriptTokenSource final : public TokenSource {
public:
    explicit ScriptTokenSource(Tokens script, const SpecialTokens& toks = SpecialTokens::defaults())
        : script_(std::move(script)), eot_(toks.end_of_text) {}

    // JSON list of token strings.
    static ScriptTokenSource from_file(const std::filesystem::path& path,
                                       const SpecialTokens& toks = SpecialTokens::defaults()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open script " + path.string());
        try {
            auto j = nlohmann::json::parse(in);
            return ScriptTokenSource(j.get<Tokens>(), toks);
        } catch (const nlohmann::json::exception& ex) {
            throw DataError(path.string() + ": " + ex.what());
        }
    }

    void begin(const Tokens&) override { cursor_ = 0; }

    std::string next(const Tokens&) override {
        if (cursor_ >= script_.size()) return eot_;
        return script_[cursor_++];
    }

    const Tokens& script() const { return script_; }

private:
    Tokens script_;
    std::string eot_;
    std::size_t cursor_ = 0;
};

// Incremental decoding over a chat endpoint. The prompt goes out as the user
// message and everything generated so far as a trailing assistant message to
// be continued. A reply is consumed only up to its first code close token:
// the rest was written without the tool result, so the endpoint is asked
// again once the session has injected it. A reply used up without a code
// close ends the session.
class ChatTokenSource final : public TokenSource {
public:
    ChatTokenSource(annotate::ChatClient& client, double temperature = 0,
                    const SpecialTokens& toks = SpecialTokens::defaults())
        : client_(client), temperature_(temperature), toks_(toks) {}

    void begin(const Tokens& prompt) override {
        prompt_size_ = prompt.size();
        pending_.clear();
        finished_ = false;
    }

    std::string next(const Tokens& context) override {
        if (pending_.empty()) {
            if (finished_) return toks_.end_of_text;
            refill(context);
            if (pending_.empty()) return toks_.end_of_text;
        }
        auto t = std::move(pending_.front());
        pending_.pop_front();
        return t;
    }

    std::size_t requests() const { return requests_; }

private:
    void refill(const Tokens& context) {
        annotate::ChatRequest req;
        req.temperature = temperature_;
        req.messages.push_back({Role::User, join(context, 0, prompt_size_)});
        if (context.size() > prompt_size_) req.messages.push_back({Role::Assistant, join(context, prompt_size_)});
        ++requests_;
        auto reply = client_.complete(req);
        finished_ = true;
        for (auto& t : split_on_special(reply, toks_)) {
            const bool close = t == toks_.code_close;
            pending_.push_back(std::move(t));
            if (close) {
                finished_ = false;
                break;
            }
        }
    }

    annotate::ChatClient& client_;
    double temperature_;
    SpecialTokens toks_;
    std::size_t prompt_size_ = 0;
    std::deque<std::string> pending_;
    bool finished_ = false;
    std::size_t requests_ = 0;
};

}  // namespace toolspan::runtime
