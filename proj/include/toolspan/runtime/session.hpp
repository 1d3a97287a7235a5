#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toolspan/core/errors.hpp"
#include "toolspan/core/tokens.hpp"
#include "toolspan/filter/executor.hpp"
#include "toolspan/runtime/token_source.hpp"

namespace toolspan::runtime {

struct GenConfig {
    std::size_t max_new_tokens = 512;
    double temperature = 0;
    Seconds timeout{30};
};

enum class Mode { Plain, InCode };

// inputs is the conditioning context (prompt followed by every kept output
// token); outputs holds only what the session produced. Both are edited
// together, so inputs always ends with outputs.
struct SessionState {
    Mode mode = Mode::Plain;
    std::optional<std::size_t> code_start;  // index of the open token in outputs
    Tokens inputs;
    Tokens outputs;
    std::size_t executor_calls = 0;
    std::size_t failed_spans = 0;
    std::vector<std::size_t> stray_closes;  // output indices of close tokens seen in Plain mode

    std::size_t prompt_size() const { return inputs.size() - outputs.size(); }
};

// Removes outputs[from..] and the matching tail of inputs.
inline void truncate_outputs(SessionState& s, std::size_t from) {
    const auto base = s.prompt_size();
    s.outputs.resize(from);
    s.inputs.resize(base + from);
}

// One transition of the interpreter. A close token while in code runs the
// enclosed text (everything strictly between the delimiters, concatenated)
// and either appends a result span or excises the whole failed span. Inside a
// span an open token is just code text. A close token in Plain mode stays as
// text and is noted in stray_closes.
inline SessionState step(SessionState s, const std::string& token, Executor& ex, Seconds timeout = Seconds(30),
                         const SpecialTokens& toks = SpecialTokens::defaults()) {
    if (s.mode == Mode::Plain) {
        if (token == toks.code_open) {
            s.mode = Mode::InCode;
            s.code_start = s.outputs.size();
        } else if (token == toks.code_close) {
            s.stray_closes.push_back(s.outputs.size());
        }
        s.outputs.push_back(token);
        s.inputs.push_back(token);
        return s;
    }
    if (token != toks.code_close) {
        s.outputs.push_back(token);
        s.inputs.push_back(token);
        return s;
    }
    const auto start = *s.code_start;
    CodeSnippet code{join(s.outputs, start + 1)};
    ++s.executor_calls;
    auto outcome = ex.run(code, timeout);
    s.mode = Mode::Plain;
    s.code_start.reset();
    if (auto* cap = std::get_if<Captured>(&outcome)) {
        for (const std::string* t : {&token, &toks.result_open, &std::as_const(cap->output), &toks.result_close}) {
            s.outputs.push_back(*t);
            s.inputs.push_back(*t);
        }
    } else {
        ++s.failed_spans;
        truncate_outputs(s, start);
    }
    return s;
}

struct RunResult {
    Tokens outputs;
    Tokens inputs;
    std::size_t emitted = 0;  // budget units used
    bool budget_exhausted = false;
    bool abandoned_span = false;  // an open span was cut off and removed
    std::size_t executor_calls = 0;
    std::size_t failed_spans = 0;
    std::vector<std::size_t> stray_closes;
};

// Each source token costs one unit of max_new_tokens and each injected result
// costs three (open, output, close), so outputs never exceed the budget.
// Generation stops on the end-of-text token, which is kept in outputs, or when
// the budget runs out. If either happens inside an open span, including a
// close that leaves no room for its result, the partial span is removed.
inline RunResult run_inference(const Tokens& prompt, TokenSource& src, Executor& ex, const GenConfig& cfg = {},
                               const SpecialTokens& toks = SpecialTokens::defaults()) {
    if (prompt.empty()) throw ConfigError("empty prompt");
    if (cfg.max_new_tokens == 0) throw ConfigError("max_new_tokens must be positive");
    SessionState s;
    s.inputs = prompt;
    RunResult r;
    src.begin(prompt);
    bool stopped = false;
    while (r.emitted < cfg.max_new_tokens) {
        auto token = src.next(s.inputs);
        ++r.emitted;
        if (token == toks.end_of_text) {
            if (s.mode == Mode::InCode) {
                truncate_outputs(s, *s.code_start);
                s.mode = Mode::Plain;
                s.code_start.reset();
                r.abandoned_span = true;
            }
            s.outputs.push_back(token);
            s.inputs.push_back(token);
            stopped = true;
            break;
        }
        if (s.mode == Mode::InCode && token == toks.code_close && r.emitted + 3 > cfg.max_new_tokens) {
            // No room left for the result span: the call is never made.
            truncate_outputs(s, *s.code_start);
            s.mode = Mode::Plain;
            s.code_start.reset();
            r.abandoned_span = true;
            break;
        }
        const auto calls = s.executor_calls;
        const auto failed = s.failed_spans;
        s = step(std::move(s), token, ex, cfg.timeout, toks);
        if (s.executor_calls > calls && s.failed_spans == failed) r.emitted += 3;
    }
    if (!stopped) {
        r.budget_exhausted = true;
        if (s.mode == Mode::InCode) {
            truncate_outputs(s, *s.code_start);
            s.mode = Mode::Plain;
            r.abandoned_span = true;
        }
    }
    r.outputs = std::move(s.outputs);
    r.inputs = std::move(s.inputs);
    r.executor_calls = s.executor_calls;
    r.failed_spans = s.failed_spans;
    r.stray_closes = std::move(s.stray_closes);
    return r;
}

}  // namespace toolspan::runtime
