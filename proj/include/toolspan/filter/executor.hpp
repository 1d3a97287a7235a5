#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <string>
#include <variant>

#include "toolspan/core/text.hpp"

namespace toolspan {

using Seconds = std::chrono::duration<double>;

struct CodeSnippet {
    std::string source;

    bool blank() const { return text::trim_view(source).empty(); }
};

struct Captured {
    std::string output;  // trimmed stdout
    friend bool operator==(const Captured&, const Captured&) = default;
};
struct Failed {
    friend bool operator==(const Failed&, const Failed&) = default;
};
struct Timeout {
    friend bool operator==(const Timeout&, const Timeout&) = default;
};

using ExecOutcome = std::variant<Captured, Failed, Timeout>;

inline bool succeeded(const ExecOutcome& o) { return std::holds_alternative<Captured>(o); }

// Runs one snippet in a fresh isolated context. Implementations must return
// within the timeout plus a bounded grace period.
class Executor {
public:
    virtual ~Executor() = default;
    virtual ExecOutcome run(const CodeSnippet& code, Seconds timeout) = 0;
};

// In-process executor backed by a callable; counts invocations.
class FunctionExecutor final : public Executor {
public:
    explicit FunctionExecutor(std::function<ExecOutcome(const CodeSnippet&)> fn) : fn_(std::move(fn)) {}

    ExecOutcome run(const CodeSnippet& code, Seconds) override {
        ++calls_;
        return fn_(code);
    }

    std::size_t calls() const { return calls_.load(); }

private:
    std::function<ExecOutcome(const CodeSnippet&)> fn_;
    std::atomic<std::size_t> calls_{0};
};

}  // namespace toolspan
