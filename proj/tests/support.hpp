#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "toolspan/toolspan.hpp"

namespace support {

namespace fs = std::filesystem;
using toolspan::Entry;
using toolspan::Message;
using toolspan::Role;

inline fs::path fixtures_dir() { return TOOLSPAN_FIXTURES_DIR; }
inline fs::path assets_dir() { return TOOLSPAN_ASSETS_DIR; }
inline fs::path data_dir() { return TOOLSPAN_DATA_DIR; }
inline std::string fake_runner() { return TOOLSPAN_FAKE_RUNNER; }
inline std::string cli() { return TOOLSPAN_CLI; }

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << s;
}

// Fresh scratch directory per test.
inline fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("toolspan_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

inline Entry qa(const std::string& user, const std::string& assistant, std::optional<std::string> id = {}) {
    Entry e;
    e.messages = {{Role::User, user}, {Role::Assistant, assistant}};
    e.entry_id = std::move(id);
    return e;
}

// Executor keyed by exact snippet text; unknown code fails.
struct TableExecutor : toolspan::Executor {
    std::map<std::string, toolspan::ExecOutcome> table;
    std::vector<std::string> seen;
    std::mutex mutex;

    toolspan::ExecOutcome run(const toolspan::CodeSnippet& code, toolspan::Seconds) override {
        std::lock_guard lock(mutex);
        seen.push_back(code.source);
        auto it = table.find(code.source);
        return it == table.end() ? toolspan::ExecOutcome{toolspan::Failed{}} : it->second;
    }
};

struct CommandResult {
    int status = -1;
    std::string out;
};

// Runs a shell command, capturing stdout; stderr is discarded unless asked.
inline CommandResult run(const std::string& cmd, bool keep_stderr = false) {
    CommandResult r;
    std::string full = cmd + (keep_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* p = ::popen(full.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = ::pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

inline std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

// Balanced content built from random pieces, with the segmentation it must
// produce. Text pieces use an alphabet rich in delimiter fragments but are
// redrawn if they contain a whole delimiter.
struct Fuzzed {
    std::string content;
    toolspan::Segments expected;
};

inline Fuzzed fuzz_content(toolspan::SplitMix64& rng) {
    static const std::vector<std::string> atoms = {
        "a", "b", "x", " ", "\n", "<", ">", "/", "|", "python", "result", "<pyth", "on>", "</", "<resul",
        "t>", "end_of_text", "<|", "|>", "{\"k\": 1}", "\u00e9", "\xc3\xa9", "print(1)", "\t", "<py", "</re"};
    const auto& toks = toolspan::SpecialTokens::defaults();
    auto piece = [&](std::size_t max_atoms, const std::string& before = {}) {
        for (;;) {
            std::string s;
            auto n = rng.below(max_atoms + 1);
            for (std::size_t i = 0; i < n; ++i) s += atoms[rng.below(atoms.size())];
            const auto joined = before + s;
            bool clean = true;
            for (auto t : toks.all())
                if (joined.find(t) != std::string::npos) clean = false;
            if (clean) return s;
        }
    };
    Fuzzed f;
    std::string pending;
    auto flush = [&] {
        if (!pending.empty()) f.expected.push_back(toolspan::TextSegment{pending});
        pending.clear();
    };
    const auto parts = rng.below(9);
    for (std::size_t i = 0; i < parts; ++i) {
        switch (rng.below(4)) {
        case 0:
        case 1: {
            auto t = piece(6, pending);
            pending += t;
            f.content += t;
            break;
        }
        case 2: {
            flush();
            auto code = piece(5);
            f.content += toks.code_open + code + toks.code_close;
            f.expected.push_back(toolspan::ToolCode{code});
            if (rng.below(2)) {
                auto out = piece(3);
                f.content += toks.result_open + out + toks.result_close;
                f.expected.push_back(toolspan::ToolResult{out});
            }
            break;
        }
        default: {
            flush();
            auto out = piece(3);
            f.content += toks.result_open + out + toks.result_close;
            f.expected.push_back(toolspan::ToolResult{out});
        }
        }
    }
    flush();
    return f;
}

inline const std::vector<std::string>& unbalanced_fixtures() {
    static const std::vector<std::string> cases = {
        "<python>x</python><python>y",             // open never closed
        "stray </python> close",                   // close without open
        "<python>a<python>b</python></python>",    // nested code
        "<result>42",                              // result never closed
        "done</result>",                           // result close without open
        "<python>print(1)<result>1</result></python>",  // result inside code
    };
    return cases;
}

// Selection oracle: rank with exact rationals, lay every entry of every
// source out in rank order, take the first `budget` and count per source.
inline std::vector<toolspan::pool::Take> oracle_select(const std::vector<toolspan::pool::PoolStats>& stats,
                                                       const std::map<std::string, std::uint64_t>& counts,
                                                       std::uint64_t budget) {
    using boost::multiprecision::cpp_rational;
    std::vector<std::pair<cpp_rational, std::string>> ranked;
    for (const auto& s : stats)
        ranked.emplace_back(cpp_rational(s.valuable_count, s.sample_size) * cpp_rational(s.clean_count, s.sample_size),
                            s.source_id);
    // Selection sort keeps the oracle free of any shared comparator.
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        std::size_t best = i;
        for (std::size_t j = i + 1; j < ranked.size(); ++j) {
            const auto& a = ranked[j];
            const auto& b = ranked[best];
            if (a.first > b.first || (a.first == b.first && a.second < b.second)) best = j;
        }
        std::swap(ranked[i], ranked[best]);
    }
    std::vector<std::string> units;
    for (const auto& r : ranked)
        for (std::uint64_t k = 0; k < counts.at(r.second); ++k) units.push_back(r.second);
    std::vector<toolspan::pool::Take> out;
    for (std::uint64_t k = 0; k < units.size() && k < budget; ++k) {
        if (out.empty() || out.back().source_id != units[k]) out.push_back({units[k], 0});
        ++out.back().count;
    }
    return out;
}

struct RandomPool {
    std::vector<toolspan::pool::PoolStats> stats;
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t budget = 1;
    std::uint64_t total = 0;
};

// Up to 10 sources and 1,000 entries; small N so score ties are common.
inline RandomPool random_pool(toolspan::SplitMix64& rng) {
    RandomPool p;
    const auto sources = 1 + rng.below(10);
    std::uint64_t left = 1000;
    for (std::size_t i = 0; i < sources; ++i) {
        toolspan::pool::PoolStats s;
        s.source_id = std::string(1, static_cast<char>('a' + rng.below(26))) + std::to_string(i);
        s.sample_size = 1 + rng.below(6);
        s.valuable_count = rng.below(s.sample_size + 1);
        s.clean_count = rng.below(s.sample_size + 1);
        const auto n = left ? rng.below(std::min<std::uint64_t>(left, 300) + 1) : 0;
        left -= n;
        p.counts[s.source_id] = n;
        p.total += n;
        p.stats.push_back(s);
    }
    p.budget = 1 + rng.below(p.total + 200);
    return p;
}

// A corpus whose fate through judge, convert, filter-trivial, exec-filter and
// consistency-filter is fixed by construction. `replies` and `verdicts` are
// keyed by entry id; `exec` maps code to its outcome.
struct Corpus {
    std::vector<Entry> entries;
    std::map<std::string, std::string> verdicts;
    std::map<std::string, std::string> replies;
    std::set<std::string> request_failures;
    std::map<std::string, toolspan::ExecOutcome> exec;
    std::set<std::string> expected_kept;
    std::map<std::string, toolspan::Outcome> expected;  // valuable entries only
    std::set<std::string> not_valuable;
    std::size_t expected_tool_calls = 0;                // over kept entries
    std::set<std::string> expected_libraries;           // over kept entries
};

inline std::string reply_for(const Entry& converted) {
    Entry e = converted;
    e.entry_id.reset();
    return toolspan::serialize_entry(e);
}

// Group sizes give the outcome profile: 18 kept, 8 inconsistent, 6 not
// valuable, 6 without code, 4 trivial, 8 failing execution (50 total).
inline Corpus e2e_corpus() {
    Corpus c;
    static const char* libs[] = {"math", "datetime", "statistics", "fractions"};
    auto add = [&](const std::string& id, const Entry& e) {
        c.entries.push_back(e);
        c.entries.back().entry_id = id;
    };
    int k = 0;
    for (int i = 0; i < 18; ++i, ++k) {
        const std::string id = "e" + std::to_string(k);
        const int v = 1000 + 37 * i;
        const std::string lib = libs[i % 4];
        Entry e = qa("What is " + std::to_string(v) + " plus one?", "It is " + std::to_string(v + 1) + ".");
        std::string code = "import " + lib + "\nprint(" + std::to_string(v) + " + 1)";
        Entry conv = qa(e.messages[0].content, "It is <python>" + code + "</python> " + std::to_string(v + 1) + ".");
        if (i % 3 == 0) {
            std::string code2 = "print(" + std::to_string(v) + " * 2)";
            conv.messages[1].content += " Doubled: <python>" + code2 + "</python> " + std::to_string(v * 2) + ".";
            e.messages[1].content += " Doubled: " + std::to_string(v * 2) + ".";
            c.exec[code2] = toolspan::Captured{std::to_string(v * 2)};
            c.expected_tool_calls += 1;
        }
        add(id, e);
        c.verdicts[id] = "Yes";
        c.replies[id] = reply_for(conv);
        c.exec[code] = toolspan::Captured{std::to_string(v + 1)};
        c.expected_tool_calls += 1;
        c.expected_libraries.insert(lib);
        c.expected_kept.insert(id);
        c.expected[id] = toolspan::Kept{};
    }
    for (int i = 0; i < 8; ++i, ++k) {
        const std::string id = "e" + std::to_string(k);
        Entry e = qa("How many legs do " + std::to_string(i + 2) + " spiders have?", "They have 99 legs.");
        add(id, e);
        c.verdicts[id] = "yes";
        std::string code = "print(8 * " + std::to_string(i + 2) + ")";
        c.replies[id] = reply_for(qa(e.messages[0].content, "They have <python>" + code + "</python> 99 legs."));
        c.exec[code] = toolspan::Captured{std::to_string(8 * (i + 2))};
        c.expected[id] = toolspan::RejectReason::Inconsistent;
    }
    for (int i = 0; i < 6; ++i, ++k) {
        const std::string id = "e" + std::to_string(k);
        add(id, qa("Write a greeting number " + std::to_string(i) + ".", "Hello there!"));
        c.verdicts[id] = i % 2 ? "No" : "no, nothing to compute";
        c.not_valuable.insert(id);
    }
    for (int i = 0; i < 6; ++i, ++k) {
        const std::string id = "e" + std::to_string(k);
        Entry e = qa("Name colour " + std::to_string(i) + ".", "Blue, probably.");
        add(id, e);
        c.verdicts[id] = "Yes.";
        c.replies[id] = reply_for(e);
        c.expected[id] = toolspan::RejectReason::NoCodeInserted;
    }
    for (int i = 0; i < 4; ++i, ++k) {
        const std::string id = "e" + std::to_string(k);
        Entry e = qa("Store " + std::to_string(i) + " in a variable.", "The value is " + std::to_string(i) + ".");
        add(id, e);
        c.verdicts[id] = "Yes";
        std::string code = "value = " + std::to_string(i) + "\nprint(value)";
        c.replies[id] = reply_for(
            qa(e.messages[0].content, "The value is <python>" + code + "</python> " + std::to_string(i) + "."));
        c.exec[code] = toolspan::Captured{std::to_string(i)};
        c.expected[id] = toolspan::RejectReason::TrivialAssignPrint;
    }
    for (int i = 0; i < 8; ++i, ++k) {
        const std::string id = "e" + std::to_string(k);
        Entry e = qa("Divide " + std::to_string(i) + " by zero.", "That is undefined.");
        add(id, e);
        c.verdicts[id] = "Yes";
        std::string code = "print(" + std::to_string(i) + " / 0)";
        c.replies[id] = reply_for(qa(e.messages[0].content, "That is <python>" + code + "</python> undefined."));
        c.exec[code] = toolspan::Failed{};
        c.expected[id] = toolspan::RejectReason::ExecFailedAll;
    }
    return c;
}

// 100 valuable entries whose conversions end as 24 kept, 19 without code,
// 27 parse failures, 2 failed requests, 5 trivial and 23 failing execution.
inline Corpus rejection_fixture() {
    Corpus c;
    int k = 0;
    auto next = [&](toolspan::Outcome want) {
        const std::string id = "r" + std::to_string(k++);
        c.expected[id] = want;
        if (std::holds_alternative<toolspan::Kept>(want)) c.expected_kept.insert(id);
        return id;
    };
    auto base = [&](const std::string& id, int i) {
        Entry e = qa("Compute item " + std::to_string(i) + " of the table.", "The answer is " + std::to_string(i * 3) + ".");
        e.entry_id = id;
        c.entries.push_back(e);
        return e;
    };
    using toolspan::RejectReason;
    for (int i = 0; i < 24; ++i) {
        auto id = next(toolspan::Kept{});
        auto e = base(id, i);
        std::string code = "print(" + std::to_string(i) + " * 3)";
        c.replies[id] = reply_for(qa(e.messages[0].content, "The answer is <python>" + code + "</python> " +
                                                                std::to_string(i * 3) + "."));
        c.exec[code] = toolspan::Captured{std::to_string(i * 3)};
    }
    for (int i = 0; i < 19; ++i) {
        auto id = next(RejectReason::NoCodeInserted);
        c.replies[id] = reply_for(base(id, 100 + i));
    }
    for (int i = 0; i < 27; ++i) {
        auto id = next(RejectReason::ParseFailure);
        auto e = base(id, 200 + i);
        const std::string v = std::to_string((200 + i) * 3);
        switch (i % 3) {
        case 0:  // open without close
            c.replies[id] = reply_for(qa(e.messages[0].content, "The answer is <python>print(" + v + ") " + v + "."));
            break;
        case 1:  // user text altered
            c.replies[id] = reply_for(qa(e.messages[0].content + " Please.",
                                         "The answer is <python>print(" + v + ")</python> " + v + "."));
            break;
        default:  // not JSON at all
            c.replies[id] = "Sure! Here is the converted entry: The answer is <python>print(" + v + ")</python>";
        }
    }
    for (int i = 0; i < 2; ++i) {
        auto id = next(RejectReason::RequestFailed);
        base(id, 300 + i);
        c.request_failures.insert(id);
    }
    for (int i = 0; i < 5; ++i) {
        auto id = next(RejectReason::TrivialAssignPrint);
        auto e = base(id, 400 + i);
        const std::string v = std::to_string((400 + i) * 3);
        std::string code = "answer = " + v + "\nprint(f\"{answer}\")";
        c.replies[id] = reply_for(qa(e.messages[0].content, "The answer is <python>" + code + "</python> " + v + "."));
        c.exec[code] = toolspan::Captured{v};
    }
    for (int i = 0; i < 23; ++i) {
        auto id = next(RejectReason::ExecFailedAll);
        auto e = base(id, 500 + i);
        const std::string v = std::to_string((500 + i) * 3);
        std::string code = i % 2 ? "raise ValueError(" + std::to_string(i) + ")" : "while True: pass  # " + std::to_string(i);
        c.replies[id] = reply_for(qa(e.messages[0].content, "The answer is <python>" + code + "</python> " + v + "."));
        c.exec[code] = i % 2 ? toolspan::ExecOutcome{toolspan::Failed{}} : toolspan::ExecOutcome{toolspan::Timeout{}};
    }
    return c;
}

// Converter stub answering from a corpus by request tag.
inline toolspan::annotate::FunctionChatClient corpus_converter(const Corpus& c) {
    return toolspan::annotate::FunctionChatClient([&c](const toolspan::annotate::ChatRequest& req) -> std::string {
        if (c.request_failures.count(req.tag)) throw toolspan::RequestFailed("HTTP 500");
        auto it = c.replies.find(req.tag);
        if (it == c.replies.end()) throw toolspan::RequestFailed("no reply for " + req.tag);
        return it->second;
    });
}

inline toolspan::annotate::FunctionChatClient corpus_judge(const Corpus& c) {
    return toolspan::annotate::FunctionChatClient([&c](const toolspan::annotate::ChatRequest& req) -> std::string {
        auto it = c.verdicts.find(req.tag);
        if (it == c.verdicts.end()) throw toolspan::RequestFailed("no verdict for " + req.tag);
        return it->second;
    });
}

inline void write_replay(const fs::path& p, const std::map<std::string, std::string>& replies,
                         const std::set<std::string>& failures = {}) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    for (const auto& [id, reply] : replies) out << nlohmann::json{{"entry_id", id}, {"reply", reply}}.dump() << '\n';
    for (const auto& id : failures) out << nlohmann::json{{"entry_id", id}, {"error", "HTTP 500"}}.dump() << '\n';
}

// Table for the fake runner: {"code": {"stdout": ..., "exit": n, "hang": bool}}.
inline void write_runner_table(const fs::path& p, const std::map<std::string, toolspan::ExecOutcome>& exec) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [code, o] : exec) {
        if (auto* cap = std::get_if<toolspan::Captured>(&o))
            t[code] = {{"stdout", cap->output + "\n"}, {"exit", 0}};
        else if (std::holds_alternative<toolspan::Timeout>(o))
            t[code] = {{"hang", true}};
        else
            t[code] = {{"exit", 1}};
    }
    spit(p, t.dump(2));
}

}  // namespace support
