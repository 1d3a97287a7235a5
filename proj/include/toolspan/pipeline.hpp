#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "toolspan/annotate/annotate.hpp"
#include "toolspan/annotate/journal.hpp"
#include "toolspan/annotate/validate.hpp"
#include "toolspan/core/entry.hpp"
#include "toolspan/core/parallel.hpp"
#include "toolspan/filter/executor.hpp"
#include "toolspan/filter/filters.hpp"

namespace toolspan {

// Each stage returns either the entry to pass on or the reason it was
// dropped. The CLI subcommands call these same functions one stage per run.
using StageResult = std::variant<Entry, RejectReason>;

enum class JudgeResult { Valuable, NotValuable, RequestFailed };

inline JudgeResult judge_stage(const Entry& e, annotate::ChatClient& judge, const annotate::AnnotateOptions& opts = {}) {
    try {
        return annotate::judge_valuable(e, judge, opts) ? JudgeResult::Valuable : JudgeResult::NotValuable;
    } catch (const RequestFailed&) {
        return JudgeResult::RequestFailed;
    } catch (const ContextTooLong&) {
        return JudgeResult::RequestFailed;
    }
}

// Conversion plus structural validation. A request that cannot be sent
// (endpoint failure or oversized prompt) is RequestFailed.
inline StageResult convert_stage(const Entry& e, annotate::ChatClient& converter,
                                 const annotate::AnnotateOptions& opts = {}) {
    std::string reply;
    try {
        reply = annotate::convert_entry(e, converter, opts);
    } catch (const RequestFailed&) {
        return RejectReason::RequestFailed;
    } catch (const ContextTooLong&) {
        return RejectReason::RequestFailed;
    }
    auto v = annotate::validate_conversion(e, reply);
    if (!v.accepted()) return *v.reason;
    return std::move(*v.entry);
}

inline StageResult trivial_stage(const Entry& e) {
    if (has_trivial_code(e)) return RejectReason::TrivialAssignPrint;
    return e;
}

inline StageResult exec_stage(const Entry& e, Executor& ex, Seconds timeout = kDefaultExecTimeout) {
    auto r = execute_and_inject(e, ex, timeout);
    if (!r.kept) return RejectReason::ExecFailedAll;
    return std::move(r.entry);
}

inline StageResult consistency_stage(const Entry& e) {
    if (!consistency_filter(e)) return RejectReason::Inconsistent;
    return e;
}

struct PipelineOptions {
    bool judge = true;  // false: every input is treated as valuable
    annotate::AnnotateOptions annotate;
    Seconds timeout = kDefaultExecTimeout;
    std::size_t workers = 8;
};

struct EntryOutcome {
    std::optional<std::string> entry_id;
    bool valuable = true;
    Outcome outcome = Kept{};
    std::optional<Entry> output;  // set when kept
};

struct PipelineResult {
    std::vector<EntryOutcome> entries;  // input order
    RejectionReport report;             // over valuable entries (and failed judge requests)
    std::size_t not_valuable = 0;

    std::vector<Entry> kept() const {
        std::vector<Entry> out;
        for (const auto& e : entries)
            if (e.output) out.push_back(*e.output);
        return out;
    }
};

inline EntryOutcome process_entry(const Entry& e, annotate::ChatClient* judge, annotate::ChatClient& converter,
                                  Executor& ex, const PipelineOptions& opts) {
    EntryOutcome o;
    o.entry_id = e.entry_id;
    if (opts.judge && judge) {
        auto j = judge_stage(e, *judge, opts.annotate);
        if (j == JudgeResult::NotValuable) {
            o.valuable = false;
            return o;
        }
        if (j == JudgeResult::RequestFailed) {
            o.outcome = RejectReason::RequestFailed;
            return o;
        }
    }
    StageResult cur = convert_stage(e, converter, opts.annotate);
    auto next = [&](auto&& fn) {
        if (auto* entry = std::get_if<Entry>(&cur)) cur = fn(*entry);
    };
    next([](const Entry& x) { return trivial_stage(x); });
    next([&](const Entry& x) { return exec_stage(x, ex, opts.timeout); });
    next([](const Entry& x) { return consistency_stage(x); });
    if (auto* r = std::get_if<RejectReason>(&cur)) {
        o.outcome = *r;
    } else {
        o.outcome = Kept{};
        o.output = std::move(std::get<Entry>(cur));
    }
    return o;
}

// Runs every entry through all stages on a bounded worker pool. `judge` may
// be null to skip judging. Results keep input order.
inline PipelineResult run_pipeline(const std::vector<Entry>& inputs, annotate::ChatClient* judge,
                                   annotate::ChatClient& converter, Executor& ex, const PipelineOptions& opts = {}) {
    PipelineResult result;
    result.entries.resize(inputs.size());
    parallel_for(inputs.size(), opts.workers,
                 [&](std::size_t i) { result.entries[i] = process_entry(inputs[i], judge, converter, ex, opts); });
    for (const auto& e : result.entries) {
        if (!e.valuable)
            ++result.not_valuable;
        else
            result.report.add(e.outcome);
    }
    return result;
}

}  // namespace toolspan
