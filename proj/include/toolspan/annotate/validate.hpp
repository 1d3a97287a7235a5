#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "toolspan/core/entry.hpp"
#include "toolspan/core/segment.hpp"
#include "toolspan/core/text.hpp"

namespace toolspan {

// Why an entry left the pipeline. Every dropped entry carries exactly one.
enum class RejectReason {
    NoCodeInserted,
    ParseFailure,
    RequestFailed,
    TrivialAssignPrint,
    ExecFailedAll,
    Inconsistent,
};

inline constexpr std::array<RejectReason, 6> kAllRejectReasons = {
    RejectReason::NoCodeInserted,     RejectReason::ParseFailure,  RejectReason::RequestFailed,
    RejectReason::TrivialAssignPrint, RejectReason::ExecFailedAll, RejectReason::Inconsistent,
};

inline std::string_view to_string(RejectReason r) {
    switch (r) {
        case RejectReason::NoCodeInserted: return "no_code_inserted";
        case RejectReason::ParseFailure: return "parse_failure";
        case RejectReason::RequestFailed: return "request_failed";
        case RejectReason::TrivialAssignPrint: return "trivial_assign_print";
        case RejectReason::ExecFailedAll: return "exec_failed_all";
        case RejectReason::Inconsistent: return "inconsistent";
    }
    return "parse_failure";
}

inline std::optional<RejectReason> parse_reject_reason(std::string_view s) {
    for (auto r : kAllRejectReasons)
        if (to_string(r) == s) return r;
    return std::nullopt;
}

struct Kept {
    friend bool operator==(const Kept&, const Kept&) = default;
};

using Outcome = std::variant<Kept, RejectReason>;

namespace annotate {

struct Validation {
    std::optional<Entry> entry;  // set when accepted
    std::optional<RejectReason> reason;
    std::string detail;

    bool accepted() const { return entry.has_value(); }
};

// Checks a converter reply against the entry it was produced from:
//  1. the reply is a ChatML entry with the same role sequence;
//  2. every assistant message segments cleanly and no code span is blank;
//  3. at least one code span exists (else NoCodeInserted);
//  4. user/system messages are byte-identical and assistant text with spans
//     removed equals the original modulo whitespace runs.
// Never throws. Provenance fields of the original carry over to the result.
inline Validation validate_conversion(const Entry& original, std::string_view reply,
                                      const SpecialTokens& toks = SpecialTokens::defaults()) {
    auto fail = [](RejectReason r, std::string detail) {
        Validation v;
        v.reason = r;
        v.detail = std::move(detail);
        return v;
    };

    Entry parsed;
    try {
        parsed = parse_entry(text::trim_view(reply));
    } catch (const std::exception& ex) {
        return fail(RejectReason::ParseFailure, ex.what());
    }
    if (parsed.messages.size() != original.messages.size())
        return fail(RejectReason::ParseFailure, "message count changed");
    for (std::size_t i = 0; i < parsed.messages.size(); ++i)
        if (parsed.messages[i].role != original.messages[i].role)
            return fail(RejectReason::ParseFailure, "role sequence changed at message " + std::to_string(i));

    std::size_t spans = 0;
    std::vector<Segments> segmented(parsed.messages.size());
    for (std::size_t i = 0; i < parsed.messages.size(); ++i) {
        if (parsed.messages[i].role != Role::Assistant) continue;
        try {
            segmented[i] = segment(parsed.messages[i].content, toks);
        } catch (const UnbalancedTokens& ex) {
            return fail(RejectReason::ParseFailure, ex.what());
        }
        for (const auto& s : segmented[i]) {
            if (auto* code = std::get_if<ToolCode>(&s)) {
                if (text::trim_view(code->source).empty())
                    return fail(RejectReason::ParseFailure, "empty code span");
                ++spans;
            }
        }
    }
    if (spans == 0) return fail(RejectReason::NoCodeInserted, "reply has no code span");

    for (std::size_t i = 0; i < parsed.messages.size(); ++i) {
        const auto& got = parsed.messages[i];
        const auto& want = original.messages[i];
        if (got.role != Role::Assistant) {
            if (got.content != want.content)
                return fail(RejectReason::ParseFailure, "non-assistant message " + std::to_string(i) + " modified");
            continue;
        }
        if (text::collapse_whitespace(plain_text(segmented[i])) != text::collapse_whitespace(want.content))
            return fail(RejectReason::ParseFailure, "assistant message " + std::to_string(i) + " modified");
    }

    parsed.source_id = original.source_id;
    parsed.entry_id = original.entry_id;
    parsed.extra = original.extra;
    Validation v;
    v.entry = std::move(parsed);
    return v;
}

}  // namespace annotate

// Histogram of pipeline outcomes. Fractions are over the total; kept plus
// all reasons sum to one (or everything is zero for an empty stream).
struct RejectionReport {
    std::size_t total = 0;
    std::size_t kept = 0;
    std::array<std::size_t, kAllRejectReasons.size()> counts{};

    void add(const Outcome& o) {
        ++total;
        if (std::holds_alternative<Kept>(o))
            ++kept;
        else
            ++counts[static_cast<std::size_t>(std::get<RejectReason>(o))];
    }

    void merge(const RejectionReport& other) {
        total += other.total;
        kept += other.kept;
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    }

    std::size_t count(RejectReason r) const { return counts[static_cast<std::size_t>(r)]; }

    double fraction(RejectReason r) const { return total ? static_cast<double>(count(r)) / total : 0.0; }
    double kept_fraction() const { return total ? static_cast<double>(kept) / total : 0.0; }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["total"] = total;
        j["kept"] = {{"count", kept}, {"fraction", kept_fraction()}};
        for (auto r : kAllRejectReasons)
            j[std::string(to_string(r))] = {{"count", count(r)}, {"fraction", fraction(r)}};
        return j;
    }
};

template <typename Range>
RejectionReport rejection_report(const Range& outcomes) {
    RejectionReport report;
    for (const auto& o : outcomes) report.add(o);
    return report;
}

}  // namespace toolspan
