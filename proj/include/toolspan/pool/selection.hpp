#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "toolspan/core/entry.hpp"
#include "toolspan/core/errors.hpp"
#include "toolspan/core/rng.hpp"

namespace toolspan::pool {

template <typename T>
struct Sample {
    std::vector<T> items;
    bool short_source = false;  // source had fewer than n items; all were returned
};

// Single-pass reservoir sample (Algorithm R) of n items, deterministic per seed.
template <typename Range>
auto reservoir_sample(const Range& source, std::size_t n, std::uint64_t seed)
    -> Sample<std::decay_t<decltype(*std::begin(source))>> {
    using T = std::decay_t<decltype(*std::begin(source))>;
    if (n == 0) throw std::invalid_argument("sample size must be positive");
    Sample<T> out;
    out.items.reserve(n);
    SplitMix64 rng(seed);
    std::size_t seen = 0;
    for (const auto& item : source) {
        if (seen < n) {
            out.items.push_back(item);
        } else {
            auto j = rng.below(seen + 1);
            if (j < n) out.items[j] = item;
        }
        ++seen;
    }
    out.short_source = seen < n;
    return out;
}

inline Sample<Entry> sample_entries(const std::vector<Entry>& source, std::size_t n, std::uint64_t seed) {
    return reservoir_sample(source, n, seed);
}

// Per-source value ratio W and quality ratio Q, both over the same N sampled
// entries. Counts are kept so products compare exactly.
struct PoolStats {
    std::string source_id;
    std::size_t sample_size = 0;
    std::size_t valuable_count = 0;
    std::size_t clean_count = 0;

    double w() const { return static_cast<double>(valuable_count) / static_cast<double>(sample_size); }
    double q() const { return static_cast<double>(clean_count) / static_cast<double>(sample_size); }
    double score() const { return q() * w(); }
};

inline PoolStats compute_stats(std::string source_id, const std::vector<bool>& judgements,
                               const std::vector<bool>& clean_labels) {
    if (judgements.empty() || clean_labels.empty()) throw DataError("empty sample for " + source_id);
    if (judgements.size() != clean_labels.size())
        throw DataError("judgement and label counts differ for " + source_id);
    PoolStats s;
    s.source_id = std::move(source_id);
    s.sample_size = judgements.size();
    s.valuable_count = static_cast<std::size_t>(std::count(judgements.begin(), judgements.end(), true));
    s.clean_count = static_cast<std::size_t>(std::count(clean_labels.begin(), clean_labels.end(), true));
    return s;
}

// True when a ranks strictly before b: higher Q*W first, then source id.
// Q*W = valuable*clean / N^2, compared by cross-multiplication.
inline bool ranks_before(const PoolStats& a, const PoolStats& b) {
    using u128 = unsigned __int128;
    const u128 lhs = u128(a.valuable_count) * a.clean_count * b.sample_size * b.sample_size;
    const u128 rhs = u128(b.valuable_count) * b.clean_count * a.sample_size * a.sample_size;
    if (lhs != rhs) return lhs > rhs;
    return a.source_id < b.source_id;
}

struct SelectionBudget {
    std::uint64_t target_entries = 10'000'000;
};

struct Take {
    std::string source_id;
    std::uint64_t count = 0;
    friend bool operator==(const Take&, const Take&) = default;
};

// Whole datasets in rank order; the one that crosses the budget is cut so the
// total lands on the budget exactly. Sources that contribute nothing are omitted.
inline std::vector<Take> rank_and_select(std::vector<PoolStats> stats,
                                         const std::map<std::string, std::uint64_t>& counts,
                                         SelectionBudget budget) {
    if (budget.target_entries == 0) throw ConfigError("budget must be at least 1");
    std::sort(stats.begin(), stats.end(), ranks_before);
    std::vector<Take> out;
    std::uint64_t remaining = budget.target_entries;
    for (const auto& s : stats) {
        if (remaining == 0) break;
        auto it = counts.find(s.source_id);
        if (it == counts.end()) throw DataError("no entry count for source " + s.source_id);
        const auto take = std::min(it->second, remaining);
        if (take == 0) continue;
        out.push_back({s.source_id, take});
        remaining -= take;
    }
    return out;
}

inline nlohmann::ordered_json stats_report(const std::vector<PoolStats>& stats,
                                           const std::map<std::string, std::uint64_t>& counts,
                                           const std::vector<Take>& takes) {
    std::map<std::string, std::uint64_t> taken;
    for (const auto& t : takes) taken[t.source_id] = t.count;
    auto sorted = stats;
    std::sort(sorted.begin(), sorted.end(), ranks_before);
    nlohmann::ordered_json sources = nlohmann::ordered_json::array();
    for (const auto& s : sorted) {
        nlohmann::ordered_json j;
        j["source_id"] = s.source_id;
        j["N"] = s.sample_size;
        j["valuable"] = s.valuable_count;
        j["clean"] = s.clean_count;
        j["W"] = s.w();
        j["Q"] = s.q();
        j["QxW"] = s.score();
        if (auto it = counts.find(s.source_id); it != counts.end()) j["entry_count"] = it->second;
        j["take_count"] = taken.count(s.source_id) ? taken[s.source_id] : 0;
        sources.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["sources"] = std::move(sources);
    std::uint64_t total = 0;
    for (const auto& t : takes) total += t.count;
    doc["selected_total"] = total;
    return doc;
}

inline PoolStats pool_stats_from_json(const nlohmann::json& j) {
    PoolStats s;
    s.source_id = j.at("source_id").get<std::string>();
    s.sample_size = j.at("N").get<std::size_t>();
    s.valuable_count = j.at("valuable").get<std::size_t>();
    s.clean_count = j.at("clean").get<std::size_t>();
    if (s.sample_size == 0 || s.valuable_count > s.sample_size || s.clean_count > s.sample_size)
        throw DataError("inconsistent stats for " + s.source_id);
    return s;
}

}  // namespace toolspan::pool
