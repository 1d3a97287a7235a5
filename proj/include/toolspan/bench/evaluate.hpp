#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "toolspan/bench/fact.hpp"
#include "toolspan/bench/gold.hpp"
#include "toolspan/bench/match.hpp"
#include "toolspan/bench/templates.hpp"
#include "toolspan/core/parallel.hpp"

namespace toolspan::bench {

struct EvalRecord {
    std::string question;
    GoldAnswer gold;
    int template_id = 0;  // 0 for factual pairs
    std::string predicted_text;
    bool matched = false;
    std::string error;  // set when the session threw
};

struct EvalReport {
    std::vector<EvalRecord> records;

    std::size_t matched() const {
        std::size_t n = 0;
        for (const auto& r : records) n += r.matched;
        return n;
    }
    double accuracy() const {
        return records.empty() ? 0.0 : static_cast<double>(matched()) / static_cast<double>(records.size());
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["total"] = records.size();
        j["matched"] = matched();
        j["accuracy"] = accuracy();
        std::map<int, std::pair<std::size_t, std::size_t>> per;
        for (const auto& r : records) {
            auto& [total, hit] = per[r.template_id];
            ++total;
            hit += r.matched;
        }
        auto breakdown = nlohmann::ordered_json::array();
        for (const auto& [id, th] : per) {
            breakdown.push_back({{"template_id", id},
                                 {"total", th.first},
                                 {"matched", th.second},
                                 {"accuracy", static_cast<double>(th.second) / static_cast<double>(th.first)}});
        }
        j["per_template"] = std::move(breakdown);
        auto recs = nlohmann::ordered_json::array();
        for (const auto& r : records) {
            nlohmann::ordered_json o;
            o["question"] = r.question;
            o["gold"] = gold_to_json(r.gold);
            o["template_id"] = r.template_id;
            o["predicted_text"] = r.predicted_text;
            o["matched"] = r.matched;
            if (!r.error.empty()) o["error"] = r.error;
            recs.push_back(std::move(o));
        }
        j["records"] = std::move(recs);
        return j;
    }
};

// Maps a question (the sole user message) to the model's reply text.
using Session = std::function<std::string(const std::string& question)>;

struct EvalItem {
    std::string question;
    GoldAnswer gold;
    int template_id = 0;
};

inline std::vector<EvalItem> eval_items(const std::vector<QAPair>& pairs) {
    std::vector<EvalItem> out;
    for (const auto& p : pairs) out.push_back({p.question, p.answer, p.template_id});
    return out;
}

inline std::vector<EvalItem> eval_items(const std::vector<FactPair>& pairs) {
    std::vector<EvalItem> out;
    for (const auto& p : pairs) out.push_back({p.question, TextGold{p.answer, false}, 0});
    return out;
}

// One session call per item on at most `workers` threads; a throwing
// session marks that item unmatched and the run continues.
inline EvalReport evaluate(const std::vector<EvalItem>& items, const Session& session, std::size_t workers = 1) {
    EvalReport report;
    report.records.resize(items.size());
    parallel_for(items.size(), workers, [&](std::size_t i) {
        auto& r = report.records[i];
        r.question = items[i].question;
        r.gold = items[i].gold;
        r.template_id = items[i].template_id;
        try {
            r.predicted_text = session(items[i].question);
            r.matched = answer_match(r.predicted_text, r.gold);
        } catch (const std::exception& ex) {
            r.error = ex.what();
            r.matched = false;
        }
    });
    return report;
}

inline EvalReport evaluate(const std::vector<QAPair>& pairs, const Session& session, std::size_t workers = 1) {
    return evaluate(eval_items(pairs), session, workers);
}

}  // namespace toolspan::bench
