#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "toolspan/bench/gold.hpp"
#include "toolspan/bench/templates.hpp"
#include "toolspan/core/errors.hpp"
#include "toolspan/core/jsonl.hpp"
#include "toolspan/core/rng.hpp"

namespace toolspan::bench {

// n pairs from one master stream: per pair, a template drawn uniformly from
// `templates` (all 50 when empty), then a fresh seed for that template.
// generate_one(template_id, seed_trace) rebuilds any pair on its own.
inline std::vector<QAPair> gen_randomqa(std::size_t n, std::uint64_t seed, std::vector<int> templates = {}) {
    if (templates.empty())
        for (int t = 1; t <= kTemplateCount; ++t) templates.push_back(t);
    for (int t : templates)
        if (t < 1 || t > kTemplateCount) throw ConfigError("template id out of range: " + std::to_string(t));
    SplitMix64 master(seed);
    std::vector<QAPair> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int t = templates[master.below(templates.size())];
        out.push_back(generate_one(t, master.next()));
    }
    return out;
}

inline nlohmann::ordered_json qa_to_json(const QAPair& p) {
    nlohmann::ordered_json j;
    j["question"] = p.question;
    j["answer"] = gold_to_json(p.answer);
    j["template_id"] = p.template_id;
    j["seed_trace"] = p.seed_trace;
    return j;
}

inline QAPair qa_from_json(const nlohmann::json& j) {
    try {
        QAPair p;
        p.question = j.at("question").get<std::string>();
        p.answer = gold_from_json(j.at("answer"));
        p.template_id = j.at("template_id").get<int>();
        p.seed_trace = j.at("seed_trace").get<std::uint64_t>();
        return p;
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("bad QA pair: ") + ex.what());
    }
}

inline void write_randomqa(const std::filesystem::path& path, const std::vector<QAPair>& pairs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& p : pairs) out << qa_to_json(p).dump() << '\n';
}

inline std::vector<QAPair> read_randomqa(const std::filesystem::path& path) {
    std::vector<QAPair> out;
    for_each_line(path, [&](const std::string& line, std::size_t n) {
        try {
            out.push_back(qa_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& ex) {
            throw DataError(path.string() + ":" + std::to_string(n) + ": " + ex.what());
        } catch (const DataError& ex) {
            throw DataError(path.string() + ":" + std::to_string(n) + ": " + ex.what());
        }
    });
    return out;
}

}  // namespace toolspan::bench
