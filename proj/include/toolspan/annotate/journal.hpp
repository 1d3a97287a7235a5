#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "toolspan/core/errors.hpp"

namespace toolspan::annotate {

// Append-only record of per-entry results so an interrupted batch can resume.
// One JSON object per line: {"entry_id": ..., "outcome": ..., "payload"?: ...}.
// Writes go through one mutex and are flushed line by line; a truncated final
// line (crash mid-write) is ignored on reload.
class Journal {
public:
    struct Record {
        std::string outcome;
        nlohmann::json payload;
    };

    Journal() = default;

    explicit Journal(const std::filesystem::path& path) : path_(path) {
        if (std::filesystem::exists(path)) {
            std::ifstream in(path);
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                try {
                    auto j = nlohmann::json::parse(line);
                    Record r{j.at("outcome").get<std::string>(), j.value("payload", nlohmann::json())};
                    done_[j.at("entry_id").get<std::string>()] = std::move(r);
                } catch (const nlohmann::json::exception&) {
                    continue;
                }
            }
        }
        out_.open(path, std::ios::app | std::ios::binary);
        if (!out_) throw DataError("cannot open journal " + path.string());
    }

    std::optional<Record> find(const std::string& entry_id) const {
        std::lock_guard lock(mutex_);
        auto it = done_.find(entry_id);
        if (it == done_.end()) return std::nullopt;
        return it->second;
    }

    void record(const std::string& entry_id, const std::string& outcome, nlohmann::json payload = nullptr) {
        std::lock_guard lock(mutex_);
        if (out_.is_open()) {
            nlohmann::json j;
            j["entry_id"] = entry_id;
            j["outcome"] = outcome;
            if (!payload.is_null()) j["payload"] = payload;
            out_ << j.dump() << '\n';
            out_.flush();
        }
        done_[entry_id] = Record{outcome, std::move(payload)};
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return done_.size();
    }

private:
    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::ofstream out_;
    std::map<std::string, Record> done_;
};

}  // namespace toolspan::annotate
