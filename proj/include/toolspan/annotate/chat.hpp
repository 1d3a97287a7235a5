#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "toolspan/core/entry.hpp"
#include "toolspan/core/errors.hpp"
#include "toolspan/core/jsonl.hpp"

namespace toolspan::annotate {

struct ChatEndpoint {
    std::string base_url;  // ".../v1" or a full ".../chat/completions" URL
    std::string model_name;
    double timeout_seconds = 60;
    unsigned max_retries = 2;
    double temperature = 0;
    std::string api_key;
    unsigned backoff_ms = 250;  // doubled per retry
};

struct ChatRequest {
    std::vector<Message> messages;
    double temperature = 0;
    // Opaque correlation key (usually the entry id). Not sent over the wire.
    std::string tag;
};

// Returns the assistant reply text or throws RequestFailed.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
};

// OpenAI-style chat completion over HTTP. Transport failures and 5xx
// responses are retried up to max_retries times; anything else fails at once.
// Each call builds its own connection, so one client may serve many threads.
class HttpChatClient final : public ChatClient {
public:
    explicit HttpChatClient(ChatEndpoint endpoint) : endpoint_(std::move(endpoint)) {
        auto scheme = endpoint_.base_url.find("://");
        if (scheme == std::string::npos) throw ConfigError("endpoint URL needs a scheme: " + endpoint_.base_url);
        auto slash = endpoint_.base_url.find('/', scheme + 3);
        origin_ = endpoint_.base_url.substr(0, slash);
        path_ = slash == std::string::npos ? "" : endpoint_.base_url.substr(slash);
        while (!path_.empty() && path_.back() == '/') path_.pop_back();
        const std::string suffix = "/chat/completions";
        if (path_.size() < suffix.size() || path_.compare(path_.size() - suffix.size(), suffix.size(), suffix) != 0)
            path_ += suffix;
    }

    std::string complete(const ChatRequest& request) override {
        nlohmann::json body;
        body["model"] = endpoint_.model_name;
        body["messages"] = nlohmann::json::parse(messages_to_json(request.messages).dump());
        body["temperature"] = request.temperature;
        const auto payload = body.dump();

        std::string last_error;
        unsigned delay = endpoint_.backoff_ms;
        for (unsigned attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
            if (attempt > 0 && delay > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(delay));
                delay *= 2;
            }
            httplib::Client client(origin_);
            const auto secs = std::chrono::duration<double>(endpoint_.timeout_seconds);
            client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
            client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
            client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
            httplib::Headers headers;
            if (!endpoint_.api_key.empty()) headers.emplace("Authorization", "Bearer " + endpoint_.api_key);

            auto res = client.Post(path_, headers, payload, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status < 200 || res->status >= 300)
                throw RequestFailed("HTTP " + std::to_string(res->status) + " from " + origin_ + path_);
            return extract_content(res->body);
        }
        throw RequestFailed(last_error + " after " + std::to_string(endpoint_.max_retries + 1) + " attempts");
    }

    static std::string extract_content(const std::string& body) {
        try {
            auto doc = nlohmann::json::parse(body);
            const auto& content = doc.at("choices").at(0).at("message").at("content");
            if (content.is_null()) return {};
            return content.get<std::string>();
        } catch (const nlohmann::json::exception& ex) {
            throw RequestFailed(std::string("unexpected response body: ") + ex.what());
        }
    }

    const std::string& path() const { return path_; }

private:
    ChatEndpoint endpoint_;
    std::string origin_;
    std::string path_;
};

// Deterministic stand-in driven by a callable.
class FunctionChatClient final : public ChatClient {
public:
    explicit FunctionChatClient(std::function<std::string(const ChatRequest&)> fn) : fn_(std::move(fn)) {}
    std::string complete(const ChatRequest& request) override { return fn_(request); }

private:
    std::function<std::string(const ChatRequest&)> fn_;
};

// Canned replies keyed by request tag, loaded from JSONL lines
// {"entry_id": "...", "reply": "..."}; {"entry_id": "...", "error": "..."}
// replays a failed request.
class ReplayChatClient final : public ChatClient {
public:
    explicit ReplayChatClient(std::map<std::string, std::optional<std::string>> replies)
        : replies_(std::move(replies)) {}

    static ReplayChatClient from_file(const std::filesystem::path& path) {
        std::map<std::string, std::optional<std::string>> replies;
        for_each_line(path, [&](const std::string& line, std::size_t n) {
            try {
                auto j = nlohmann::json::parse(line);
                auto id = j.at("entry_id").get<std::string>();
                if (j.contains("reply"))
                    replies[id] = j["reply"].get<std::string>();
                else
                    replies[id] = std::nullopt;
            } catch (const nlohmann::json::exception& ex) {
                throw DataError(path.string() + ":" + std::to_string(n) + ": " + ex.what());
            }
        });
        return ReplayChatClient(std::move(replies));
    }

    std::string complete(const ChatRequest& request) override {
        auto it = replies_.find(request.tag);
        if (it == replies_.end()) throw RequestFailed("no recorded reply for '" + request.tag + "'");
        if (!it->second) throw RequestFailed("recorded failure for '" + request.tag + "'");
        return *it->second;
    }

private:
    std::map<std::string, std::optional<std::string>> replies_;
};

}  // namespace toolspan::annotate
