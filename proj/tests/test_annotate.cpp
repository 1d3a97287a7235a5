#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "support.hpp"

using namespace toolspan;
using namespace toolspan::annotate;

namespace {

// Minimal OpenAI-style server on a free local port.
class FakeServer {
public:
    explicit FakeServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
        server_.Post("/v1/chat/completions", [this, handler](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            last_body = req.body;
            last_auth = req.get_header_value("Authorization");
            handler(req, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeServer() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

    std::atomic<int> hits{0};
    std::string last_body, last_auth;

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

std::string completion(const std::string& content) {
    return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

ChatEndpoint endpoint(const FakeServer& s, unsigned retries = 2) {
    ChatEndpoint ep;
    ep.base_url = s.url();
    ep.model_name = "judge-model";
    ep.timeout_seconds = 2;
    ep.max_retries = retries;
    ep.backoff_ms = 1;
    return ep;
}

FunctionChatClient canned(std::string reply) {
    return FunctionChatClient([reply](const ChatRequest&) { return reply; });
}

const Entry kEntry = support::qa("What is 3 + 4?", "3 + 4 is 7.", "e1");

}  // namespace

TEST(Prompts, AssetsMatchEmbeddedBodies) {
    EXPECT_EQ(support::slurp(support::assets_dir() / "prompts" / "judge.txt"), kJudgePrompt);
    EXPECT_EQ(support::slurp(support::assets_dir() / "prompts" / "convert.txt"), kConvertPrompt);
}

TEST(Prompts, ExactlyOnePlaceholderAndFill) {
    for (auto kind : {PromptKind::Judge, PromptKind::Convert}) {
        auto body = prompt_body(kind);
        auto at = body.find(kPlaceholder);
        ASSERT_NE(at, std::string_view::npos);
        EXPECT_EQ(body.find(kPlaceholder, at + 1), std::string_view::npos);
        auto filled = fill_prompt(kind, "<<payload>>");
        EXPECT_EQ(filled.find(kPlaceholder), std::string::npos);
        EXPECT_EQ(filled.size(), body.size() - kPlaceholder.size() + 11);
    }
}

TEST(Prompts, JudgeAndConvertBodiesCarryTheirInstructions) {
    EXPECT_NE(kJudgePrompt.find("\"Yes\" or \"No\""), std::string_view::npos);
    EXPECT_NE(kConvertPrompt.find("The last line of all code should print"), std::string_view::npos);
    EXPECT_NE(kConvertPrompt.find("13.11"), std::string_view::npos);
}

TEST(Verdict, PrefixRule) {
    EXPECT_EQ(parse_verdict("Yes"), Verdict::Yes);
    EXPECT_EQ(parse_verdict("  yes, clearly"), Verdict::Yes);
    EXPECT_EQ(parse_verdict("YES."), Verdict::Yes);
    EXPECT_EQ(parse_verdict("no, because..."), Verdict::No);
    EXPECT_EQ(parse_verdict("\nNo"), Verdict::No);
    EXPECT_EQ(parse_verdict("Yesterday"), Verdict::Ambiguous);
    EXPECT_EQ(parse_verdict("Maybe"), Verdict::Ambiguous);
    EXPECT_EQ(parse_verdict(""), Verdict::Ambiguous);
}

TEST(Judge, ValuableOnlyOnYes) {
    auto yes = canned("Yes");
    auto no = canned("no, because nothing to compute");
    auto odd = canned("It depends");
    EXPECT_TRUE(judge_valuable(kEntry, yes));
    EXPECT_FALSE(judge_valuable(kEntry, no));
    EXPECT_FALSE(judge_valuable(kEntry, odd));
    EXPECT_EQ(judge_entry(kEntry, odd), Verdict::Ambiguous);
}

TEST(Judge, RequestCarriesPromptWithEntryAndTag) {
    ChatRequest seen;
    FunctionChatClient c([&](const ChatRequest& r) {
        seen = r;
        return "Yes";
    });
    AnnotateOptions opts;
    opts.temperature = 0;
    judge_valuable(kEntry, c, opts);
    ASSERT_EQ(seen.messages.size(), 1u);
    EXPECT_EQ(seen.messages[0].role, Role::User);
    EXPECT_EQ(seen.messages[0].content, fill_prompt(PromptKind::Judge, prompt_json(kEntry)));
    EXPECT_NE(seen.messages[0].content.find(R"({"role": "user", "content": "What is 3 + 4?"})"), std::string::npos);
    EXPECT_EQ(seen.tag, "e1");
}

TEST(Judge, Deterministic) {
    int calls = 0;
    FunctionChatClient c([&](const ChatRequest& r) {
        ++calls;
        return r.messages[0].content.size() % 2 ? "Yes" : "No";
    });
    const bool first = judge_valuable(kEntry, c);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(judge_valuable(kEntry, c), first);
    EXPECT_EQ(calls, 6);
}

TEST(Convert, ReturnsReplyVerbatim) {
    const std::string reply = R"({"messages": [{"role": "user", "content": "Which number is greater, 13.11 or 13.8?"}, )"
                              R"({"role": "assistant", "content": "<python>greater_number = max(13.11, 13.8)\nprint(greater_number)</python>"}]})";
    auto c = canned(reply);
    EXPECT_EQ(convert_entry(kEntry, c), reply);
}

TEST(Convert, PromptTooLongIsContextTooLong) {
    auto c = canned("x");
    AnnotateOptions opts;
    opts.max_prompt_bytes = 100;
    EXPECT_THROW(convert_entry(kEntry, c, opts), ContextTooLong);
    opts.max_prompt_bytes = 100000;
    EXPECT_NO_THROW(convert_entry(kEntry, c, opts));
}

TEST(HttpClient, SendsContractAndReadsFirstChoice) {
    FakeServer s([](const httplib::Request&, httplib::Response& res) { res.set_content(completion("Yes"), "application/json"); });
    auto ep = endpoint(s);
    ep.api_key = "secret";
    ep.temperature = 0;
    HttpChatClient c(ep);
    EXPECT_TRUE(judge_valuable(kEntry, c));
    auto body = nlohmann::json::parse(s.last_body);
    EXPECT_EQ(body["model"], "judge-model");
    EXPECT_EQ(body["messages"][0]["role"], "user");
    EXPECT_EQ(body["temperature"], 0.0);
    EXPECT_EQ(s.last_auth, "Bearer secret");
}

TEST(HttpClient, RetriesServerErrorsThenSucceeds) {
    std::atomic<int> n{0};
    FakeServer s([&](const httplib::Request&, httplib::Response& res) {
        if (n++ < 2) {
            res.status = 503;
            return;
        }
        res.set_content(completion("No"), "application/json");
    });
    HttpChatClient c(endpoint(s, 2));
    EXPECT_FALSE(judge_valuable(kEntry, c));
    EXPECT_EQ(s.hits.load(), 3);
}

TEST(HttpClient, FiveHundredEveryTimeIsRequestFailed) {
    FakeServer s([](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    HttpChatClient c(endpoint(s, 3));
    EXPECT_THROW(convert_entry(kEntry, c), RequestFailed);
    EXPECT_EQ(s.hits.load(), 4);
}

TEST(HttpClient, ClientErrorsAreNotRetried) {
    FakeServer s([](const httplib::Request&, httplib::Response& res) { res.status = 400; });
    HttpChatClient c(endpoint(s, 3));
    EXPECT_THROW(convert_entry(kEntry, c), RequestFailed);
    EXPECT_EQ(s.hits.load(), 1);
}

TEST(HttpClient, ContentIsNeverRetried) {
    FakeServer s([](const httplib::Request&, httplib::Response& res) { res.set_content("{}", "application/json"); });
    HttpChatClient c(endpoint(s, 3));
    EXPECT_THROW(convert_entry(kEntry, c), RequestFailed);
    EXPECT_EQ(s.hits.load(), 1);
}

TEST(HttpClient, TransportTimeoutExhaustsRetries) {
    FakeServer s([](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(600));
        res.set_content(completion("Yes"), "application/json");
    });
    auto ep = endpoint(s, 1);
    ep.timeout_seconds = 0.2;
    HttpChatClient c(ep);
    EXPECT_THROW(judge_valuable(kEntry, c), RequestFailed);
    EXPECT_EQ(s.hits.load(), 2);
}

TEST(HttpClient, UnreachableHostFails) {
    ChatEndpoint ep;
    ep.base_url = "http://127.0.0.1:1/v1";
    ep.model_name = "m";
    ep.timeout_seconds = 0.5;
    ep.max_retries = 1;
    ep.backoff_ms = 1;
    HttpChatClient c(ep);
    EXPECT_THROW(judge_valuable(kEntry, c), RequestFailed);
    EXPECT_THROW(HttpChatClient(ChatEndpoint{"localhost:80", "m"}), ConfigError);
}

TEST(HttpClient, PathNormalization) {
    EXPECT_EQ(HttpChatClient(ChatEndpoint{"http://h:1/v1/", "m"}).path(), "/v1/chat/completions");
    EXPECT_EQ(HttpChatClient(ChatEndpoint{"http://h:1/api/chat/completions", "m"}).path(), "/api/chat/completions");
    EXPECT_EQ(HttpChatClient(ChatEndpoint{"http://h:1", "m"}).path(), "/chat/completions");
}

TEST(Replay, RepliesAndRecordedFailures) {
    auto dir = support::scratch("replay");
    support::write_replay(dir / "r.jsonl", {{"e1", "Yes"}}, {"e2"});
    auto c = ReplayChatClient::from_file(dir / "r.jsonl");
    EXPECT_TRUE(judge_valuable(kEntry, c));
    auto e2 = kEntry;
    e2.entry_id = "e2";
    EXPECT_THROW(judge_valuable(e2, c), RequestFailed);
    e2.entry_id = "e3";
    EXPECT_THROW(judge_valuable(e2, c), RequestFailed);
}

TEST(Validate, WellFormedInsertionAccepted) {
    auto orig = support::qa("What is the area of a circle of radius 5?", "The area is 78.54.", "c1");
    orig.source_id = "geo";
    auto reply = support::reply_for(support::qa(orig.messages[0].content,
                                                "The area is <python>import math\nprint(round(math.pi*5**2, 2))</python> 78.54."));
    auto v = validate_conversion(orig, reply);
    ASSERT_TRUE(v.accepted()) << v.detail;
    EXPECT_EQ(v.entry->entry_id, "c1");
    EXPECT_EQ(v.entry->source_id, "geo");
    EXPECT_EQ(count_code(segment(v.entry->messages[1].content)), 1u);
}

TEST(Validate, RejectionClasses) {
    auto orig = support::qa("Which is greater, 13.11 or 13.8?", "13.8 is greater.");
    auto reason = [&](const std::string& reply) {
        auto v = validate_conversion(orig, reply);
        EXPECT_FALSE(v.accepted());
        return v.reason.value_or(RejectReason::RequestFailed);
    };
    EXPECT_EQ(reason(support::reply_for(orig)), RejectReason::NoCodeInserted);
    EXPECT_EQ(reason(support::reply_for(support::qa(orig.messages[0].content, "<python>print(13.8) 13.8 is greater."))),
              RejectReason::ParseFailure);
    EXPECT_EQ(reason(support::reply_for(support::qa("Which is bigger?", "<python>print(1)</python>13.8 is greater."))),
              RejectReason::ParseFailure);
    EXPECT_EQ(reason(support::reply_for(support::qa(orig.messages[0].content, "<python>print(1)</python>13.8 is less."))),
              RejectReason::ParseFailure);
    EXPECT_EQ(reason(support::reply_for(support::qa(orig.messages[0].content, "<python>  </python>13.8 is greater."))),
              RejectReason::ParseFailure);
    EXPECT_EQ(reason("not json"), RejectReason::ParseFailure);
    EXPECT_EQ(reason(R"({"messages":[{"role":"user","content":"x"}]})"), RejectReason::ParseFailure);
}

TEST(Validate, WhitespaceRunsAreCollapsed) {
    auto orig = support::qa("q", "The  answer\nis 7.");
    auto v = validate_conversion(orig, support::reply_for(support::qa("q", "The answer is <python>print(7)</python> 7.")));
    EXPECT_TRUE(v.accepted()) << v.detail;
}

TEST(Validate, AcceptanceImpliesCleanSegmentsAndCode) {
    SplitMix64 rng(11);
    for (int i = 0; i < 300; ++i) {
        auto f = support::fuzz_content(rng);
        auto orig = support::qa("u", plain_text(f.expected));
        auto v = validate_conversion(orig, support::reply_for(support::qa("u", f.content)));
        if (!v.accepted()) continue;
        for (const auto& m : v.entry->messages) {
            if (m.role != Role::Assistant) continue;
            EXPECT_GE(count_code(segment(m.content)), 1u);
        }
    }
}

TEST(RejectionReport, ExampleFractions) {
    RejectionReport r;
    auto add = [&](Outcome o, int n) {
        for (int i = 0; i < n; ++i) r.add(o);
    };
    add(Kept{}, 24);
    add(RejectReason::NoCodeInserted, 19);
    add(RejectReason::ParseFailure, 27);
    add(RejectReason::RequestFailed, 2);
    add(RejectReason::TrivialAssignPrint, 5);
    add(RejectReason::ExecFailedAll, 23);
    EXPECT_EQ(r.kept_fraction(), 0.24);
    EXPECT_EQ(r.fraction(RejectReason::NoCodeInserted), 0.19);
    EXPECT_EQ(r.fraction(RejectReason::ParseFailure), 0.27);
    EXPECT_EQ(r.fraction(RejectReason::RequestFailed), 0.02);
    EXPECT_EQ(r.fraction(RejectReason::TrivialAssignPrint), 0.05);
    EXPECT_EQ(r.fraction(RejectReason::ExecFailedAll), 0.23);
    EXPECT_EQ(r.fraction(RejectReason::Inconsistent), 0.0);
    auto j = r.to_json();
    EXPECT_EQ(j["total"], 100);
    EXPECT_EQ(j["parse_failure"]["count"], 27);
}

TEST(RejectionReport, EmptyAndSingle) {
    RejectionReport r;
    EXPECT_EQ(r.kept_fraction(), 0.0);
    for (auto reason : kAllRejectReasons) EXPECT_EQ(r.fraction(reason), 0.0);
    r.add(Kept{});
    EXPECT_EQ(r.kept_fraction(), 1.0);
}

TEST(RejectionReport, MergeIsAssociativeAndSumsToOne) {
    SplitMix64 rng(4);
    std::vector<Outcome> outs;
    for (int i = 0; i < 500; ++i) {
        auto k = rng.below(7);
        outs.push_back(k == 6 ? Outcome{Kept{}} : Outcome{kAllRejectReasons[k]});
    }
    auto whole = rejection_report(outs);
    RejectionReport a, b;
    for (std::size_t i = 0; i < outs.size(); ++i) (i < 123 ? a : b).add(outs[i]);
    a.merge(b);
    EXPECT_EQ(a.total, whole.total);
    EXPECT_EQ(a.kept, whole.kept);
    EXPECT_EQ(a.counts, whole.counts);
    double sum = whole.kept_fraction();
    for (auto r : kAllRejectReasons) sum += whole.fraction(r);
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(RejectReasonNames, RoundTrip) {
    for (auto r : kAllRejectReasons) EXPECT_EQ(parse_reject_reason(to_string(r)), r);
    EXPECT_EQ(to_string(RejectReason::TrivialAssignPrint), "trivial_assign_print");
    EXPECT_FALSE(parse_reject_reason("bogus"));
}

TEST(Journal, ResumesAndIgnoresTruncatedTail) {
    auto dir = support::scratch("journal");
    {
        Journal j(dir / "j.jsonl");
        j.record("a", "valuable");
        j.record("b", "reply", "text");
    }
    {
        std::ofstream out(dir / "j.jsonl", std::ios::app);
        out << R"({"entry_id": "c", "outc)";
    }
    Journal again(dir / "j.jsonl");
    EXPECT_EQ(again.size(), 2u);
    EXPECT_EQ(again.find("a")->outcome, "valuable");
    EXPECT_EQ(again.find("b")->payload, "text");
    EXPECT_FALSE(again.find("c"));
}

TEST(Journal, ConcurrentWritersProduceWholeLines) {
    auto dir = support::scratch("journal_mt");
    {
        Journal j(dir / "j.jsonl");
        parallel_for(400, 8, [&](std::size_t i) { j.record("id" + std::to_string(i), "ok", std::string(100, 'x')); });
    }
    Journal again(dir / "j.jsonl");
    EXPECT_EQ(again.size(), 400u);
}
