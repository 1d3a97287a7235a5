#include <gtest/gtest.h>

#include "support.hpp"

using namespace toolspan;

namespace {

PipelineResult run_corpus(const support::Corpus& c, bool judge, std::size_t workers = 8) {
    auto judge_client = support::corpus_judge(c);
    auto converter = support::corpus_converter(c);
    support::TableExecutor ex;
    ex.table = c.exec;
    PipelineOptions opts;
    opts.judge = judge;
    opts.workers = workers;
    return run_pipeline(c.entries, judge ? &judge_client : nullptr, converter, ex, opts);
}

}  // namespace

TEST(Pipeline, EndToEndOutcomesPerEntry) {
    const auto c = support::e2e_corpus();
    auto r = run_corpus(c, true);
    ASSERT_EQ(r.entries.size(), 50u);
    EXPECT_EQ(r.not_valuable, 6u);
    for (const auto& o : r.entries) {
        const auto& id = o.entry_id.value();
        if (c.not_valuable.count(id)) {
            EXPECT_FALSE(o.valuable) << id;
            continue;
        }
        EXPECT_EQ(o.outcome, c.expected.at(id)) << id;
        EXPECT_EQ(o.output.has_value(), c.expected_kept.count(id) == 1) << id;
    }
    EXPECT_EQ(r.report.total, 44u);
    EXPECT_EQ(r.report.kept, 18u);
    EXPECT_EQ(r.report.count(RejectReason::Inconsistent), 8u);
    EXPECT_EQ(r.report.count(RejectReason::NoCodeInserted), 6u);
    EXPECT_EQ(r.report.count(RejectReason::TrivialAssignPrint), 4u);
    EXPECT_EQ(r.report.count(RejectReason::ExecFailedAll), 8u);
}

TEST(Pipeline, KeptEntriesCarryInjectedResultsAndExpectedStats) {
    const auto c = support::e2e_corpus();
    auto kept = run_corpus(c, true).kept();
    ASSERT_EQ(kept.size(), 18u);
    for (const auto& e : kept) {
        const auto& a = e.messages.back().content;
        EXPECT_NE(a.find("</python><result>"), std::string::npos) << a;
        EXPECT_TRUE(consistency_filter(e));
        EXPECT_FALSE(has_trivial_code(e));
    }
    auto stats = dataset_stats(kept);
    EXPECT_EQ(stats.tool_calls(), c.expected_tool_calls);
    std::set<std::string> libs;
    for (const auto& [name, _] : stats.library_usage()) libs.insert(name);
    EXPECT_EQ(libs, c.expected_libraries);
}

TEST(Pipeline, OutputOrderIndependentOfWorkerCount) {
    const auto c = support::e2e_corpus();
    auto one = run_corpus(c, true, 1).kept();
    auto many = run_corpus(c, true, 16).kept();
    EXPECT_EQ(one, many);
    for (std::size_t i = 1; i < one.size(); ++i)
        EXPECT_LT(std::stoi(one[i - 1].entry_id->substr(1)), std::stoi(one[i].entry_id->substr(1)));
}

TEST(Pipeline, SkippingJudgeTreatsAllAsValuable) {
    auto c = support::e2e_corpus();
    for (const auto& id : c.not_valuable) c.replies[id] = "Hello there!";
    auto r = run_corpus(c, false);
    EXPECT_EQ(r.not_valuable, 0u);
    EXPECT_EQ(r.report.total, 50u);
    EXPECT_EQ(r.report.kept, 18u);
    EXPECT_EQ(r.report.count(RejectReason::ParseFailure), 6u);
}

TEST(Pipeline, JudgeRequestFailureIsCountedAsRequestFailed) {
    auto c = support::e2e_corpus();
    c.verdicts.erase("e0");
    auto r = run_corpus(c, true);
    EXPECT_EQ(r.entries[0].outcome, Outcome{RejectReason::RequestFailed});
    EXPECT_EQ(r.report.kept, 17u);
}

TEST(Pipeline, RejectionFixtureFractions) {
    const auto c = support::rejection_fixture();
    auto r = run_corpus(c, false);
    ASSERT_EQ(r.report.total, 100u);
    for (const auto& o : r.entries) EXPECT_EQ(o.outcome, c.expected.at(*o.entry_id)) << *o.entry_id;
    EXPECT_DOUBLE_EQ(r.report.kept_fraction(), 0.24);
    EXPECT_DOUBLE_EQ(r.report.fraction(RejectReason::NoCodeInserted), 0.19);
    EXPECT_DOUBLE_EQ(r.report.fraction(RejectReason::ParseFailure), 0.27);
    EXPECT_DOUBLE_EQ(r.report.fraction(RejectReason::RequestFailed), 0.02);
    EXPECT_DOUBLE_EQ(r.report.fraction(RejectReason::TrivialAssignPrint), 0.05);
    EXPECT_DOUBLE_EQ(r.report.fraction(RejectReason::ExecFailedAll), 0.23);
    EXPECT_DOUBLE_EQ(r.report.fraction(RejectReason::Inconsistent), 0.0);
    double sum = r.report.kept_fraction();
    for (auto reason : kAllRejectReasons) sum += r.report.fraction(reason);
    EXPECT_DOUBLE_EQ(sum, 1.0);
}

TEST(Pipeline, StagesComposeLikeTheFullRun) {
    const auto c = support::rejection_fixture();
    auto converter = support::corpus_converter(c);
    support::TableExecutor ex;
    ex.table = c.exec;
    for (const auto& e : c.entries) {
        StageResult cur = convert_stage(e, converter);
        if (auto* x = std::get_if<Entry>(&cur)) cur = trivial_stage(*x);
        if (auto* x = std::get_if<Entry>(&cur)) cur = exec_stage(*x, ex);
        if (auto* x = std::get_if<Entry>(&cur)) cur = consistency_stage(*x);
        Outcome got = std::holds_alternative<Entry>(cur) ? Outcome{Kept{}} : Outcome{std::get<RejectReason>(cur)};
        EXPECT_EQ(got, c.expected.at(*e.entry_id)) << *e.entry_id;
    }
}
