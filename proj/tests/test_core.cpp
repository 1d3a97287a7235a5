#include <gtest/gtest.h>

#include "support.hpp"

using namespace toolspan;

TEST(ParseEntry, MinimalValidEntry) {
    auto e = parse_entry(R"({"messages":[{"role":"user","content":"hi"},{"role":"assistant","content":"hello"}]})");
    ASSERT_EQ(e.messages.size(), 2u);
    EXPECT_EQ(e.messages[0].role, Role::User);
    EXPECT_EQ(e.messages[1].content, "hello");
    EXPECT_FALSE(e.source_id);
    EXPECT_FALSE(e.entry_id);
}

TEST(ParseEntry, EmptyMessageListIsMissingField) {
    try {
        parse_entry(R"({"messages":[]})");
        FAIL();
    } catch (const ParseError& ex) {
        EXPECT_EQ(ex.kind(), ParseError::Kind::MissingField);
    }
}

TEST(ParseEntry, ErrorKinds) {
    auto kind_of = [](std::string_view line) {
        try {
            parse_entry(line);
        } catch (const ParseError& ex) {
            return ex.kind();
        }
        ADD_FAILURE() << "no error for " << line;
        return ParseError::Kind::MalformedJson;
    };
    EXPECT_EQ(kind_of("{not json"), ParseError::Kind::MalformedJson);
    EXPECT_EQ(kind_of("[1,2]"), ParseError::Kind::MalformedJson);
    EXPECT_EQ(kind_of(R"({"id":1})"), ParseError::Kind::MissingField);
    EXPECT_EQ(kind_of(R"({"messages":[{"content":"x"}]})"), ParseError::Kind::MissingField);
    EXPECT_EQ(kind_of(R"({"messages":[{"role":"user"}]})"), ParseError::Kind::MissingField);
    EXPECT_EQ(kind_of(R"({"messages":[{"role":"tool","content":"x"}]})"), ParseError::Kind::UnknownRole);
    EXPECT_EQ(kind_of(R"({"messages":[{"role":"User","content":"x"}]})"), ParseError::Kind::UnknownRole);
}

TEST(ParseEntry, WorkedConversionExampleHasOneCodeSpan) {
    const std::string line =
        R"({"messages": [{"role": "user", "content": "Which number is greater, 13.11 or 13.8?"}, )"
        R"({"role": "assistant", "content": "13.8 is greater than 13.11. <python>greater_number = max(13.11, 13.8)\nprint(greater_number)</python>"}]})";
    auto e = parse_entry(line);
    ASSERT_EQ(e.messages.size(), 2u);
    auto segs = segment(e.messages[1].content);
    EXPECT_EQ(count_code(segs), 1u);
    EXPECT_EQ(std::get<ToolCode>(segs[1]).source, "greater_number = max(13.11, 13.8)\nprint(greater_number)");
}

TEST(SerializeEntry, RoundTripKeepsOrderIdsAndUnknownKeys) {
    const std::string line =
        R"({"messages":[{"role":"system","content":"s"},{"role":"user","content":"u"},{"role":"assistant","content":"a"}],)"
        R"("source_id":"src","entry_id":"7","score":0.5,"tags":["x"]})";
    auto e = parse_entry(line);
    EXPECT_EQ(e.extra.size(), 2u);
    auto again = serialize_entry(e);
    EXPECT_EQ(again.find('\n'), std::string::npos);
    EXPECT_EQ(parse_entry(again), e);
    EXPECT_EQ(again, line);
    EXPECT_EQ(e.messages[0].role, Role::System);
    EXPECT_EQ(e.messages[2].role, Role::Assistant);
}

TEST(SerializeEntry, SpecialTokensAreVerbatimAndNewlinesEscaped) {
    auto e = support::qa("q", "x <python>print(1)\nprint(2)</python><result>1\n2</result> <|end_of_text|>");
    auto line = serialize_entry(e);
    EXPECT_NE(line.find("<python>print(1)\\nprint(2)</python>"), std::string::npos);
    EXPECT_NE(line.find("<|end_of_text|>"), std::string::npos);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(parse_entry(line), e);
}

TEST(Segment, CircleAreaExample) {
    auto segs = segment("The area is <python>import math\narea=math.pi*5**2\nprint(area)</python> 78.54.");
    ASSERT_EQ(segs.size(), 3u);
    EXPECT_EQ(std::get<TextSegment>(segs[0]).text, "The area is ");
    EXPECT_EQ(std::get<ToolCode>(segs[1]).source, "import math\narea=math.pi*5**2\nprint(area)");
    EXPECT_EQ(std::get<TextSegment>(segs[2]).text, " 78.54.");
}

TEST(Segment, PlainTextIsOneSegment) {
    auto segs = segment("plain text");
    ASSERT_EQ(segs.size(), 1u);
    EXPECT_EQ(std::get<TextSegment>(segs[0]).text, "plain text");
    EXPECT_TRUE(segment("").empty());
}

TEST(Segment, UnbalancedFixturesThrow) {
    for (const auto& c : support::unbalanced_fixtures()) EXPECT_THROW(segment(c), UnbalancedTokens) << c;
}

TEST(Segment, ReportsOffsetOfTheProblem) {
    try {
        segment("ab</python>");
        FAIL();
    } catch (const UnbalancedTokens& ex) {
        EXPECT_EQ(ex.offset(), 2u);
    }
}

TEST(Segment, ResultWithoutCodeIsAcceptedButFlagged) {
    auto segs = segment("x<result>1</result><python>a</python><result>2</result>");
    ASSERT_EQ(segs.size(), 4u);
    EXPECT_EQ(orphan_results(segs), std::vector<std::size_t>{1});
}

TEST(Segment, EndOfTextIsPlainTextForTheParser) {
    auto segs = segment("done<|end_of_text|>");
    ASSERT_EQ(segs.size(), 1u);
}

TEST(Render, Examples) {
    EXPECT_EQ(render({ToolCode{"print(5)"}}), "<python>print(5)</python>");
    EXPECT_EQ(render({}), "");
    EXPECT_EQ(render({TextSegment{"a"}, ToolCode{"b"}, ToolResult{"c"}, TextSegment{"d"}}),
              "a<python>b</python><result>c</result>d");
}

TEST(Render, FuzzedRoundTrip) {
    SplitMix64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        auto f = support::fuzz_content(rng);
        auto segs = segment(f.content);
        ASSERT_EQ(segs, f.expected) << f.content;
        ASSERT_EQ(render(segs), f.content);
    }
}

TEST(Render, CustomTokens) {
    SpecialTokens t;
    t.code_open = "[[code]]";
    t.code_close = "[[/code]]";
    t.validate();
    auto segs = segment("a[[code]]x[[/code]]b<python>", t);
    ASSERT_EQ(segs.size(), 3u);
    EXPECT_EQ(render(segs, t), "a[[code]]x[[/code]]b<python>");
}

TEST(SpecialTokens, DefaultsAreDistinctAndNonOverlapping) {
    EXPECT_NO_THROW(SpecialTokens::defaults().validate());
    SpecialTokens bad;
    bad.result_open = "<python>";
    EXPECT_THROW(bad.validate(), ConfigError);
    SpecialTokens sub;
    sub.code_close = "<python";
    EXPECT_THROW(sub.validate(), ConfigError);
    SpecialTokens empty;
    empty.end_of_text = "";
    EXPECT_THROW(empty.validate(), ConfigError);
}

TEST(StripToolSpans, DeletesSpansAndKeepsWhitespace) {
    auto e = support::qa("The area?", "The area is <python>print(78.54)</python><result>78.54</result> 78.54.");
    auto s = strip_tool_spans(e);
    EXPECT_EQ(s.messages[1].content, "The area is  78.54.");
    EXPECT_EQ(s.messages[0].content, "The area?");
}

TEST(StripToolSpans, NoSpansUnchangedAndIdempotent) {
    auto e = support::qa("q <python>kept in user text</python>", "just text");
    EXPECT_EQ(strip_tool_spans(e), e);
    SplitMix64 rng(5);
    for (int i = 0; i < 300; ++i) {
        auto f = support::fuzz_content(rng);
        auto x = support::qa("u", f.content);
        auto once = strip_tool_spans(x);
        EXPECT_EQ(strip_tool_spans(once), once);
        EXPECT_LE(once.messages[1].content.size(), x.messages[1].content.size());
        EXPECT_EQ(count_code(segment(once.messages[1].content)), 0u);
    }
}

TEST(StripToolSpans, PropagatesUnbalanced) {
    EXPECT_THROW(strip_tool_spans(support::qa("q", "a <python>b")), UnbalancedTokens);
}

TEST(Jsonl, WriteReadRoundTripAndLineNumbers) {
    auto dir = support::scratch("jsonl");
    std::vector<Entry> es = {support::qa("a", "b", "1"), support::qa("c", "d <python>x</python>", "2")};
    write_entries(dir / "e.jsonl", es);
    EXPECT_EQ(read_entries(dir / "e.jsonl"), es);
    support::spit(dir / "bad.jsonl", serialize_entry(es[0]) + "\n\n{oops\n");
    try {
        read_entries(dir / "bad.jsonl");
        FAIL();
    } catch (const DataError& ex) {
        EXPECT_NE(std::string(ex.what()).find(":3:"), std::string::npos) << ex.what();
    }
    EXPECT_THROW(read_entries(dir / "missing.jsonl"), DataError);
}

TEST(SplitMix64, ReferenceSequence) {
    SplitMix64 r(1234567);
    EXPECT_EQ(r.next(), 6457827717110365317ULL);
    EXPECT_EQ(r.next(), 3203168211198807973ULL);
    EXPECT_EQ(r.next(), 9817491932198370423ULL);
}

TEST(SplitMix64, DerivedDrawsStayInRange) {
    SplitMix64 r(3);
    for (int i = 0; i < 10000; ++i) {
        auto b = r.below(7);
        EXPECT_LT(b, 7u);
        auto v = r.uniform_int(-3, 3);
        EXPECT_GE(v, -3);
        EXPECT_LE(v, 3);
        auto u = r.uniform01();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    EXPECT_THROW(r.below(0), std::invalid_argument);
}

TEST(Parallel, KeepsOrderAndRethrows) {
    std::vector<int> v(100);
    std::iota(v.begin(), v.end(), 0);
    auto sq = parallel_map(v, 4, [](int x) { return x * x; });
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sq[i], i * i);
    EXPECT_THROW(parallel_for(50, 4, [](std::size_t i) { if (i == 17) throw DataError("x"); }), DataError);
}
