#include <gtest/gtest.h>

#include <sstream>

#include "corpusforge/error.hpp"
#include "corpusforge/ted_xml.hpp"

using namespace corpusforge;
using Tokens = std::vector<std::string>;

TEST(TedXml, ExtractsTalksInOrder) {
    const auto r = ingest_ted_xml(R"(<?xml version="1.0"?>
<!-- archive -->
<xml>
  <talk id="42"><title>Ignored &amp; skipped</title>
    <transcript><seg id="1">Hello, World!</seg><seg id="2">Caf&#233; &lt;3</seg></transcript>
  </talk>
  <doc docid="7"><seg><![CDATA[A & B]]></seg></doc>
</xml>)");
    ASSERT_EQ(r.documents.size(), 2u);
    EXPECT_TRUE(r.diagnostics.empty());
    EXPECT_EQ(r.documents[0].id, "42");
    ASSERT_EQ(r.documents[0].sentences.size(), 2u);
    EXPECT_EQ(r.documents[0].sentences[0].tokens, (Tokens{"hello", ",", "world", "!"}));
    EXPECT_EQ(r.documents[0].sentences[1].tokens, (Tokens{"café", "<", "3"}));
    EXPECT_EQ(r.documents[1].id, "7");
    EXPECT_EQ(r.documents[1].sentences[0].tokens, (Tokens{"a", "&", "b"}));
}

TEST(TedXml, TalkWithoutIdIsRejectedWithDiagnostic) {
    const auto r = ingest_ted_xml("<xml><talk><seg>x</seg></talk><talk id=\"1\"><seg>y</seg></talk></xml>");
    ASSERT_EQ(r.documents.size(), 1u);
    EXPECT_EQ(r.documents[0].id, "1");
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_NE(r.diagnostics[0].find("byte"), std::string::npos);
}

TEST(TedXml, EmptySegmentsKeepTheirSlot) {
    const auto r = ingest_ted_xml("<talk id=\"1\"><seg>a</seg><seg></seg><seg/><seg>b</seg></talk>");
    ASSERT_EQ(r.documents.size(), 1u);
    EXPECT_EQ(r.documents[0].sentences.size(), 4u);
    EXPECT_TRUE(r.documents[0].sentences[1].empty());
}

TEST(TedXml, MalformedXmlReportsByteOffset) {
    const std::string bad = "<xml><talk id=\"1\"><seg>x</talk></xml>";
    try {
        ingest_ted_xml(bad);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_GT(e.position(), 0u);
        EXPECT_LE(e.position(), bad.size());
    }
    EXPECT_THROW(ingest_ted_xml("<xml><talk id=\"1\">"), ParseError);
    EXPECT_THROW(ingest_ted_xml("<a>&bogus;</a>"), ParseError);
}

TEST(TedXml, StructuralErrors) {
    EXPECT_THROW(ingest_ted_xml("<xml><seg>orphan</seg></xml>"), DataError);
    EXPECT_THROW(ingest_ted_xml("<talk id=\"1\"><talk id=\"2\"></talk></talk>"), DataError);
}

TEST(TedXml, StreamOverloadMatches) {
    const std::string xml = "<talk id=\"9\"><seg>One two.</seg></talk>";
    std::istringstream in(xml);
    const auto a = ingest_ted_xml(in);
    const auto b = ingest_ted_xml(xml);
    ASSERT_EQ(a.documents.size(), 1u);
    EXPECT_EQ(a.documents[0].sentences, b.documents[0].sentences);
}
