//
// Copyright 2026 The Augbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "augbench/conllu.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "support/builders.hpp"

using namespace augbench;
using namespace augbench::testing;

namespace {

const char* kTiny =
    "# newdoc id = d1\n"
    "# sent_id = s1\n"
    "# text = Hans Hansen bor i København.\n"
    "1\tHans\t_\tPROPN\t_\t_\t3\tnsubj\t_\tname=B-PER\n"
    "2\tHansen\t_\tPROPN\t_\t_\t1\tflat\t_\tname=I-PER\n"
    "3\tbor\t_\tVERB\t_\t_\t0\troot\t_\tname=O\n"
    "4\ti\t_\tADP\t_\t_\t5\tcase\t_\tname=O\n"
    "5\tKøbenhavn\t_\tPROPN\t_\t_\t3\tobl\t_\tname=B-LOC|SpaceAfter=No\n"
    "6\t.\t_\tPUNCT\t_\t_\t3\tpunct\t_\tname=O\n"
    "\n";

}  // namespace

TEST_CASE("parse builds a validated corpus", "[conllu]") {
  const Corpus corpus = parse_conllu(kTiny);
  REQUIRE(corpus.documents.size() == 1);
  const Document& doc = corpus.documents[0];
  CHECK(doc.doc_id == "d1");
  REQUIRE(doc.sentences.size() == 1);
  const Sentence& sent = doc.sentences[0];
  CHECK(sent.sent_id == "s1");
  REQUIRE(sent.tokens.size() == 6);
  CHECK(sent.tokens[0].ner == BioTag::begin(EntityType::PER));
  CHECK(sent.tokens[2].head == 0);
  CHECK_FALSE(sent.tokens[4].space_after);
  CHECK(doc.text == "Hans Hansen bor i København.");
  CHECK(sent.tokens[4].span == CharSpan{18, 27});
  CHECK(validate(corpus).empty());
}

TEST_CASE("minimal two-token file parses into a tree", "[conllu]") {
  const Corpus corpus = parse_conllu(
      "1\tlille\t_\tADJ\t_\t_\t2\tamod\t_\t_\n"
      "2\thus\t_\tNOUN\t_\t_\t0\troot\t_\t_\n");
  REQUIRE(corpus.documents.size() == 1);
  CHECK(corpus.documents[0].doc_id == "doc0");
  const Sentence& sent = corpus.documents[0].sentences[0];
  CHECK(sent.tokens[0].head == 2);
  CHECK(sent.tokens[1].head == 0);
  CHECK(validate(corpus).empty());
}

TEST_CASE("parse errors name the line and rule", "[conllu]") {
  SECTION("column count") {
    try {
      parse_conllu("1\tword\tPROPN\n");
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line() == 1);
      CHECK(e.rule() == "column-count");
    }
  }
  SECTION("self-loop") {
    try {
      parse_conllu(
          "1\ta\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"
          "2\tb\t_\tNOUN\t_\t_\t2\tdep\t_\t_\n");
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line() == 2);
      CHECK(e.rule() == "self-loop");
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SECTION("non-integer head") {
    CHECK_THROWS_MATCHES(
        parse_conllu("1\ta\t_\tNOUN\t_\t_\tx\tdep\t_\t_\n"), parse_error,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("non-integer-head")));
  }
  SECTION("head out of range") {
    CHECK_THROWS_MATCHES(
        parse_conllu("1\ta\t_\tNOUN\t_\t_\t4\tdep\t_\t_\n"
                     "2\tb\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"),
        parse_error,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("head-out-of-range")));
  }
  SECTION("BIO discontinuity across types") {
    CHECK_THROWS_MATCHES(
        parse_conllu("1\ta\t_\tPROPN\t_\t_\t0\troot\t_\tname=B-PER\n"
                     "2\tb\t_\tPROPN\t_\t_\t1\tflat\t_\tname=I-LOC\n"),
        parse_error,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("bio-discontinuity")));
  }
  SECTION("duplicate sent_id") {
    CHECK_THROWS_MATCHES(
        parse_conllu("# sent_id = s\n"
                     "1\ta\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"
                     "\n"
                     "# sent_id = s\n"
                     "1\tb\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"),
        parse_error,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("duplicate-sent-id")));
  }
  SECTION("multiword ranges and empty nodes are rejected") {
    CHECK_THROWS_MATCHES(
        parse_conllu("1-2\tdel\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"), parse_error,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("multiword-token")));
    CHECK_THROWS_MATCHES(
        parse_conllu("1.1\tdel\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"), parse_error,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("empty-node")));
  }
  SECTION("missing root") {
    CHECK_THROWS_MATCHES(
        parse_conllu("1\ta\t_\tNOUN\t_\t_\t2\tdep\t_\t_\n"
                     "2\tb\t_\tNOUN\t_\t_\t1\tdep\t_\t_\n"),
        parse_error,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("no-root")));
  }
  SECTION("invalid NER tag") {
    CHECK_THROWS_MATCHES(
        parse_conllu("1\ta\t_\tNOUN\t_\t_\t0\troot\t_\tname=B-XYZ\n"),
        parse_error,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("invalid-ner-tag")));
  }
  SECTION("invalid UPOS") {
    CHECK_THROWS_MATCHES(
        parse_conllu("1\ta\t_\tNN\t_\t_\t0\troot\t_\t_\n"), parse_error,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("invalid-upos")));
  }
}

TEST_CASE("text comment mismatch is a warning, not an error", "[conllu]") {
  std::vector<Violation> warnings;
  const Corpus corpus = parse_conllu(
      "# sent_id = s\n"
      "# text = something else entirely\n"
      "1\thej\t_\tINTJ\t_\t_\t0\troot\t_\t_\n",
      &warnings);
  CHECK(corpus.documents.size() == 1);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].rule == "text-comment-mismatch");
  CHECK(warnings[0].severity == Violation::Severity::Warning);
}

TEST_CASE("serialize round-trips parsed fixtures byte-identically",
          "[conllu]") {
  const Corpus corpus = parse_conllu(kTiny);
  CHECK(serialize_conllu(corpus) == kTiny);
  const Corpus again = parse_conllu(serialize_conllu(corpus));
  CHECK(again == corpus);
}

TEST_CASE("serialize of an empty corpus is empty", "[conllu]") {
  CHECK(serialize_conllu(Corpus{}) == "");
  CHECK(parse_conllu("").documents.empty());
}

TEST_CASE("SpaceAfter=No survives a round-trip", "[conllu]") {
  const Corpus corpus = parse_conllu(kTiny);
  const std::string text = serialize_conllu(corpus);
  CHECK(text.find("SpaceAfter=No") != std::string::npos);
  const Corpus again = parse_conllu(text);
  CHECK_FALSE(again.documents[0].sentences[0].tokens[4].space_after);
}

TEST_CASE("provenance header comments round-trip", "[conllu]") {
  const std::string input =
      "# augmenter = keystroke[rate=0.05]\n"
      "# seed = 1234\n"
      "# rep = 3\n"
      "# newdoc id = d1\n"
      "# sent_id = s1\n"
      "1\thej\t_\tINTJ\t_\t_\t0\troot\t_\t_\n"
      "\n";
  const Corpus corpus = parse_conllu(input);
  REQUIRE(corpus.provenance.size() == 3);
  CHECK(corpus.provenance[0] ==
        std::make_pair(std::string("augmenter"),
                       std::string("keystroke[rate=0.05]")));
  CHECK(serialize_conllu(corpus) == input);
}

TEST_CASE("unrecognized MISC attributes and columns are preserved",
          "[conllu]") {
  const std::string input =
      "# newdoc id = d\n"
      "# sent_id = s\n"
      "1\thuset\thus\tNOUN\tNC\tDefinite=Def\t0\troot\t_\t"
      "name=O|Lemma=x|SpaceAfter=No\n"
      "\n";
  const Corpus corpus = parse_conllu(input);
  const Token& tok = corpus.documents[0].sentences[0].tokens[0];
  CHECK(tok.lemma == "hus");
  CHECK(tok.xpos == "NC");
  CHECK(tok.feats == "Definite=Def");
  CHECK(tok.misc_extra == std::vector<std::string>{"Lemma=x"});
  CHECK(serialize_conllu(corpus) == input);
}

TEST_CASE("files without explicit name attributes serialize without them",
          "[conllu]") {
  const std::string input =
      "# newdoc id = d\n"
      "# sent_id = s\n"
      "1\thej\t_\tINTJ\t_\t_\t0\troot\t_\t_\n"
      "\n";
  CHECK(serialize_conllu(parse_conllu(input)) == input);
}
