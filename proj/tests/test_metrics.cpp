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

#include "augbench/metrics.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "support/builders.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace augbench;
using namespace augbench::testing;

namespace {

const std::set<Task> kAllTasks = {Task::Pos, Task::Ner, Task::Dep};

}  // namespace

TEST_CASE("identical tokenizations align completely", "[metrics]") {
  const Corpus corpus = tiny_corpus();
  const PredDocument pred = pred_from_gold(corpus.documents[0]);
  const Alignment a = align_tokens(corpus.documents[0], pred);
  CHECK(a.pairs.size() == 6);
  CHECK(a.gold_unmatched.empty());
  CHECK(a.pred_unmatched.empty());
}

TEST_CASE("merged predicted tokens leave both sides unmatched", "[metrics]") {
  const Corpus corpus = tiny_corpus();
  PredDocument pred = pred_from_gold(corpus.documents[0]);
  // Merge predicted tokens 2 and 3 into one span.
  auto& tokens = pred.sentences[0].tokens;
  tokens[1].span.end = tokens[2].span.end;
  tokens[1].form += " " + tokens[2].form;
  tokens.erase(tokens.begin() + 2);
  const Alignment a = align_tokens(corpus.documents[0], pred);
  CHECK(a.pairs.size() == 4);
  REQUIRE(a.gold_unmatched.size() == 2);
  CHECK(a.gold_unmatched[0] == TokenRef{0, 1});
  CHECK(a.gold_unmatched[1] == TokenRef{0, 2});
  CHECK(a.pred_unmatched.size() == 1);
}

TEST_CASE("empty predictions leave all gold unmatched", "[metrics]") {
  const Corpus corpus = tiny_corpus();
  PredDocument pred;
  pred.doc_id = "d1";
  const Alignment a = align_tokens(corpus.documents[0], pred);
  CHECK(a.pairs.empty());
  CHECK(a.gold_unmatched.size() == 6);
}

TEST_CASE("spans outside the text are an input error", "[metrics]") {
  const Corpus corpus = tiny_corpus();
  PredDocument pred = pred_from_gold(corpus.documents[0]);
  pred.sentences[0].tokens.back().span.end = 10000;
  CHECK_THROWS_AS(align_tokens(corpus.documents[0], pred),
                  std::invalid_argument);
}

TEST_CASE("POS accuracy counts unmatched gold as wrong", "[metrics]") {
  const Corpus corpus = make_corpus({make_document(
      "d", {make_sentence("s", {{"a", "NOUN", 2, "dep"},
                                {"b", "VERB", 0, "root"},
                                {"c", "ADJ", 2, "dep"},
                                {"d", "ADV", 2, "dep"}})})});
  const Document& gold = corpus.documents[0];

  SECTION("oracle predictions score 1.0") {
    const PredDocument pred = pred_from_gold(gold);
    const auto counts = pos_counts(gold, pred, align_tokens(gold, pred));
    CHECK(counts.correct == 4);
    CHECK(counts.total == 4);
  }

  SECTION("all tags wrong scores 0.0") {
    PredDocument pred = pred_from_gold(gold);
    for (auto& tok : pred.sentences[0].tokens) tok.pos = "X";
    const auto counts = pos_counts(gold, pred, align_tokens(gold, pred));
    CHECK(counts.correct == 0);
  }

  SECTION("3 of 4 paired and correct, 1 unmatched gives 0.75") {
    PredDocument pred = pred_from_gold(gold);
    pred.sentences[0].tokens.pop_back();
    const auto counts = pos_counts(gold, pred, align_tokens(gold, pred));
    CHECK(counts.correct == 3);
    CHECK(counts.total == 4);
    std::vector<DocCounts> docs(1);
    docs[0].pos = counts;
    const TaskScores scores = compute_scores(docs, {Task::Pos});
    CHECK(scores.pos_accuracy == 0.75);
  }
}

TEST_CASE("NER needs exact span and type", "[metrics]") {
  const Corpus corpus = make_corpus({make_document(
      "d", {make_sentence("s", {{"Hans", "PROPN", 3, "nsubj", "B-PER"},
                                {"Hansen", "PROPN", 1, "flat", "I-PER"},
                                {"smiler", "VERB", 0, "root"}})})});
  const Document& gold = corpus.documents[0];

  SECTION("oracle predictions score perfect F1") {
    const PredDocument pred = pred_from_gold(gold);
    const NerCounts counts = ner_counts(gold, pred);
    CHECK(counts.by_type.at(EntityType::PER).tp == 1);
    CHECK(counts.by_type.at(EntityType::PER).fp == 0);
    CHECK(counts.by_type.at(EntityType::PER).fn == 0);
  }

  SECTION("off-by-one extent scores zero") {
    PredDocument pred = pred_from_gold(gold);
    pred.sentences[0].tokens[1].ner = BioTag::outside();  // PER covers 1 token
    const NerCounts counts = ner_counts(gold, pred);
    CHECK(counts.by_type.at(EntityType::PER).tp == 0);
    CHECK(counts.by_type.at(EntityType::PER).fp == 1);
    CHECK(counts.by_type.at(EntityType::PER).fn == 1);
    std::vector<DocCounts> docs(1);
    docs[0].ner = counts;
    const TaskScores scores = compute_scores(docs, {Task::Ner});
    CHECK(scores.ner_by_type.at(EntityType::PER).f1 == 0.0);
  }
}

TEST_CASE("micro F1 and F1 without MISC follow the count arithmetic",
          "[metrics]") {
  // Gold: one PER, one MISC. Predictions: the PER matched, nothing else.
  // Frozen from hand arithmetic: P = 1, R = 1/2, micro F1 = 2/3;
  // without MISC: P = R = F1 = 1.
  const Corpus corpus = make_corpus({make_document(
      "d", {make_sentence("s", {{"Hans", "PROPN", 2, "nsubj", "B-PER"},
                                {"cykler", "VERB", 0, "root"},
                                {"Tour", "PROPN", 2, "obj", "B-MISC"}})})});
  const Document& gold = corpus.documents[0];
  PredDocument pred = pred_from_gold(gold);
  pred.sentences[0].tokens[2].ner = BioTag::outside();

  std::vector<DocCounts> docs(1);
  docs[0].ner = ner_counts(gold, pred);
  const TaskScores scores = compute_scores(docs, {Task::Ner});
  CHECK(scores.ner_micro->precision == 1.0);
  CHECK(scores.ner_micro->recall == 0.5);
  CHECK(scores.ner_micro->f1 == Catch::Approx(2.0 / 3.0));
  CHECK(scores.ner_micro_no_misc->f1 == 1.0);
}

TEST_CASE("orphan I tags are repaired and counted", "[metrics]") {
  const Corpus corpus = make_corpus({make_document(
      "d", {make_sentence("s", {{"Hans", "PROPN", 2, "nsubj", "B-PER"},
                                {"smiler", "VERB", 0, "root"}})})});
  const Document& gold = corpus.documents[0];
  PredDocument pred = pred_from_gold(gold);
  pred.sentences[0].tokens[0].ner = BioTag::inside(EntityType::PER);
  int repairs = 0;
  const NerCounts counts = ner_counts(gold, pred, &repairs);
  CHECK(repairs == 1);
  // After repair the orphan I-PER acts as B-PER and matches gold.
  CHECK(counts.by_type.at(EntityType::PER).tp == 1);
}

TEST_CASE("UAS and LAS compare heads by character span", "[metrics]") {
  const Corpus corpus = make_corpus({make_document(
      "d", {make_sentence("s", {{"hunden", "NOUN", 2, "nsubj"},
                                {"løber", "VERB", 0, "root"},
                                {"hurtigt", "ADV", 2, "advmod"}})})});
  const Document& gold = corpus.documents[0];

  SECTION("oracle predictions score UAS = LAS = 1") {
    const PredDocument pred = pred_from_gold(gold);
    const DepCounts counts = dep_counts(gold, pred, align_tokens(gold, pred));
    CHECK(counts.uas_correct == 3);
    CHECK(counts.las_correct == 3);
    CHECK(counts.total == 3);
  }

  SECTION("correct heads with wrong deprels give UAS 1, LAS 0") {
    PredDocument pred = pred_from_gold(gold);
    for (auto& tok : pred.sentences[0].tokens) tok.deprel = "wrong";
    const DepCounts counts = dep_counts(gold, pred, align_tokens(gold, pred));
    CHECK(counts.uas_correct == 3);
    CHECK(counts.las_correct == 0);
  }

  SECTION("swapped root in a two-token sentence gives UAS 0") {
    const Corpus two = make_corpus({make_document(
        "d", {make_sentence("s", {{"hun", "PRON", 2, "nsubj"},
                                  {"ler", "VERB", 0, "root"}})})});
    PredDocument pred = pred_from_gold(two.documents[0]);
    pred.sentences[0].tokens[0].head = 0;
    pred.sentences[0].tokens[0].deprel = "root";
    pred.sentences[0].tokens[1].head = 1;
    pred.sentences[0].tokens[1].deprel = "nsubj";
    const DepCounts counts = dep_counts(
        two.documents[0], pred, align_tokens(two.documents[0], pred));
    CHECK(counts.uas_correct == 0);
  }
}

TEST_CASE("punctuation-excluded tallies skip gold PUNCT tokens", "[metrics]") {
  const Corpus corpus = tiny_corpus();  // final token is PUNCT
  const Document& gold = corpus.documents[0];
  const PredDocument pred = pred_from_gold(gold);
  const DepCounts counts = dep_counts(gold, pred, align_tokens(gold, pred));
  CHECK(counts.total == 6);
  CHECK(counts.total_nopunct == 5);
  CHECK(counts.uas_correct_nopunct == 5);
}

TEST_CASE("LAS never exceeds UAS", "[metrics][property]") {
  RngStream gen(606);
  for (int round = 0; round < 50; ++round) {
    const Corpus corpus = random_corpus(gen);
    RngStream prng = gen.child(static_cast<std::uint64_t>(round));
    std::vector<DocCounts> docs;
    for (const Document& doc : corpus.documents) {
      const PredDocument pred = perturb_predictions(doc, prng);
      docs.push_back(score_document(doc, pred, kAllTasks));
    }
    const TaskScores scores = compute_scores(docs, kAllTasks);
    CHECK(*scores.las <= *scores.uas);
    const TaskScores nopunct = compute_scores(docs, kAllTasks, true);
    CHECK(*nopunct.las <= *nopunct.uas);
  }
}

TEST_CASE("metrics are invariant under document permutations",
          "[metrics][property]") {
  RngStream gen(707);
  const Corpus corpus = random_corpus(gen);
  RngStream prng(3);
  std::vector<DocCounts> docs;
  for (const Document& doc : corpus.documents) {
    docs.push_back(score_document(doc, perturb_predictions(doc, prng),
                                  kAllTasks));
  }
  const TaskScores forward = compute_scores(docs, kAllTasks);
  std::vector<DocCounts> reversed(docs.rbegin(), docs.rend());
  const TaskScores backward = compute_scores(reversed, kAllTasks);
  CHECK(forward.pos_accuracy == backward.pos_accuracy);
  CHECK(forward.ner_micro->f1 == backward.ner_micro->f1);
  CHECK(forward.uas == backward.uas);
  CHECK(forward.las == backward.las);
}

TEST_CASE("library metrics equal the brute-force oracles",
          "[metrics][property]") {
  RngStream gen(808);
  for (int round = 0; round < 100; ++round) {
    GenOptions opt;
    opt.max_docs = 2;
    opt.max_sentences = 5;
    opt.max_tokens = 6;
    const Corpus corpus = random_corpus(gen, opt);
    RngStream prng = gen.child(static_cast<std::uint64_t>(round) + 1000);

    std::vector<PredDocument> preds;
    std::vector<DocCounts> docs;
    for (const Document& doc : corpus.documents) {
      preds.push_back(perturb_predictions(doc, prng));
      docs.push_back(score_document(doc, preds.back(), kAllTasks));
    }
    const TaskScores scores = compute_scores(docs, kAllTasks);

    const BruteNerScores ner = brute_ner(corpus.documents, preds);
    CHECK(scores.ner_micro->f1 == ner.micro.f1);
    CHECK(scores.ner_micro->precision == ner.micro.precision);
    CHECK(scores.ner_micro->recall == ner.micro.recall);
    CHECK(scores.ner_micro_no_misc->f1 == ner.micro_no_misc.f1);
    for (EntityType t : kEntityTypes) {
      CHECK(scores.ner_by_type.at(t).f1 == ner.by_type.at(to_string(t)).f1);
    }

    const BruteDepScores dep = brute_uas_las(corpus.documents, preds);
    CHECK(*scores.uas == dep.uas);
    CHECK(*scores.las == dep.las);
    const BruteDepScores dep_np =
        brute_uas_las(corpus.documents, preds, true);
    const TaskScores scores_np = compute_scores(docs, kAllTasks, true);
    CHECK(*scores_np.uas == dep_np.uas);
    CHECK(*scores_np.las == dep_np.las);

    CHECK(*scores.pos_accuracy ==
          brute_pos_accuracy(corpus.documents, preds));
  }
}

TEST_CASE("vacuous scores are perfect, absent tasks stay absent",
          "[metrics]") {
  std::vector<DocCounts> docs(1);
  const TaskScores scores = compute_scores(docs, {Task::Ner});
  CHECK(scores.ner_micro->f1 == 1.0);
  CHECK_FALSE(scores.pos_accuracy.has_value());
  CHECK_FALSE(scores.uas.has_value());
}

TEST_CASE("document-level headline scores back the paired tests",
          "[metrics]") {
  const Corpus corpus = tiny_corpus();
  const Document& gold = corpus.documents[0];
  const DocCounts counts =
      score_document(gold, pred_from_gold(gold), kAllTasks);
  CHECK(doc_pos_accuracy(counts) == 1.0);
  CHECK(doc_ner_f1(counts, false) == 1.0);
  CHECK(doc_ner_f1(counts, true) == 1.0);
  CHECK(doc_uas(counts, false) == 1.0);
  CHECK(doc_las(counts, true) == 1.0);
}
