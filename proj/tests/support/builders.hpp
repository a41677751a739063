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

#ifndef AUGBENCH_TESTS_SUPPORT_BUILDERS_HPP_
#define AUGBENCH_TESTS_SUPPORT_BUILDERS_HPP_

#include <string>
#include <vector>

#include "augbench/corpus.hpp"

// Compact corpus construction for tests.

namespace augbench::testing {

struct TokenSpec {
  std::string form;
  std::string pos = "NOUN";
  int head = 0;
  std::string deprel = "dep";
  std::string ner = "O";
  bool space_after = true;
};

inline Sentence make_sentence(const std::string& sent_id,
                              const std::vector<TokenSpec>& specs) {
  Sentence sent;
  sent.sent_id = sent_id;
  int index = 0;
  for (const TokenSpec& spec : specs) {
    Token tok;
    tok.index = ++index;
    tok.form = spec.form;
    tok.pos = spec.pos;
    tok.head = spec.head;
    tok.deprel = spec.deprel;
    tok.ner = *BioTag::parse(spec.ner);
    tok.space_after = spec.space_after;
    sent.tokens.push_back(std::move(tok));
  }
  return sent;
}

inline Document make_document(const std::string& doc_id,
                              std::vector<Sentence> sentences) {
  Document doc;
  doc.doc_id = doc_id;
  doc.sentences = std::move(sentences);
  rebuild_text_and_spans(doc);
  return doc;
}

inline Corpus make_corpus(std::vector<Document> documents) {
  Corpus corpus;
  corpus.documents = std::move(documents);
  return corpus;
}

/// One document, one sentence, "Hans Hansen bor i København ." with a
/// PER and a LOC entity. Handy default fixture.
inline Corpus tiny_corpus() {
  return make_corpus({make_document(
      "d1",
      {make_sentence("s1", {
                               {"Hans", "PROPN", 3, "nsubj", "B-PER"},
                               {"Hansen", "PROPN", 1, "flat", "I-PER"},
                               {"bor", "VERB", 0, "root", "O"},
                               {"i", "ADP", 5, "case", "O"},
                               {"København", "PROPN", 3, "obl", "B-LOC",
                                false},
                               {".", "PUNCT", 3, "punct", "O"},
                           })})});
}

}  // namespace augbench::testing

#endif  // AUGBENCH_TESTS_SUPPORT_BUILDERS_HPP_
