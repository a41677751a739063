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

#ifndef AUGBENCH_PREDICTIONS_HPP_
#define AUGBENCH_PREDICTIONS_HPP_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "augbench/corpus.hpp"

// What a pipeline returns for one corpus: its own tokens (possibly a
// different tokenization than gold) plus annotations for the tasks it
// declares. Spans always refer to the gold document text.

namespace augbench {

enum class Task { Pos, Ner, Dep };

inline std::string to_string(Task t) {
  switch (t) {
    case Task::Pos:
      return "pos";
    case Task::Ner:
      return "ner";
    case Task::Dep:
      return "dep";
  }
  return "?";
}

inline std::optional<Task> task_from(std::string_view s) {
  if (s == "pos") return Task::Pos;
  if (s == "ner") return Task::Ner;
  if (s == "dep") return Task::Dep;
  return std::nullopt;
}

struct PredToken {
  std::string form;
  CharSpan span;
  std::string pos;               // empty when absent
  std::optional<int> head;       // sentence-relative, 0 = root
  std::string deprel;            // empty when absent
  BioTag ner = BioTag::outside();
};

struct PredSentence {
  std::vector<PredToken> tokens;
};

struct PredDocument {
  std::string doc_id;
  std::vector<PredSentence> sentences;
};

struct PredictionSet {
  std::string corpus_ref;  // identity of the evaluated corpus
  std::vector<PredDocument> documents;
  std::set<Task> tasks;
  double wall_time = 0.0;  // seconds over the full corpus
  int bio_repairs = 0;     // orphan I- tags promoted while decoding
};

}  // namespace augbench

#endif  // AUGBENCH_PREDICTIONS_HPP_
