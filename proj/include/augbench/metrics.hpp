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

#ifndef AUGBENCH_METRICS_HPP_
#define AUGBENCH_METRICS_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "augbench/augment.hpp"
#include "augbench/corpus.hpp"
#include "augbench/predictions.hpp"

// Character-offset alignment between gold and predicted tokens, and the
// metric battery computed over it: POS accuracy, entity-level NER
// precision/recall/F1 (exact span-and-type match), and UAS/LAS.
//
// All denominators are gold counts: a token the pipeline's tokenizer did
// not reproduce counts as wrong, so tokenization mismatches show up as
// recall loss rather than being silently excluded.

namespace augbench {

// ---------------------------------------------------------------------------
// Alignment

struct TokenRef {
  int sentence = 0;  // 0-based within the document
  int token = 0;     // 0-based within the sentence

  friend bool operator==(const TokenRef&, const TokenRef&) = default;
};

/// Pairs of gold/predicted tokens with identical character spans.
struct Alignment {
  std::vector<std::pair<TokenRef, TokenRef>> pairs;
  std::vector<TokenRef> gold_unmatched;
  std::vector<TokenRef> pred_unmatched;
};

namespace metrics_detail {

struct FlatToken {
  TokenRef ref;
  CharSpan span;
};

inline std::vector<FlatToken> flatten_gold(const Document& doc) {
  std::vector<FlatToken> out;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& tokens = doc.sentences[s].tokens;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      out.push_back(FlatToken{{static_cast<int>(s), static_cast<int>(t)},
                              tokens[t].span});
    }
  }
  return out;
}

inline std::vector<FlatToken> flatten_pred(const PredDocument& doc) {
  std::vector<FlatToken> out;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& tokens = doc.sentences[s].tokens;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      out.push_back(FlatToken{{static_cast<int>(s), static_cast<int>(t)},
                              tokens[t].span});
    }
  }
  return out;
}

inline void check_spans(const std::vector<FlatToken>& tokens,
                        std::size_t text_length, const char* side) {
  std::size_t cursor = 0;
  for (const FlatToken& tok : tokens) {
    if (tok.span.end > text_length || tok.span.start >= tok.span.end) {
      throw std::invalid_argument(std::string(side) +
                                  " token span outside the document text");
    }
    if (tok.span.start < cursor) {
      throw std::invalid_argument(std::string(side) +
                                  " token spans overlap or decrease");
    }
    cursor = tok.span.end;
  }
}

}  // namespace metrics_detail

/// Pairs tokens whose character spans are identical; everything else is
/// unmatched. Linear-time merge over the span-sorted token sequences.
inline Alignment align_tokens(const Document& gold, const PredDocument& pred) {
  using metrics_detail::FlatToken;
  const std::vector<FlatToken> g = metrics_detail::flatten_gold(gold);
  const std::vector<FlatToken> p = metrics_detail::flatten_pred(pred);
  const std::size_t text_length = utf8::length(gold.text);
  metrics_detail::check_spans(g, text_length, "gold");
  metrics_detail::check_spans(p, text_length, "predicted");

  Alignment out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < g.size() && j < p.size()) {
    if (g[i].span == p[j].span) {
      out.pairs.emplace_back(g[i].ref, p[j].ref);
      ++i;
      ++j;
    } else if (g[i].span < p[j].span) {
      out.gold_unmatched.push_back(g[i].ref);
      ++i;
    } else {
      out.pred_unmatched.push_back(p[j].ref);
      ++j;
    }
  }
  for (; i < g.size(); ++i) out.gold_unmatched.push_back(g[i].ref);
  for (; j < p.size(); ++j) out.pred_unmatched.push_back(p[j].ref);
  return out;
}

// ---------------------------------------------------------------------------
// Count tuples (associative; corpus scores sum counts, then divide once)

struct PosCounts {
  long correct = 0;
  long total = 0;

  PosCounts& operator+=(const PosCounts& o) {
    correct += o.correct;
    total += o.total;
    return *this;
  }
};

struct NerTypeCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  NerTypeCounts& operator+=(const NerTypeCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

struct NerCounts {
  std::map<EntityType, NerTypeCounts> by_type;

  NerCounts() {
    for (EntityType t : kEntityTypes) by_type[t] = NerTypeCounts{};
  }

  NerCounts& operator+=(const NerCounts& o) {
    for (EntityType t : kEntityTypes) by_type[t] += o.by_type.at(t);
    return *this;
  }
};

struct DepCounts {
  long total = 0;
  long uas_correct = 0;
  long las_correct = 0;
  long total_nopunct = 0;
  long uas_correct_nopunct = 0;
  long las_correct_nopunct = 0;

  DepCounts& operator+=(const DepCounts& o) {
    total += o.total;
    uas_correct += o.uas_correct;
    las_correct += o.las_correct;
    total_nopunct += o.total_nopunct;
    uas_correct_nopunct += o.uas_correct_nopunct;
    las_correct_nopunct += o.las_correct_nopunct;
    return *this;
  }
};

/// All count tuples for one document.
struct DocCounts {
  std::string doc_id;
  PosCounts pos;
  NerCounts ner;
  DepCounts dep;
  int bio_repairs = 0;
};

// ---------------------------------------------------------------------------
// Per-document scoring

/// POS accuracy counts: paired tokens with equal POS are correct; every
/// gold token (matched or not) is in the denominator.
inline PosCounts pos_counts(const Document& gold, const PredDocument& pred,
                            const Alignment& alignment) {
  PosCounts out;
  for (const Sentence& sent : gold.sentences) {
    out.total += static_cast<long>(sent.tokens.size());
  }
  for (const auto& [g, p] : alignment.pairs) {
    const Token& gt = gold.sentences[static_cast<std::size_t>(g.sentence)]
                          .tokens[static_cast<std::size_t>(g.token)];
    const PredToken& pt = pred.sentences[static_cast<std::size_t>(p.sentence)]
                              .tokens[static_cast<std::size_t>(p.token)];
    if (!pt.pos.empty() && pt.pos == gt.pos) ++out.correct;
  }
  return out;
}

namespace metrics_detail {

struct CharEntity {
  EntityType type;
  CharSpan extent;

  friend bool operator==(const CharEntity&, const CharEntity&) = default;
  friend auto operator<=>(const CharEntity&, const CharEntity&) = default;
};

inline std::vector<CharEntity> gold_entities(const Document& doc) {
  std::vector<CharEntity> out;
  for (const Sentence& sent : doc.sentences) {
    for (const EntitySpan& ent : extract_entities(sent)) {
      const CharSpan extent{
          sent.tokens[static_cast<std::size_t>(ent.start - 1)].span.start,
          sent.tokens[static_cast<std::size_t>(ent.end - 2)].span.end};
      out.push_back(CharEntity{ent.type, extent});
    }
  }
  return out;
}

/// Decodes predicted entities, repairing orphan I-X tags as B-X; the
/// number of repairs is added to *repairs.
inline std::vector<CharEntity> pred_entities(const PredDocument& doc,
                                             int* repairs) {
  std::vector<CharEntity> out;
  for (const PredSentence& sent : doc.sentences) {
    std::vector<BioTag> tags;
    tags.reserve(sent.tokens.size());
    for (const PredToken& tok : sent.tokens) tags.push_back(tok.ner);
    const int fixed = repair_bio_tags(tags);
    if (repairs != nullptr) *repairs += fixed;
    for (std::size_t i = 0; i < tags.size(); ++i) {
      if (tags[i].marker != BioTag::Marker::B) continue;
      std::size_t j = i + 1;
      while (j < tags.size() && tags[j].marker == BioTag::Marker::I &&
             tags[j].type == tags[i].type) {
        ++j;
      }
      out.push_back(CharEntity{
          tags[i].type,
          CharSpan{sent.tokens[i].span.start, sent.tokens[j - 1].span.end}});
      i = j - 1;
    }
  }
  return out;
}

}  // namespace metrics_detail

/// Entity counts: a predicted entity is a true positive iff an unused
/// gold entity has the same type and the same character extent.
inline NerCounts ner_counts(const Document& gold, const PredDocument& pred,
                            int* bio_repairs = nullptr) {
  using metrics_detail::CharEntity;
  const std::vector<CharEntity> golds = metrics_detail::gold_entities(gold);
  const std::vector<CharEntity> preds =
      metrics_detail::pred_entities(pred, bio_repairs);

  NerCounts out;
  std::vector<bool> used(golds.size(), false);
  for (const CharEntity& p : preds) {
    bool matched = false;
    for (std::size_t i = 0; i < golds.size(); ++i) {
      if (!used[i] && golds[i] == p) {
        used[i] = true;
        matched = true;
        break;
      }
    }
    if (matched) {
      ++out.by_type[p.type].tp;
    } else {
      ++out.by_type[p.type].fp;
    }
  }
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (!used[i]) ++out.by_type[golds[i].type].fn;
  }
  return out;
}

/// Attachment counts. A gold token scores UAS-correct when it is paired
/// and its predicted head covers the same character span as its gold
/// head (root matches root); LAS additionally requires an equal deprel.
/// Unmatched gold tokens count as errors. The *_nopunct tallies skip
/// gold PUNCT tokens for the optional punctuation-excluded mode.
inline DepCounts dep_counts(const Document& gold, const PredDocument& pred,
                            const Alignment& alignment) {
  DepCounts out;
  for (const Sentence& sent : gold.sentences) {
    out.total += static_cast<long>(sent.tokens.size());
    for (const Token& tok : sent.tokens) {
      if (tok.pos != "PUNCT") ++out.total_nopunct;
    }
  }
  for (const auto& [g, p] : alignment.pairs) {
    const Sentence& gsent = gold.sentences[static_cast<std::size_t>(g.sentence)];
    const Token& gt = gsent.tokens[static_cast<std::size_t>(g.token)];
    const PredSentence& psent =
        pred.sentences[static_cast<std::size_t>(p.sentence)];
    const PredToken& pt = psent.tokens[static_cast<std::size_t>(p.token)];
    if (!pt.head.has_value()) continue;

    bool head_match = false;
    if (gt.head == 0) {
      head_match = *pt.head == 0;
    } else if (*pt.head != 0) {
      const int ph = *pt.head;
      if (ph >= 1 && ph <= static_cast<int>(psent.tokens.size())) {
        const CharSpan gold_head_span =
            gsent.tokens[static_cast<std::size_t>(gt.head - 1)].span;
        const CharSpan pred_head_span =
            psent.tokens[static_cast<std::size_t>(ph - 1)].span;
        head_match = gold_head_span == pred_head_span;
      }
    }
    if (!head_match) continue;
    const bool label_match = pt.deprel == gt.deprel;
    ++out.uas_correct;
    if (label_match) ++out.las_correct;
    if (gt.pos != "PUNCT") {
      ++out.uas_correct_nopunct;
      if (label_match) ++out.las_correct_nopunct;
    }
  }
  return out;
}

/// All counts for one (gold document, predicted document) pair,
/// restricted to the declared tasks.
inline DocCounts score_document(const Document& gold, const PredDocument& pred,
                                const std::set<Task>& tasks) {
  DocCounts out;
  out.doc_id = gold.doc_id;
  const Alignment alignment = align_tokens(gold, pred);
  if (tasks.count(Task::Pos)) out.pos = pos_counts(gold, pred, alignment);
  if (tasks.count(Task::Ner)) out.ner = ner_counts(gold, pred, &out.bio_repairs);
  if (tasks.count(Task::Dep)) out.dep = dep_counts(gold, pred, alignment);
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation into scores

struct PrF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;

  /// Exact-match P/R/F1 from counts. With nothing to find and nothing
  /// predicted the score is vacuously perfect.
  static PrF1 from_counts(long tp, long fp, long fn) {
    PrF1 out;
    out.tp = tp;
    out.fp = fp;
    out.fn = fn;
    if (tp + fp + fn == 0) {
      out.precision = out.recall = out.f1 = 1.0;
      return out;
    }
    out.precision = tp + fp > 0 ? static_cast<double>(tp) /
                                      static_cast<double>(tp + fp)
                                : 0.0;
    out.recall =
        tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn)
                    : 0.0;
    out.f1 = out.precision + out.recall > 0.0
                 ? 2.0 * out.precision * out.recall /
                       (out.precision + out.recall)
                 : 0.0;
    return out;
  }
};

/// Corpus-level scores for one prediction set, with full count
/// provenance. Fractions only exist for declared tasks.
struct TaskScores {
  std::optional<double> pos_accuracy;
  long pos_total = 0;

  std::map<EntityType, PrF1> ner_by_type;
  std::optional<PrF1> ner_micro;
  std::optional<PrF1> ner_micro_no_misc;
  std::optional<double> ner_macro_f1;
  std::optional<double> ner_macro_f1_no_misc;
  long ner_gold_entities = 0;

  std::optional<double> uas;
  std::optional<double> las;
  long dep_total = 0;
};

inline double safe_ratio(long num, long den, double when_empty = 1.0) {
  return den == 0 ? when_empty
                  : static_cast<double>(num) / static_cast<double>(den);
}

/// Reduces per-document counts into corpus scores: counts are summed
/// first and divided once, so the result is invariant under document
/// order permutation.
inline TaskScores compute_scores(const std::vector<DocCounts>& docs,
                                 const std::set<Task>& tasks,
                                 bool exclude_punct = false) {
  TaskScores out;
  PosCounts pos;
  NerCounts ner;
  DepCounts dep;
  for (const DocCounts& doc : docs) {
    pos += doc.pos;
    ner += doc.ner;
    dep += doc.dep;
  }
  if (tasks.count(Task::Pos)) {
    out.pos_accuracy = safe_ratio(pos.correct, pos.total);
    out.pos_total = pos.total;
  }
  if (tasks.count(Task::Ner)) {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tp3 = 0;
    long fp3 = 0;
    long fn3 = 0;
    double f1_sum = 0.0;
    double f1_sum3 = 0.0;
    for (EntityType t : kEntityTypes) {
      const NerTypeCounts& c = ner.by_type.at(t);
      const PrF1 pr = PrF1::from_counts(c.tp, c.fp, c.fn);
      out.ner_by_type[t] = pr;
      f1_sum += pr.f1;
      tp += c.tp;
      fp += c.fp;
      fn += c.fn;
      if (t != EntityType::MISC) {
        f1_sum3 += pr.f1;
        tp3 += c.tp;
        fp3 += c.fp;
        fn3 += c.fn;
      }
      out.ner_gold_entities += c.tp + c.fn;
    }
    out.ner_micro = PrF1::from_counts(tp, fp, fn);
    out.ner_micro_no_misc = PrF1::from_counts(tp3, fp3, fn3);
    out.ner_macro_f1 = f1_sum / 4.0;
    out.ner_macro_f1_no_misc = f1_sum3 / 3.0;
  }
  if (tasks.count(Task::Dep)) {
    if (exclude_punct) {
      out.uas = safe_ratio(dep.uas_correct_nopunct, dep.total_nopunct);
      out.las = safe_ratio(dep.las_correct_nopunct, dep.total_nopunct);
      out.dep_total = dep.total_nopunct;
    } else {
      out.uas = safe_ratio(dep.uas_correct, dep.total);
      out.las = safe_ratio(dep.las_correct, dep.total);
      out.dep_total = dep.total;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Document-level headline scores (the paired-bootstrap unit)

inline double doc_pos_accuracy(const DocCounts& doc) {
  return safe_ratio(doc.pos.correct, doc.pos.total);
}

inline double doc_ner_f1(const DocCounts& doc, bool no_misc) {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  for (EntityType t : kEntityTypes) {
    if (no_misc && t == EntityType::MISC) continue;
    const NerTypeCounts& c = doc.ner.by_type.at(t);
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  return PrF1::from_counts(tp, fp, fn).f1;
}

inline double doc_ner_macro_f1(const DocCounts& doc, bool no_misc) {
  double sum = 0.0;
  int n = 0;
  for (EntityType t : kEntityTypes) {
    if (no_misc && t == EntityType::MISC) continue;
    const NerTypeCounts& c = doc.ner.by_type.at(t);
    sum += PrF1::from_counts(c.tp, c.fp, c.fn).f1;
    ++n;
  }
  return sum / static_cast<double>(n);
}

inline double doc_uas(const DocCounts& doc, bool exclude_punct) {
  return exclude_punct
             ? safe_ratio(doc.dep.uas_correct_nopunct, doc.dep.total_nopunct)
             : safe_ratio(doc.dep.uas_correct, doc.dep.total);
}

inline double doc_las(const DocCounts& doc, bool exclude_punct) {
  return exclude_punct
             ? safe_ratio(doc.dep.las_correct_nopunct, doc.dep.total_nopunct)
             : safe_ratio(doc.dep.las_correct, doc.dep.total);
}

}  // namespace augbench

#endif  // AUGBENCH_METRICS_HPP_
