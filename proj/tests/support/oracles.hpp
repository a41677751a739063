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

#ifndef AUGBENCH_TESTS_SUPPORT_ORACLES_HPP_
#define AUGBENCH_TESTS_SUPPORT_ORACLES_HPP_

#include <map>
#include <string>
#include <vector>

#include "augbench/corpus.hpp"
#include "augbench/predictions.hpp"
#include "augbench/rng.hpp"

// Brute-force reference implementations for the metric battery. These
// deliberately avoid the library's alignment/count machinery: entities
// are compared as multisets of "type:start:end" strings and attachment
// is checked token by token with linear scans, so a bug in the library
// and a bug here would have to coincide to go unnoticed.

namespace augbench::testing {

/// Predictions that copy the gold annotations verbatim.
inline PredDocument pred_from_gold(const Document& doc) {
  PredDocument out;
  out.doc_id = doc.doc_id;
  for (const Sentence& sent : doc.sentences) {
    PredSentence ps;
    for (const Token& tok : sent.tokens) {
      PredToken pt;
      pt.form = tok.form;
      pt.span = tok.span;
      pt.pos = tok.pos;
      pt.head = tok.head;
      pt.deprel = tok.deprel;
      pt.ner = tok.ner;
      ps.tokens.push_back(std::move(pt));
    }
    out.sentences.push_back(std::move(ps));
  }
  return out;
}

// ---------------------------------------------------------------------------
// NER by multiset intersection

struct BrutePr {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

inline BrutePr brute_pr(long tp, long fp, long fn) {
  BrutePr out;
  out.tp = tp;
  out.fp = fp;
  out.fn = fn;
  if (tp + fp + fn == 0) return out;  // vacuously perfect
  out.precision = tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0;
  out.recall = tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0;
  out.f1 = out.precision + out.recall > 0
               ? 2 * out.precision * out.recall /
                     (out.precision + out.recall)
               : 0.0;
  return out;
}

/// Entity keys "TYPE:start:end" for one gold document.
inline std::vector<std::string> brute_gold_entity_keys(const Document& doc) {
  std::vector<std::string> keys;
  for (const Sentence& sent : doc.sentences) {
    const std::size_t n = sent.tokens.size();
    std::size_t i = 0;
    while (i < n) {
      const BioTag tag = sent.tokens[i].ner;
      if (tag.marker == BioTag::Marker::B) {
        std::size_t j = i;
        while (j + 1 < n &&
               sent.tokens[j + 1].ner.marker == BioTag::Marker::I &&
               sent.tokens[j + 1].ner.type == tag.type) {
          ++j;
        }
        keys.push_back(to_string(tag.type) + ":" +
                       std::to_string(sent.tokens[i].span.start) + ":" +
                       std::to_string(sent.tokens[j].span.end));
        i = j + 1;
      } else {
        ++i;
      }
    }
  }
  return keys;
}

inline std::vector<std::string> brute_pred_entity_keys(
    const PredDocument& doc) {
  std::vector<std::string> keys;
  for (const PredSentence& sent : doc.sentences) {
    const std::size_t n = sent.tokens.size();
    // Repair pass: an I-X without a same-type B-/I- directly before it
    // acts as B-X.
    std::vector<BioTag> tags;
    for (const PredToken& tok : sent.tokens) tags.push_back(tok.ner);
    for (std::size_t i = 0; i < n; ++i) {
      if (tags[i].marker != BioTag::Marker::I) continue;
      const bool has_prefix =
          i > 0 && !tags[i - 1].is_outside() && tags[i - 1].type == tags[i].type;
      if (!has_prefix) tags[i].marker = BioTag::Marker::B;
    }
    std::size_t i = 0;
    while (i < n) {
      if (tags[i].marker == BioTag::Marker::B) {
        std::size_t j = i;
        while (j + 1 < n && tags[j + 1].marker == BioTag::Marker::I &&
               tags[j + 1].type == tags[i].type) {
          ++j;
        }
        keys.push_back(to_string(tags[i].type) + ":" +
                       std::to_string(sent.tokens[i].span.start) + ":" +
                       std::to_string(sent.tokens[j].span.end));
        i = j + 1;
      } else {
        ++i;
      }
    }
  }
  return keys;
}

/// Per-type and micro P/R/F1 over whole corpora via multiset counting.
struct BruteNerScores {
  std::map<std::string, BrutePr> by_type;  // "PER", "LOC", "ORG", "MISC"
  BrutePr micro;
  BrutePr micro_no_misc;
};

inline BruteNerScores brute_ner(const std::vector<Document>& gold,
                                const std::vector<PredDocument>& pred) {
  std::map<std::string, std::map<std::string, long>> gold_count;  // type->key
  std::map<std::string, std::map<std::string, long>> pred_count;
  for (const Document& doc : gold) {
    for (const std::string& key : brute_gold_entity_keys(doc)) {
      gold_count[key.substr(0, key.find(':'))][key] += 1;
    }
  }
  for (const PredDocument& doc : pred) {
    for (const std::string& key : brute_pred_entity_keys(doc)) {
      pred_count[key.substr(0, key.find(':'))][key] += 1;
    }
  }
  BruteNerScores out;
  long tp_all = 0;
  long fp_all = 0;
  long fn_all = 0;
  long tp_nm = 0;
  long fp_nm = 0;
  long fn_nm = 0;
  for (const std::string type : {"PER", "LOC", "ORG", "MISC"}) {
    long tp = 0;
    long gold_total = 0;
    long pred_total = 0;
    for (const auto& [key, count] : gold_count[type]) {
      gold_total += count;
      const auto it = pred_count[type].find(key);
      if (it != pred_count[type].end()) tp += std::min(count, it->second);
    }
    for (const auto& [key, count] : pred_count[type]) pred_total += count;
    const long fp = pred_total - tp;
    const long fn = gold_total - tp;
    out.by_type[type] = brute_pr(tp, fp, fn);
    tp_all += tp;
    fp_all += fp;
    fn_all += fn;
    if (type != std::string("MISC")) {
      tp_nm += tp;
      fp_nm += fp;
      fn_nm += fn;
    }
  }
  out.micro = brute_pr(tp_all, fp_all, fn_all);
  out.micro_no_misc = brute_pr(tp_nm, fp_nm, fn_nm);
  return out;
}

// ---------------------------------------------------------------------------
// Attachment scores by per-token loops

struct BruteDepScores {
  double uas = 1.0;
  double las = 1.0;
  long total = 0;
};

inline BruteDepScores brute_uas_las(const std::vector<Document>& gold,
                                    const std::vector<PredDocument>& pred,
                                    bool exclude_punct = false) {
  long total = 0;
  long uas = 0;
  long las = 0;
  for (std::size_t d = 0; d < gold.size(); ++d) {
    const Document& gdoc = gold[d];
    const PredDocument& pdoc = pred[d];
    for (const Sentence& gsent : gdoc.sentences) {
      for (const Token& gt : gsent.tokens) {
        if (exclude_punct && gt.pos == "PUNCT") continue;
        ++total;
        // Find the predicted token with the same span, scanning everything.
        const PredToken* pt = nullptr;
        const PredSentence* pt_sent = nullptr;
        for (const PredSentence& psent : pdoc.sentences) {
          for (const PredToken& cand : psent.tokens) {
            if (cand.span == gt.span) {
              pt = &cand;
              pt_sent = &psent;
            }
          }
        }
        if (pt == nullptr || !pt->head.has_value()) continue;
        bool head_ok = false;
        if (gt.head == 0) {
          head_ok = *pt->head == 0;
        } else if (*pt->head >= 1 &&
                   *pt->head <= static_cast<int>(pt_sent->tokens.size())) {
          const CharSpan gspan =
              gsent.tokens[static_cast<std::size_t>(gt.head - 1)].span;
          const CharSpan pspan =
              pt_sent->tokens[static_cast<std::size_t>(*pt->head - 1)].span;
          head_ok = gspan == pspan;
        }
        if (head_ok) {
          ++uas;
          if (pt->deprel == gt.deprel) ++las;
        }
      }
    }
  }
  BruteDepScores out;
  out.total = total;
  if (total > 0) {
    out.uas = double(uas) / double(total);
    out.las = double(las) / double(total);
  }
  return out;
}

inline double brute_pos_accuracy(const std::vector<Document>& gold,
                                 const std::vector<PredDocument>& pred) {
  long total = 0;
  long correct = 0;
  for (std::size_t d = 0; d < gold.size(); ++d) {
    for (const Sentence& gsent : gold[d].sentences) {
      for (const Token& gt : gsent.tokens) {
        ++total;
        for (const PredSentence& psent : pred[d].sentences) {
          for (const PredToken& cand : psent.tokens) {
            if (cand.span == gt.span && !cand.pos.empty() &&
                cand.pos == gt.pos) {
              ++correct;
            }
          }
        }
      }
    }
  }
  return total == 0 ? 1.0 : double(correct) / double(total);
}

// ---------------------------------------------------------------------------
// Random prediction perturbations

/// Derives a prediction from gold with label noise, token merges, token
/// drops, and occasional orphan I- tags, to exercise alignment and
/// repair paths.
inline PredDocument perturb_predictions(const Document& doc, RngStream& rng) {
  static const std::vector<std::string> pos_pool = {"NOUN", "VERB", "ADJ",
                                                    "PROPN", "PUNCT"};
  static const std::vector<std::string> deprel_pool = {"nsubj", "obj", "dep",
                                                       "root"};
  PredDocument out;
  out.doc_id = doc.doc_id;
  for (const Sentence& sent : doc.sentences) {
    PredSentence ps;
    const std::size_t n = sent.tokens.size();
    for (std::size_t t = 0; t < n; ++t) {
      const Token& tok = sent.tokens[t];
      if (rng.bernoulli(0.08)) continue;  // dropped token
      PredToken pt;
      pt.form = tok.form;
      pt.span = tok.span;
      pt.pos = tok.pos;
      pt.head = tok.head;
      pt.deprel = tok.deprel;
      pt.ner = tok.ner;
      if (t + 1 < n && rng.bernoulli(0.1)) {
        // Merge with the next gold token: one prediction covering both.
        const Token& next = sent.tokens[t + 1];
        pt.form += next.form;
        pt.span.end = next.span.end;
        ++t;
      }
      if (rng.bernoulli(0.2)) {
        pt.pos = pos_pool[static_cast<std::size_t>(
            rng.bounded(pos_pool.size()))];
      }
      if (rng.bernoulli(0.2)) {
        pt.head = static_cast<int>(rng.bounded(n + 1));
      }
      if (rng.bernoulli(0.2)) {
        pt.deprel = deprel_pool[static_cast<std::size_t>(
            rng.bounded(deprel_pool.size()))];
      }
      if (rng.bernoulli(0.25)) {
        const std::uint64_t kind = rng.bounded(4);
        const EntityType type =
            kEntityTypes[static_cast<std::size_t>(rng.bounded(4))];
        if (kind == 0) {
          pt.ner = BioTag::outside();
        } else if (kind == 1) {
          pt.ner = BioTag::begin(type);
        } else {
          pt.ner = BioTag::inside(type);  // may be an orphan on purpose
        }
      }
      ps.tokens.push_back(std::move(pt));
    }
    out.sentences.push_back(std::move(ps));
  }
  return out;
}

}  // namespace augbench::testing

#endif  // AUGBENCH_TESTS_SUPPORT_ORACLES_HPP_
