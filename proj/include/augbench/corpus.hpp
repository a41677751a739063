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

#ifndef AUGBENCH_CORPUS_HPP_
#define AUGBENCH_CORPUS_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "augbench/text.hpp"

// The token-annotated corpus model. Every other module operates on these
// value types; they are immutable by convention once built (operations
// return new corpora rather than mutating in place).

namespace augbench {

enum class EntityType { PER, LOC, ORG, MISC };

constexpr std::array<EntityType, 4> kEntityTypes = {
    EntityType::PER, EntityType::LOC, EntityType::ORG, EntityType::MISC};

inline std::string to_string(EntityType t) {
  switch (t) {
    case EntityType::PER:
      return "PER";
    case EntityType::LOC:
      return "LOC";
    case EntityType::ORG:
      return "ORG";
    case EntityType::MISC:
      return "MISC";
  }
  return "?";
}

inline std::optional<EntityType> entity_type_from(std::string_view s) {
  if (s == "PER") return EntityType::PER;
  if (s == "LOC") return EntityType::LOC;
  if (s == "ORG") return EntityType::ORG;
  if (s == "MISC") return EntityType::MISC;
  return std::nullopt;
}

/// A BIO tag: O, or B-X / I-X for an entity type X.
struct BioTag {
  enum class Marker { O, B, I };
  Marker marker = Marker::O;
  EntityType type = EntityType::PER;  // meaningful only when marker != O

  static BioTag outside() { return BioTag{}; }
  static BioTag begin(EntityType t) { return BioTag{Marker::B, t}; }
  static BioTag inside(EntityType t) { return BioTag{Marker::I, t}; }

  bool is_outside() const { return marker == Marker::O; }

  std::string str() const {
    switch (marker) {
      case Marker::O:
        return "O";
      case Marker::B:
        return "B-" + to_string(type);
      case Marker::I:
        return "I-" + to_string(type);
    }
    return "?";
  }

  /// Parses "O", "B-PER", "I-MISC", ...; nullopt if not a valid tag.
  static std::optional<BioTag> parse(std::string_view s) {
    if (s == "O") return outside();
    if (s.size() < 3 || s[1] != '-') return std::nullopt;
    const auto type = entity_type_from(s.substr(2));
    if (!type) return std::nullopt;
    if (s[0] == 'B') return begin(*type);
    if (s[0] == 'I') return inside(*type);
    return std::nullopt;
  }

  friend bool operator==(const BioTag&, const BioTag&) = default;
};

/// Half-open character (code point) interval into the document text.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
  friend auto operator<=>(const CharSpan&, const CharSpan&) = default;
};

struct Token {
  int index = 0;          // 1-based position within the sentence
  std::string form;       // surface text, non-empty
  std::string pos;        // UPOS category
  int head = 0;           // sentence-relative head index, 0 = root
  std::string deprel;     // dependency relation
  BioTag ner;             // BIO NER tag
  CharSpan span;          // [start, end) into the document text
  bool space_after = true;

  // Opaque CoNLL-U columns preserved through round-trip.
  std::string lemma = "_";
  std::string xpos = "_";
  std::string feats = "_";
  std::string deps = "_";
  std::vector<std::string> misc_extra;  // unrecognized MISC attributes

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::string sent_id;
  std::vector<Token> tokens;
  bool has_text_comment = false;        // emit "# text = ..." on serialize
  std::vector<std::string> comments;    // other comment lines, verbatim

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;
  std::string text;  // raw text; forms + spaces reproduce it exactly

  friend bool operator==(const Document&, const Document&) = default;
};

struct Corpus {
  std::vector<Document> documents;
  // Free-form origin metadata, serialized as "# key = value" header lines.
  std::vector<std::pair<std::string, std::string>> provenance;
  // Whether to write explicit "name=O" for outside tokens (gold corpora
  // following the DaNE convention carry the attribute on every token).
  // A serialization preference, not data: excluded from equality.
  bool explicit_outside_tags = true;

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.documents == b.documents && a.provenance == b.provenance;
  }
};

/// A maximal entity over a half-open 1-based token index range.
struct EntitySpan {
  EntityType type = EntityType::PER;
  int start = 0;  // first token index (1-based)
  int end = 0;    // one past the last token index

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string location;  // e.g. "line 12" or "doc d1 sent s3 token 4"
  std::string rule;      // short rule identifier, e.g. "bio-discontinuity"
  std::string message;

  std::string str() const {
    return std::string(severity == Severity::Error ? "error" : "warning") +
           "\t" + location + "\t" + rule + "\t" + message;
  }
};

namespace detail {

inline std::string sent_location(const Document& doc, const Sentence& sent,
                                 int token_index = 0) {
  std::string loc = "doc " + doc.doc_id + " sent " + sent.sent_id;
  if (token_index > 0) loc += " token " + std::to_string(token_index);
  return loc;
}

/// True iff head links of the sentence form a tree rooted at the
/// (assumed unique) token with head 0.
inline bool heads_acyclic(const Sentence& sent) {
  const int n = static_cast<int>(sent.tokens.size());
  // Walk up from every token; a chain longer than n nodes means a cycle.
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    int steps = 0;
    while (cur != 0) {
      cur = sent.tokens[static_cast<std::size_t>(cur - 1)].head;
      if (++steps > n) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Checks the BIO sequence of a sentence: every I-X must directly follow
/// B-X or I-X of the same type. Returns the 1-based index of the first
/// offending token, or 0 if well-formed.
inline int first_bio_violation(const Sentence& sent) {
  BioTag prev = BioTag::outside();
  for (const Token& tok : sent.tokens) {
    if (tok.ner.marker == BioTag::Marker::I &&
        (prev.is_outside() || prev.type != tok.ner.type)) {
      return tok.index;
    }
    prev = tok.ner;
  }
  return 0;
}

/// Full corpus validation: span soundness, document text reconstruction,
/// tree shape (single root, no self-loops, acyclic), BIO well-formedness,
/// unique identifiers. Returns all violations found.
inline std::vector<Violation> validate(const Corpus& corpus) {
  std::vector<Violation> out;
  const auto err = [&out](std::string loc, std::string rule,
                          std::string message) {
    out.push_back(Violation{Violation::Severity::Error, std::move(loc),
                            std::move(rule), std::move(message)});
  };

  std::set<std::string> doc_ids;
  std::set<std::string> sent_ids;
  for (const Document& doc : corpus.documents) {
    if (!doc_ids.insert(doc.doc_id).second) {
      err("doc " + doc.doc_id, "duplicate-doc-id", "doc_id appears twice");
    }
    // Rebuild the raw text from forms and space_after and compare.
    std::string rebuilt;
    std::size_t cursor = 0;  // in code points
    const Sentence* last_sent =
        doc.sentences.empty() ? nullptr : &doc.sentences.back();
    for (const Sentence& sent : doc.sentences) {
      if (!sent_ids.insert(sent.sent_id).second) {
        err(detail::sent_location(doc, sent), "duplicate-sent-id",
            "sent_id appears twice");
      }
      const int n = static_cast<int>(sent.tokens.size());
      if (n == 0) {
        err(detail::sent_location(doc, sent), "empty-sentence",
            "sentence has no tokens");
        continue;
      }
      int roots = 0;
      for (const Token& tok : sent.tokens) {
        const std::string loc = detail::sent_location(doc, sent, tok.index);
        if (tok.form.empty()) err(loc, "empty-form", "token form is empty");
        if (tok.head == 0) ++roots;
        if (tok.head == tok.index) {
          err(loc, "self-loop", "token is its own head");
        }
        if (tok.head < 0 || tok.head > n) {
          err(loc, "head-out-of-range",
              "head " + std::to_string(tok.head) + " outside [0, " +
                  std::to_string(n) + "]");
        }
        const std::size_t form_len = utf8::length(tok.form);
        if (tok.span.start != cursor || tok.span.length() != form_len) {
          err(loc, "span-mismatch",
              "span [" + std::to_string(tok.span.start) + ", " +
                  std::to_string(tok.span.end) + ") does not match position " +
                  std::to_string(cursor) + " length " +
                  std::to_string(form_len));
        }
        rebuilt += tok.form;
        cursor += form_len;
        const bool doc_final =
            (&sent == last_sent) && (tok.index == n);
        if (tok.space_after && !doc_final) {
          rebuilt += ' ';
          ++cursor;
        }
      }
      if (roots != 1) {
        err(detail::sent_location(doc, sent),
            roots == 0 ? "no-root" : "multiple-roots",
            std::to_string(roots) + " tokens have head 0");
      } else if (!detail::heads_acyclic(sent)) {
        err(detail::sent_location(doc, sent), "head-cycle",
            "head links contain a cycle");
      }
      if (const int bad = first_bio_violation(sent); bad != 0) {
        err(detail::sent_location(doc, sent, bad), "bio-discontinuity",
            "I- tag without matching preceding B-/I- tag");
      }
    }
    if (rebuilt != doc.text) {
      err("doc " + doc.doc_id, "text-mismatch",
          "document text does not equal forms joined by space_after");
    }
  }
  return out;
}

inline bool is_valid(const Corpus& corpus) { return validate(corpus).empty(); }

// ---------------------------------------------------------------------------
// Text/span reconstruction

/// Recomputes a document's raw text and all token spans from forms and
/// space_after flags. Every operation that edits forms calls this, so
/// offset bookkeeping lives in exactly one place.
inline void rebuild_text_and_spans(Document& doc) {
  std::string text;
  std::size_t cursor = 0;
  Sentence* last_sent = doc.sentences.empty() ? nullptr : &doc.sentences.back();
  for (Sentence& sent : doc.sentences) {
    const int n = static_cast<int>(sent.tokens.size());
    for (Token& tok : sent.tokens) {
      const std::size_t len = utf8::length(tok.form);
      tok.span = CharSpan{cursor, cursor + len};
      text += tok.form;
      cursor += len;
      const bool doc_final = (&sent == last_sent) && (tok.index == n);
      if (tok.space_after && !doc_final) {
        text += ' ';
        ++cursor;
      }
    }
  }
  doc.text = std::move(text);
}

/// Raw text of one sentence on its own (no trailing space).
inline std::string sentence_text(const Sentence& sent) {
  std::string text;
  const int n = static_cast<int>(sent.tokens.size());
  for (const Token& tok : sent.tokens) {
    text += tok.form;
    if (tok.space_after && tok.index != n) text += ' ';
  }
  return text;
}

// ---------------------------------------------------------------------------
// Entity decoding

/// Decodes maximal B-X (I-X)* runs into entity spans over 1-based token
/// indices. Assumes a BIO-well-formed sentence.
inline std::vector<EntitySpan> extract_entities(const Sentence& sent) {
  std::vector<EntitySpan> spans;
  for (std::size_t i = 0; i < sent.tokens.size(); ++i) {
    const BioTag& tag = sent.tokens[i].ner;
    if (tag.marker == BioTag::Marker::B) {
      std::size_t j = i + 1;
      while (j < sent.tokens.size() &&
             sent.tokens[j].ner.marker == BioTag::Marker::I &&
             sent.tokens[j].ner.type == tag.type) {
        ++j;
      }
      spans.push_back(EntitySpan{tag.type, static_cast<int>(i + 1),
                                 static_cast<int>(j + 1)});
      i = j - 1;
    }
  }
  return spans;
}

/// Re-encodes entity spans as a BIO sequence of the given length.
/// Inverse of extract_entities on well-formed input.
inline std::vector<BioTag> encode_bio(const std::vector<EntitySpan>& spans,
                                      int n_tokens) {
  std::vector<BioTag> tags(static_cast<std::size_t>(n_tokens),
                           BioTag::outside());
  for (const EntitySpan& span : spans) {
    for (int i = span.start; i < span.end; ++i) {
      tags[static_cast<std::size_t>(i - 1)] =
          i == span.start ? BioTag::begin(span.type) : BioTag::inside(span.type);
    }
  }
  return tags;
}

// ---------------------------------------------------------------------------
// Input-length grouping

/// Concatenates consecutive sentences of each document into documents of
/// exactly n sentences (the final group of a document may be shorter).
/// Grouping never crosses original document boundaries; sentence texts
/// are joined with single spaces and spans recomputed.
inline Corpus group_sentences(const Corpus& corpus, int n) {
  Corpus out;
  out.provenance = corpus.provenance;
  out.explicit_outside_tags = corpus.explicit_outside_tags;
  for (const Document& doc : corpus.documents) {
    const std::size_t group_size = static_cast<std::size_t>(n);
    for (std::size_t offset = 0, g = 0; offset < doc.sentences.size();
         offset += group_size, ++g) {
      Document grouped;
      grouped.doc_id = doc.doc_id + "-g" + std::to_string(g);
      const std::size_t end =
          std::min(offset + group_size, doc.sentences.size());
      for (std::size_t s = offset; s < end; ++s) {
        grouped.sentences.push_back(doc.sentences[s]);
        // A single joining space follows every non-final sentence.
        Sentence& sent = grouped.sentences.back();
        if (s + 1 != end && !sent.tokens.empty()) {
          sent.tokens.back().space_after = true;
        }
      }
      rebuild_text_and_spans(grouped);
      out.documents.push_back(std::move(grouped));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Total token count across the corpus.
inline std::size_t token_count(const Corpus& corpus) {
  std::size_t n = 0;
  for (const Document& doc : corpus.documents)
    for (const Sentence& sent : doc.sentences) n += sent.tokens.size();
  return n;
}

inline std::size_t sentence_count(const Corpus& corpus) {
  std::size_t n = 0;
  for (const Document& doc : corpus.documents) n += doc.sentences.size();
  return n;
}

}  // namespace augbench

#endif  // AUGBENCH_CORPUS_HPP_
