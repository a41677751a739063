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

#ifndef AUGBENCH_CONLLU_HPP_
#define AUGBENCH_CONLLU_HPP_

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "augbench/corpus.hpp"
#include "augbench/text.hpp"

// CoNLL-U reading and writing. Gold corpora are parsed strictly: every
// type invariant of the corpus model is enforced at parse time, and a
// violation is a parse_error naming the line and the rule. NER tags ride
// in the MISC column as "name=<BIO tag>" following the DaNE convention.

namespace augbench {

class parse_error : public std::runtime_error {
 public:
  parse_error(int line, std::string rule, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + rule +
                           ": " + message),
        line_(line),
        rule_(std::move(rule)) {}

  int line() const { return line_; }
  const std::string& rule() const { return rule_; }

 private:
  int line_;
  std::string rule_;
};

inline const std::set<std::string>& upos_tags() {
  static const std::set<std::string> tags = {
      "ADJ",  "ADP",  "ADV",  "AUX",   "CCONJ", "DET",  "INTJ", "NOUN", "NUM",
      "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM",  "VERB", "X"};
  return tags;
}

namespace conllu_detail {

struct TokenLine {
  std::string id;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  std::string feats;
  std::string head;
  std::string deprel;
  std::string deps;
  std::string misc;
};

inline TokenLine split_columns(const std::string& line, int line_no) {
  const std::vector<std::string> cols = strings::split(line, '\t');
  if (cols.size() != 10) {
    throw parse_error(line_no, "column-count",
                      "expected 10 tab-separated columns, got " +
                          std::to_string(cols.size()));
  }
  return TokenLine{cols[0], cols[1], cols[2], cols[3], cols[4],
                   cols[5], cols[6], cols[7], cols[8], cols[9]};
}

struct MiscAttrs {
  bool space_after = true;
  std::optional<BioTag> ner;
  std::vector<std::string> extra;
};

inline MiscAttrs parse_misc(const std::string& misc, int line_no) {
  MiscAttrs out;
  if (misc == "_" || misc.empty()) return out;
  for (const std::string& attr : strings::split(misc, '|')) {
    if (attr == "SpaceAfter=No") {
      out.space_after = false;
    } else if (strings::starts_with(attr, "name=")) {
      const auto tag = BioTag::parse(std::string_view(attr).substr(5));
      if (!tag) {
        throw parse_error(line_no, "invalid-ner-tag",
                          "'" + attr.substr(5) +
                              "' is not O or {B,I}-{PER,LOC,ORG,MISC}");
      }
      out.ner = *tag;
    } else {
      out.extra.push_back(attr);
    }
  }
  return out;
}

inline std::optional<int> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  int value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    if (value > 214748363) return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

// Comment-line recognizers. "# sent_id = x" etc.; value may be empty.
inline std::optional<std::string> comment_value(const std::string& line,
                                                std::string_view key) {
  const std::string prefix = "# " + std::string(key) + " =";
  if (!strings::starts_with(line, prefix)) return std::nullopt;
  return strings::strip(line.substr(prefix.size()));
}

inline std::optional<std::pair<std::string, std::string>> key_value_comment(
    const std::string& line) {
  if (!strings::starts_with(line, "# ")) return std::nullopt;
  const std::size_t eq = line.find(" = ");
  if (eq == std::string::npos || eq <= 2) return std::nullopt;
  return std::make_pair(line.substr(2, eq - 2), line.substr(eq + 3));
}

}  // namespace conllu_detail

/// Parses a gold-standard CoNLL-U stream into a validated Corpus.
///
/// Document boundaries come from "# newdoc id = ..." comments; sentences
/// before the first marker form an implicit document "doc0". Multi-word
/// token ranges (3-4) and empty nodes (5.1) are rejected. Non-fatal
/// findings (e.g. a "# text" comment that disagrees with the forms) are
/// appended to *warnings when given.
inline Corpus parse_conllu(std::istream& in,
                           std::vector<Violation>* warnings = nullptr) {
  using namespace conllu_detail;
  Corpus corpus;
  corpus.explicit_outside_tags = false;

  Document doc;
  bool doc_open = false;
  bool any_content = false;  // saw newdoc/sent_id/text/token yet?
  std::set<std::string> seen_doc_ids;
  std::set<std::string> seen_sent_ids;
  int auto_sent_counter = 0;

  // Pending state for the sentence being read.
  std::string pending_sent_id;
  int pending_sent_id_line = 0;
  std::optional<std::string> pending_text;
  std::vector<std::string> pending_comments;
  std::vector<Token> pending_tokens;
  std::vector<int> pending_token_lines;
  int sentence_start_line = 0;

  const auto warn = [&warnings](int line, std::string rule,
                                std::string message) {
    if (warnings != nullptr) {
      warnings->push_back(Violation{Violation::Severity::Warning,
                                    "line " + std::to_string(line),
                                    std::move(rule), std::move(message)});
    }
  };

  const auto finish_document = [&]() {
    if (!doc_open) return;
    rebuild_text_and_spans(doc);
    corpus.documents.push_back(std::move(doc));
    doc = Document{};
    doc_open = false;
  };

  const auto finish_sentence = [&](int line_no) {
    if (pending_tokens.empty()) {
      if (!pending_sent_id.empty() || pending_text.has_value()) {
        throw parse_error(line_no, "empty-sentence",
                          "sentence comments without token lines");
      }
      return;
    }
    Sentence sent;
    sent.tokens = std::move(pending_tokens);
    sent.comments = std::move(pending_comments);
    sent.has_text_comment = pending_text.has_value();
    if (pending_sent_id.empty()) {
      sent.sent_id = "s" + std::to_string(++auto_sent_counter);
    } else {
      sent.sent_id = pending_sent_id;
    }
    if (!seen_sent_ids.insert(sent.sent_id).second) {
      throw parse_error(pending_sent_id_line != 0 ? pending_sent_id_line
                                                  : sentence_start_line,
                        "duplicate-sent-id",
                        "sent_id '" + sent.sent_id + "' appears twice");
    }

    const int n = static_cast<int>(sent.tokens.size());
    int roots = 0;
    for (int i = 0; i < n; ++i) {
      const Token& tok = sent.tokens[static_cast<std::size_t>(i)];
      const int tok_line = pending_token_lines[static_cast<std::size_t>(i)];
      if (tok.head < 0 || tok.head > n) {
        throw parse_error(tok_line, "head-out-of-range",
                          "head " + std::to_string(tok.head) +
                              " outside [0, " + std::to_string(n) + "]");
      }
      if (tok.head == 0) ++roots;
    }
    if (roots == 0) {
      throw parse_error(sentence_start_line, "no-root",
                        "no token has head 0");
    }
    if (roots > 1) {
      throw parse_error(sentence_start_line, "multiple-roots",
                        std::to_string(roots) + " tokens have head 0");
    }
    if (!detail::heads_acyclic(sent)) {
      throw parse_error(sentence_start_line, "head-cycle",
                        "head links contain a cycle");
    }
    if (const int bad = first_bio_violation(sent); bad != 0) {
      throw parse_error(pending_token_lines[static_cast<std::size_t>(bad - 1)],
                        "bio-discontinuity",
                        "I- tag without matching preceding B-/I- tag");
    }
    if (pending_text.has_value()) {
      const std::string computed = sentence_text(sent);
      if (computed != *pending_text) {
        warn(sentence_start_line, "text-comment-mismatch",
             "'# text' comment does not match forms joined by SpaceAfter");
      }
    }

    if (!doc_open) {
      doc.doc_id = "doc0";
      if (!seen_doc_ids.insert(doc.doc_id).second) {
        throw parse_error(sentence_start_line, "duplicate-doc-id",
                          "implicit doc_id 'doc0' collides");
      }
      doc_open = true;
    }
    doc.sentences.push_back(std::move(sent));

    pending_sent_id.clear();
    pending_sent_id_line = 0;
    pending_text.reset();
    pending_comments.clear();
    pending_tokens.clear();
    pending_token_lines.clear();
    sentence_start_line = 0;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    if (line.empty()) {
      finish_sentence(line_no);
      continue;
    }

    if (line[0] == '#') {
      if (auto id = conllu_detail::comment_value(line, "newdoc id")) {
        if (!pending_tokens.empty()) {
          throw parse_error(line_no, "newdoc-inside-sentence",
                            "'# newdoc id' before sentence terminator");
        }
        finish_sentence(line_no);
        finish_document();
        doc.doc_id = *id;
        if (doc.doc_id.empty()) {
          throw parse_error(line_no, "empty-doc-id", "newdoc id is empty");
        }
        if (!seen_doc_ids.insert(doc.doc_id).second) {
          throw parse_error(line_no, "duplicate-doc-id",
                            "doc_id '" + doc.doc_id + "' appears twice");
        }
        doc_open = true;
        any_content = true;
      } else if (auto sid = conllu_detail::comment_value(line, "sent_id")) {
        pending_sent_id = *sid;
        pending_sent_id_line = line_no;
        any_content = true;
      } else if (auto text = conllu_detail::comment_value(line, "text")) {
        pending_text = *text;
        any_content = true;
      } else if (!any_content) {
        // File-header comments become corpus provenance.
        if (auto kv = conllu_detail::key_value_comment(line)) {
          corpus.provenance.push_back(*kv);
        } else {
          pending_comments.push_back(line);
        }
      } else {
        pending_comments.push_back(line);
      }
      continue;
    }

    // Token line.
    any_content = true;
    if (sentence_start_line == 0) sentence_start_line = line_no;
    const auto cols = conllu_detail::split_columns(line, line_no);

    if (cols.id.find('-') != std::string::npos) {
      throw parse_error(line_no, "multiword-token",
                        "multi-word token ranges are not supported");
    }
    if (cols.id.find('.') != std::string::npos) {
      throw parse_error(line_no, "empty-node",
                        "empty-node ids are not supported");
    }
    const auto id = conllu_detail::parse_int(cols.id);
    if (!id || *id < 1) {
      throw parse_error(line_no, "invalid-token-id",
                        "'" + cols.id + "' is not a positive integer");
    }
    if (*id != static_cast<int>(pending_tokens.size()) + 1) {
      throw parse_error(line_no, "non-sequential-id",
                        "expected id " +
                            std::to_string(pending_tokens.size() + 1) +
                            ", got " + cols.id);
    }
    if (cols.form.empty() || cols.form == "_") {
      throw parse_error(line_no, "empty-form", "token form is empty");
    }
    if (strings::contains_whitespace(cols.form)) {
      throw parse_error(line_no, "whitespace-in-form",
                        "token forms must not contain whitespace");
    }
    if (upos_tags().count(cols.upos) == 0) {
      throw parse_error(line_no, "invalid-upos",
                        "'" + cols.upos + "' is not a UPOS category");
    }
    const auto head = conllu_detail::parse_int(cols.head);
    if (!head) {
      throw parse_error(line_no, "non-integer-head",
                        "'" + cols.head + "' is not a non-negative integer");
    }
    if (*head == *id) {
      throw parse_error(line_no, "self-loop", "token is its own head");
    }
    if (cols.deprel.empty() || cols.deprel == "_") {
      throw parse_error(line_no, "missing-deprel",
                        "dependency relation is required");
    }
    const auto misc = conllu_detail::parse_misc(cols.misc, line_no);
    if (misc.ner.has_value()) corpus.explicit_outside_tags = true;

    Token tok;
    tok.index = *id;
    tok.form = cols.form;
    tok.pos = cols.upos;
    tok.head = *head;
    tok.deprel = cols.deprel;
    tok.ner = misc.ner.value_or(BioTag::outside());
    tok.space_after = misc.space_after;
    tok.lemma = cols.lemma;
    tok.xpos = cols.xpos;
    tok.feats = cols.feats;
    tok.deps = cols.deps;
    tok.misc_extra = misc.extra;
    pending_tokens.push_back(std::move(tok));
    pending_token_lines.push_back(line_no);
  }
  finish_sentence(line_no + 1);
  finish_document();
  return corpus;
}

inline Corpus parse_conllu(const std::string& content,
                           std::vector<Violation>* warnings = nullptr) {
  std::istringstream in(content);
  return parse_conllu(in, warnings);
}

// ---------------------------------------------------------------------------
// Serialization

namespace conllu_detail {

inline std::string misc_string(const Token& tok, bool explicit_outside) {
  std::vector<std::string> attrs;
  if (!tok.ner.is_outside() || explicit_outside) {
    attrs.push_back("name=" + tok.ner.str());
  }
  for (const std::string& extra : tok.misc_extra) attrs.push_back(extra);
  if (!tok.space_after) attrs.push_back("SpaceAfter=No");
  if (attrs.empty()) return "_";
  std::string out = attrs[0];
  for (std::size_t i = 1; i < attrs.size(); ++i) out += "|" + attrs[i];
  return out;
}

}  // namespace conllu_detail

/// Serializes a corpus back to CoNLL-U. parse_conllu(serialize_conllu(c))
/// equals c field-for-field; output is canonical (fixed comment and MISC
/// attribute ordering, LF line endings, blank line after every sentence).
inline std::string serialize_conllu(const Corpus& corpus) {
  std::string out;
  for (const auto& [key, value] : corpus.provenance) {
    out += "# " + key + " = " + value + "\n";
  }
  for (const Document& doc : corpus.documents) {
    out += "# newdoc id = " + doc.doc_id + "\n";
    for (const Sentence& sent : doc.sentences) {
      out += "# sent_id = " + sent.sent_id + "\n";
      if (sent.has_text_comment) {
        out += "# text = " + sentence_text(sent) + "\n";
      }
      for (const std::string& comment : sent.comments) {
        out += comment + "\n";
      }
      for (const Token& tok : sent.tokens) {
        out += std::to_string(tok.index);
        out += '\t';
        out += tok.form;
        out += '\t';
        out += tok.lemma;
        out += '\t';
        out += tok.pos;
        out += '\t';
        out += tok.xpos;
        out += '\t';
        out += tok.feats;
        out += '\t';
        out += std::to_string(tok.head);
        out += '\t';
        out += tok.deprel;
        out += '\t';
        out += tok.deps;
        out += '\t';
        out += conllu_detail::misc_string(tok, corpus.explicit_outside_tags);
        out += '\n';
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace augbench

#endif  // AUGBENCH_CONLLU_HPP_
