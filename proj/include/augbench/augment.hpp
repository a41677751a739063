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

#ifndef AUGBENCH_AUGMENT_HPP_
#define AUGBENCH_AUGMENT_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "augbench/corpus.hpp"
#include "augbench/resources.hpp"
#include "augbench/rng.hpp"
#include "augbench/text.hpp"

// Annotation-preserving text augmenters. Each one maps a gold document to
// a new gold document: surface text is perturbed, annotations are remapped
// so the output is again a valid gold standard. Stochastic augmenters are
// pure functions of (input, random stream); deterministic ones ignore
// randomness entirely.

namespace augbench {

/// Repairs a BIO tag sequence in place by promoting every orphan I-X
/// (one not preceded by B-X/I-X of the same type) to B-X. Returns the
/// number of tags changed.
inline int repair_bio_tags(std::vector<BioTag>& tags) {
  int repaired = 0;
  BioTag prev = BioTag::outside();
  for (BioTag& tag : tags) {
    if (tag.marker == BioTag::Marker::I &&
        (prev.is_outside() || prev.type != tag.type)) {
      tag.marker = BioTag::Marker::B;
      ++repaired;
    }
    prev = tag;
  }
  return repaired;
}

// ---------------------------------------------------------------------------
// Keystroke noise

/// Replaces each layout-covered letter, independently with the given
/// probability, by a uniformly sampled neighboring key. Sampling happens
/// in lowercase space and the original case is restored, so casing
/// statistics survive. Token boundaries, spans, and annotations are
/// untouched (every substitution is one character for one character).
template <typename Rng>
Document keystroke_augment(const Document& doc, double rate,
                           const KeyboardLayout& layout, Rng& rng) {
  Document out = doc;
  for (Sentence& sent : out.sentences) {
    for (Token& tok : sent.tokens) {
      std::u32string cps = utf8::decode(tok.form);
      bool changed = false;
      for (char32_t& cp : cps) {
        const char32_t lower = unicode::to_lower(cp);
        if (!layout.covers(lower)) continue;  // ineligible, never an error
        if (!rng.bernoulli(rate)) continue;
        const auto& neighbors = layout.neighbors(lower);
        char32_t replacement =
            neighbors[static_cast<std::size_t>(rng.bounded(neighbors.size()))];
        if (unicode::is_upper(cp)) replacement = unicode::to_upper(replacement);
        cp = replacement;
        changed = true;
      }
      if (changed) tok.form = utf8::encode(cps);
    }
  }
  rebuild_text_and_spans(out);
  return out;
}

// ---------------------------------------------------------------------------
// Transliteration of æ/ø/å

/// Substitutes æ->ae, ø->oe, å->aa (and Æ->Ae, Ø->Oe, Å->Aa) in every
/// form. Each hit lengthens the document by one character; spans are
/// recomputed. Deterministic and idempotent.
inline Document aeoeaa_augment(const Document& doc) {
  Document out = doc;
  for (Sentence& sent : out.sentences) {
    for (Token& tok : sent.tokens) {
      std::string form;
      for (char32_t cp : utf8::decode(tok.form)) {
        switch (cp) {
          case U'æ':
            form += "ae";
            break;
          case U'Æ':
            form += "Ae";
            break;
          case U'ø':
            form += "oe";
            break;
          case U'Ø':
            form += "Oe";
            break;
          case U'å':
            form += "aa";
            break;
          case U'Å':
            form += "Aa";
            break;
          default:
            utf8::append(form, cp);
        }
      }
      tok.form = std::move(form);
    }
  }
  rebuild_text_and_spans(out);
  return out;
}

// ---------------------------------------------------------------------------
// Lowercasing

/// Unicode simple lowercasing of every form. Deterministic, idempotent.
inline Document lowercase_augment(const Document& doc) {
  Document out = doc;
  for (Sentence& sent : out.sentences) {
    for (Token& tok : sent.tokens) {
      tok.form = unicode::to_lower(tok.form);
    }
  }
  rebuild_text_and_spans(out);
  return out;
}

// ---------------------------------------------------------------------------
// Whitespace deletion

namespace augment_detail {

// Depth of every token in the dependency tree (root = 0). Index 0 unused.
// Assumes a valid tree (the gold invariants guarantee one).
inline std::vector<int> token_depths(const Sentence& sent) {
  const int n = static_cast<int>(sent.tokens.size());
  std::vector<int> depth(static_cast<std::size_t>(n) + 1, -1);
  std::vector<int> path;
  for (int i = 1; i <= n; ++i) {
    path.clear();
    int cur = i;
    while (cur != 0 && depth[static_cast<std::size_t>(cur)] < 0 &&
           static_cast<int>(path.size()) <= n) {
      path.push_back(cur);
      cur = sent.tokens[static_cast<std::size_t>(cur - 1)].head;
    }
    int d = cur == 0 ? 0 : depth[static_cast<std::size_t>(cur)] + 1;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      depth[static_cast<std::size_t>(*it)] = d++;
    }
  }
  return depth;
}

}  // namespace augment_detail

/// Removes each intra-sentence inter-token space independently with the
/// given probability; tokens joined by a removed space merge into one.
/// Merged-token labels: POS from the first constituent; the NER tag
/// survives only when all constituents lie inside one entity span;
/// the head comes from the constituent whose head lies outside the
/// merge (dependents of absorbed tokens re-attach to the merged token,
/// and a merge containing the root becomes the root). The output is
/// re-validated structurally: orphaned I- tags are promoted to B- and
/// the rare head configuration that would form a cycle falls back to
/// the shallowest constituent's head.
template <typename Rng>
Document spacing_augment(const Document& doc, double rate, Rng& rng) {
  Document out = doc;
  for (Sentence& sent : out.sentences) {
    const int n = static_cast<int>(sent.tokens.size());
    if (n < 2) continue;

    // One decision per existing space between consecutive tokens.
    std::vector<bool> removed(static_cast<std::size_t>(n) - 1, false);
    bool any = false;
    for (int gap = 0; gap + 1 < n; ++gap) {
      if (!sent.tokens[static_cast<std::size_t>(gap)].space_after) continue;
      if (rng.bernoulli(rate)) {
        removed[static_cast<std::size_t>(gap)] = true;
        any = true;
      }
    }
    if (!any) continue;

    // Maximal runs of tokens connected by removed spaces, as 0-based
    // inclusive [begin, end] ranges.
    struct Group {
      int begin;
      int end;
    };
    std::vector<Group> groups;
    for (int i = 0; i < n;) {
      int j = i;
      while (j + 1 < n && removed[static_cast<std::size_t>(j)]) ++j;
      groups.push_back(Group{i, j});
      i = j + 1;
    }

    // Old 1-based index -> new 1-based index.
    std::vector<int> new_index(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (int i = groups[g].begin; i <= groups[g].end; ++i) {
        new_index[static_cast<std::size_t>(i) + 1] = static_cast<int>(g) + 1;
      }
    }

    const std::vector<EntitySpan> entities = extract_entities(sent);
    const std::vector<int> depth = augment_detail::token_depths(sent);

    // Head source per group: the constituent whose own head lies outside
    // the group. Root membership wins; with several external candidates
    // the first token is preferred when it qualifies.
    const auto choose_head_source = [&](const Group& grp,
                                        bool min_depth_rule) -> int {
      const int lo = grp.begin + 1;
      const int hi = grp.end + 1;
      std::vector<int> candidates;
      for (int i = lo; i <= hi; ++i) {
        const int h = sent.tokens[static_cast<std::size_t>(i - 1)].head;
        if (h == 0) return i;  // merged token becomes the root
        if (h < lo || h > hi) candidates.push_back(i);
      }
      // Acyclicity guarantees at least one candidate.
      if (min_depth_rule || candidates.size() == 1) {
        int best = candidates.front();
        for (int c : candidates) {
          if (depth[static_cast<std::size_t>(c)] <
              depth[static_cast<std::size_t>(best)]) {
            best = c;
          }
        }
        return best;
      }
      return candidates.front() == lo ? lo : candidates.front();
    };

    const auto build_merged = [&](const Group& grp,
                                  bool min_depth_rule) -> Token {
      const std::size_t b = static_cast<std::size_t>(grp.begin);
      const std::size_t e = static_cast<std::size_t>(grp.end);
      const Token& first = sent.tokens[b];
      if (grp.begin == grp.end) {
        Token tok = first;
        tok.index = new_index[static_cast<std::size_t>(grp.begin) + 1];
        tok.head = tok.head == 0
                       ? 0
                       : new_index[static_cast<std::size_t>(tok.head)];
        return tok;
      }
      Token tok;
      tok.index = new_index[b + 1];
      for (std::size_t i = b; i <= e; ++i) tok.form += sent.tokens[i].form;
      tok.pos = first.pos;
      tok.space_after = sent.tokens[e].space_after;

      // NER: keep the first constituent's tag only if the whole group
      // lies inside one entity span.
      tok.ner = BioTag::outside();
      for (const EntitySpan& ent : entities) {
        if (ent.start <= grp.begin + 1 && grp.end + 1 < ent.end) {
          tok.ner = first.ner;
          break;
        }
      }

      const int source = choose_head_source(grp, min_depth_rule);
      const Token& source_tok = sent.tokens[static_cast<std::size_t>(source - 1)];
      tok.head = source_tok.head == 0
                     ? 0
                     : new_index[static_cast<std::size_t>(source_tok.head)];
      tok.deprel = source_tok.deprel;
      return tok;
    };

    const auto assemble = [&](bool min_depth_rule) -> std::vector<Token> {
      std::vector<Token> merged;
      merged.reserve(groups.size());
      for (const Group& grp : groups) {
        merged.push_back(build_merged(grp, min_depth_rule));
      }
      return merged;
    };

    Sentence result;
    result.sent_id = sent.sent_id;
    result.has_text_comment = sent.has_text_comment;
    result.comments = sent.comments;
    result.tokens = assemble(/*min_depth_rule=*/false);
    if (!detail::heads_acyclic(result)) {
      result.tokens = assemble(/*min_depth_rule=*/true);
    }

    std::vector<BioTag> tags;
    tags.reserve(result.tokens.size());
    for (const Token& tok : result.tokens) tags.push_back(tok.ner);
    repair_bio_tags(tags);
    for (std::size_t i = 0; i < tags.size(); ++i) result.tokens[i].ner = tags[i];

    sent = std::move(result);
  }
  rebuild_text_and_spans(out);
  return out;
}

// ---------------------------------------------------------------------------
// Name substitution

/// Replaces every PER entity positionally: the first token by a sampled
/// first name, every following token by an independently sampled last
/// name. Token counts, BIO tags, heads, and deprels survive; POS of
/// replaced tokens becomes PROPN. Entities are sampled independently
/// (no document-level coherence).
template <typename Rng>
Document name_augment(const Document& doc, const NameLexicon& lexicon,
                      NameMode mode, Rng& rng) {
  const std::vector<std::string> first_pool = lexicon.first_names(mode);
  const std::vector<std::string> last_pool = lexicon.last_names(mode);
  if (first_pool.empty() || last_pool.empty()) {
    throw config_error("name pool for mode '" + to_string(mode) +
                       "' is empty");
  }
  Document out = doc;
  for (Sentence& sent : out.sentences) {
    for (const EntitySpan& ent : extract_entities(sent)) {
      if (ent.type != EntityType::PER) continue;
      for (int i = ent.start; i < ent.end; ++i) {
        Token& tok = sent.tokens[static_cast<std::size_t>(i - 1)];
        const auto& pool = i == ent.start ? first_pool : last_pool;
        tok.form = pool[static_cast<std::size_t>(rng.bounded(pool.size()))];
        tok.pos = "PROPN";
      }
    }
  }
  rebuild_text_and_spans(out);
  return out;
}

/// Abbreviates the first token of every PER entity to its first
/// character plus a full stop. Deterministic; annotations unchanged.
inline Document abbreviate_names(const Document& doc) {
  Document out = doc;
  for (Sentence& sent : out.sentences) {
    for (const EntitySpan& ent : extract_entities(sent)) {
      if (ent.type != EntityType::PER) continue;
      Token& tok = sent.tokens[static_cast<std::size_t>(ent.start - 1)];
      const std::u32string cps = utf8::decode(tok.form);
      tok.form = utf8::encode(cps[0]) + ".";
    }
  }
  rebuild_text_and_spans(out);
  return out;
}

// ---------------------------------------------------------------------------
// Augmenter objects, composition, repetition

/// A named corpus transformation with canonical parameters. Stochastic
/// augmenters are pure functions of (corpus, seed); deterministic ones
/// produce identical output for every seed.
struct Augmenter {
  enum class Kind { Deterministic, Stochastic };

  std::string name;
  std::map<std::string, std::string> params;
  Kind kind = Kind::Deterministic;
  std::function<Corpus(const Corpus&, RngStream&)> fn;

  /// Canonical identity, e.g. "keystroke[rate=0.05]". Stable across runs;
  /// used for file names, report columns, and seed bookkeeping.
  std::string id() const {
    if (params.empty()) return name;
    std::string out = name + "[";
    bool sep = false;
    for (const auto& [key, value] : params) {
      if (sep) out += ",";
      out += key + "=" + value;
      sep = true;
    }
    return out + "]";
  }

  Corpus apply(const Corpus& corpus, std::uint64_t seed) const {
    RngStream rng(seed);
    return fn(corpus, rng);
  }
};

/// A corpus produced by one repetition of one augmenter, with full
/// provenance for reproducibility.
struct AugmentedCorpus {
  Corpus corpus;
  std::string augmenter_id;
  std::string augmenter_name;
  Augmenter::Kind kind = Augmenter::Kind::Deterministic;
  std::uint64_t seed = 0;
  int rep = 0;
};

namespace augment_detail {

/// Lifts a per-document transform to corpora, forking one child random
/// stream per document so parallel and serial application agree.
template <typename F>
Corpus map_documents(const Corpus& corpus, RngStream& rng, F&& f) {
  Corpus out;
  out.provenance = corpus.provenance;
  out.explicit_outside_tags = corpus.explicit_outside_tags;
  out.documents.reserve(corpus.documents.size());
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    RngStream child = rng.child(i);
    out.documents.push_back(f(corpus.documents[i], child));
  }
  return out;
}

inline double parse_rate(const std::map<std::string, std::string>& params,
                         const std::string& augmenter) {
  const auto it = params.find("rate");
  if (it == params.end()) {
    throw config_error(augmenter + ": missing 'rate' parameter");
  }
  std::size_t consumed = 0;
  double rate = 0.0;
  try {
    rate = std::stod(it->second, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != it->second.size() || rate < 0.0 || rate > 1.0) {
    throw config_error(augmenter + ": rate must be a number in [0, 1], got '" +
                       it->second + "'");
  }
  return rate;
}

}  // namespace augment_detail

/// Builds an augmenter from its name and string parameters. Resource
/// arguments may be null for augmenters that do not need them; a missing
/// required resource is a configuration error.
inline Augmenter make_augmenter(const std::string& name,
                                const std::map<std::string, std::string>&
                                    params,
                                const KeyboardLayout* layout = nullptr,
                                const NameLexicon* lexicon = nullptr) {
  using augment_detail::map_documents;
  Augmenter aug;
  aug.name = name;
  aug.params = params;

  if (name == "identity") {
    aug.kind = Augmenter::Kind::Deterministic;
    aug.fn = [](const Corpus& c, RngStream&) { return c; };
  } else if (name == "keystroke") {
    const double rate = augment_detail::parse_rate(params, name);
    if (layout == nullptr) {
      throw config_error("keystroke: no keyboard layout configured");
    }
    const KeyboardLayout lay = *layout;
    aug.kind = Augmenter::Kind::Stochastic;
    aug.fn = [rate, lay](const Corpus& c, RngStream& rng) {
      return map_documents(c, rng, [&](const Document& d, RngStream& r) {
        return keystroke_augment(d, rate, lay, r);
      });
    };
  } else if (name == "aeoeaa") {
    aug.kind = Augmenter::Kind::Deterministic;
    aug.fn = [](const Corpus& c, RngStream& rng) {
      return map_documents(c, rng, [](const Document& d, RngStream&) {
        return aeoeaa_augment(d);
      });
    };
  } else if (name == "lowercase") {
    aug.kind = Augmenter::Kind::Deterministic;
    aug.fn = [](const Corpus& c, RngStream& rng) {
      return map_documents(c, rng, [](const Document& d, RngStream&) {
        return lowercase_augment(d);
      });
    };
  } else if (name == "spacing") {
    const double rate = augment_detail::parse_rate(params, name);
    aug.kind = Augmenter::Kind::Stochastic;
    aug.fn = [rate](const Corpus& c, RngStream& rng) {
      return map_documents(c, rng, [&](const Document& d, RngStream& r) {
        return spacing_augment(d, rate, r);
      });
    };
  } else if (name == "names") {
    const auto it = params.find("mode");
    if (it == params.end()) {
      throw config_error("names: missing 'mode' parameter");
    }
    const auto mode = name_mode_from(it->second);
    if (!mode) {
      throw config_error("names: unknown mode '" + it->second + "'");
    }
    if (lexicon == nullptr) {
      throw config_error("names: no name lexicon configured");
    }
    if (lexicon->first_names(*mode).empty() ||
        lexicon->last_names(*mode).empty()) {
      throw config_error("name pool for mode '" + it->second + "' is empty");
    }
    const NameLexicon lex = *lexicon;
    const NameMode m = *mode;
    aug.kind = Augmenter::Kind::Stochastic;
    aug.fn = [lex, m](const Corpus& c, RngStream& rng) {
      return map_documents(c, rng, [&](const Document& d, RngStream& r) {
        return name_augment(d, lex, m, r);
      });
    };
  } else if (name == "abbreviate") {
    aug.kind = Augmenter::Kind::Deterministic;
    aug.fn = [](const Corpus& c, RngStream& rng) {
      return map_documents(c, rng, [](const Document& d, RngStream&) {
        return abbreviate_names(d);
      });
    };
  } else if (name == "group") {
    const auto it = params.find("n");
    int n = 0;
    if (it != params.end()) {
      try {
        std::size_t consumed = 0;
        n = std::stoi(it->second, &consumed);
        if (consumed != it->second.size()) n = 0;
      } catch (const std::exception&) {
        n = 0;
      }
    }
    if (n < 1) {
      throw config_error("group: 'n' must be a positive integer");
    }
    aug.kind = Augmenter::Kind::Deterministic;
    aug.fn = [n](const Corpus& c, RngStream&) { return group_sentences(c, n); };
  } else {
    throw config_error("unknown augmenter '" + name + "'");
  }
  return aug;
}

/// Left-to-right composition. Stochastic iff any stage is; each stage
/// draws from its own forked stream.
inline Augmenter compose(const std::vector<Augmenter>& stages) {
  if (stages.empty()) {
    throw config_error("compose: stage list is empty");
  }
  Augmenter aug;
  aug.kind = Augmenter::Kind::Deterministic;
  std::string names;
  std::string ids;
  for (const Augmenter& stage : stages) {
    if (stage.kind == Augmenter::Kind::Stochastic) {
      aug.kind = Augmenter::Kind::Stochastic;
    }
    if (!names.empty()) {
      names += "+";
      ids += "+";
    }
    names += stage.name;
    ids += stage.id();
  }
  aug.name = "compose(" + names + ")";
  aug.params["stages"] = ids;
  aug.fn = [stages](const Corpus& corpus, RngStream& rng) {
    Corpus current = corpus;
    for (std::size_t i = 0; i < stages.size(); ++i) {
      RngStream stage_rng = rng.child(i);
      current = stages[i].fn(current, stage_rng);
    }
    return current;
  };
  return aug;
}

/// Runs k seeded repetitions. Repetition i draws its seed as a pure
/// function of (base_seed, augmenter name, i), so the full list is
/// reproducible byte-for-byte. Deterministic augmenters yield k
/// identical corpora.
inline std::vector<AugmentedCorpus> run_repetitions(const Augmenter& augmenter,
                                                    const Corpus& corpus,
                                                    int k,
                                                    std::uint64_t base_seed) {
  if (k < 1) throw config_error("run_repetitions: k must be >= 1");
  std::vector<AugmentedCorpus> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int rep = 0; rep < k; ++rep) {
    const std::uint64_t seed =
        derive_seed(base_seed, augmenter.name, static_cast<std::uint64_t>(rep));
    AugmentedCorpus ac;
    ac.corpus = augmenter.apply(corpus, seed);
    ac.augmenter_id = augmenter.id();
    ac.augmenter_name = augmenter.name;
    ac.kind = augmenter.kind;
    ac.seed = seed;
    ac.rep = rep;
    out.push_back(std::move(ac));
  }
  return out;
}

}  // namespace augbench

#endif  // AUGBENCH_AUGMENT_HPP_
