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

#ifndef AUGBENCH_PIPELINE_HPP_
#define AUGBENCH_PIPELINE_HPP_

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "augbench/conllu.hpp"
#include "augbench/corpus.hpp"
#include "augbench/predictions.hpp"
#include "augbench/resources.hpp"
#include "augbench/subprocess.hpp"
#include "augbench/text.hpp"

// Uniform interface to the systems under evaluation. External pipelines
// are one-shot processes speaking CoNLL-U over standard streams:
//
//   - The adapter writes the corpus to the process's stdin and closes it.
//     With tokenization=given the gold forms (and SpaceAfter) are sent
//     and all labels are blanked to "_"; with tokenization=own only
//     "# newdoc id" and "# text" lines are sent and the process
//     tokenizes for itself.
//   - The process writes completed CoNLL-U to stdout (UTF-8, LF, blank
//     line between sentences, the same "# newdoc id" boundaries, NER in
//     MISC as name=<tag>) and exits 0.
//
// One invocation per (pipeline, corpus); a 1-document warmup invocation
// precedes the timed one so cold-start cost stays out of wall time.

namespace augbench {

class pipeline_error : public std::runtime_error {
 public:
  explicit pipeline_error(const std::string& what)
      : std::runtime_error(what) {}
};

struct PipelineSpec {
  enum class Tokenization { Own, Given };

  std::string name;
  std::vector<std::string> command;  // empty for builtins
  std::string builtin;               // "", "oracle" or "baseline"
  std::set<Task> tasks;
  Tokenization tokenization = Tokenization::Given;
  double timeout = 300.0;  // seconds per corpus invocation
  std::string hardware;    // free-form note for reports
  // Send gold labels instead of blanks. Only meaningful for adapter
  // conformance testing (an echoing process then reproduces the oracle).
  bool include_gold_labels = false;
  // form -> most frequent POS, for the baseline builtin.
  std::map<std::string, std::string> pos_stats;
};

// ---------------------------------------------------------------------------
// Wire protocol

namespace pipeline_detail {

inline std::string blanked_payload(const Corpus& corpus) {
  std::string out;
  for (const Document& doc : corpus.documents) {
    out += "# newdoc id = " + doc.doc_id + "\n";
    for (const Sentence& sent : doc.sentences) {
      out += "# sent_id = " + sent.sent_id + "\n";
      for (const Token& tok : sent.tokens) {
        out += std::to_string(tok.index) + "\t" + tok.form +
               "\t_\t_\t_\t_\t_\t_\t_\t" +
               (tok.space_after ? "_" : "SpaceAfter=No") + "\n";
      }
      out += "\n";
    }
  }
  return out;
}

inline std::string raw_text_payload(const Corpus& corpus) {
  std::string out;
  for (const Document& doc : corpus.documents) {
    out += "# newdoc id = " + doc.doc_id + "\n";
    out += "# text = " + doc.text + "\n";
    out += "\n";
  }
  return out;
}

}  // namespace pipeline_detail

/// The exact bytes the adapter sends for a corpus.
inline std::string wire_payload(const Corpus& corpus,
                                const PipelineSpec& spec) {
  if (spec.include_gold_labels) return serialize_conllu(corpus);
  return spec.tokenization == PipelineSpec::Tokenization::Given
             ? pipeline_detail::blanked_payload(corpus)
             : pipeline_detail::raw_text_payload(corpus);
}

namespace pipeline_detail {

struct RawDocument {
  std::string doc_id;
  std::vector<PredSentence> sentences;
};

/// Lenient CoNLL-U reader for pipeline output. Labels may be "_";
/// structural breakage is a protocol violation.
inline std::vector<RawDocument> parse_response(const std::string& output,
                                               const std::string& pipeline) {
  std::vector<RawDocument> docs;
  PredSentence pending;
  const auto violation = [&pipeline](int line, const std::string& message) {
    throw pipeline_error("pipeline '" + pipeline +
                         "': protocol violation at output line " +
                         std::to_string(line) + ": " + message);
  };
  const auto flush_sentence = [&docs, &pending, &violation](int line) {
    if (pending.tokens.empty()) return;
    if (docs.empty()) {
      violation(line, "token lines before any '# newdoc id'");
    }
    docs.back().sentences.push_back(std::move(pending));
    pending = PredSentence{};
  };

  int line_no = 0;
  std::size_t start = 0;
  while (start <= output.size()) {
    const std::size_t nl = output.find('\n', start);
    std::string line = nl == std::string::npos
                           ? output.substr(start)
                           : output.substr(start, nl - start);
    start = nl == std::string::npos ? output.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush_sentence(line_no);
      continue;
    }
    if (line[0] == '#') {
      if (auto id = conllu_detail::comment_value(line, "newdoc id")) {
        flush_sentence(line_no);
        docs.push_back(RawDocument{*id, {}});
      }
      continue;  // other comments are ignored
    }
    conllu_detail::TokenLine cols;
    try {
      cols = conllu_detail::split_columns(line, line_no);
    } catch (const parse_error& e) {
      violation(line_no, e.what());
    }
    const auto id = conllu_detail::parse_int(cols.id);
    if (!id || *id != static_cast<int>(pending.tokens.size()) + 1) {
      violation(line_no, "token ids must be sequential from 1, got '" +
                             cols.id + "'");
    }
    if (cols.form.empty() || cols.form == "_") {
      violation(line_no, "empty token form");
    }
    PredToken tok;
    tok.form = cols.form;
    if (cols.upos != "_") tok.pos = cols.upos;
    if (cols.head != "_") {
      const auto head = conllu_detail::parse_int(cols.head);
      if (!head) {
        violation(line_no, "head '" + cols.head + "' is not an integer");
      }
      tok.head = *head;
    }
    if (cols.deprel != "_") tok.deprel = cols.deprel;
    if (cols.misc != "_" && !cols.misc.empty()) {
      for (const std::string& attr : strings::split(cols.misc, '|')) {
        if (strings::starts_with(attr, "name=")) {
          const auto tag = BioTag::parse(std::string_view(attr).substr(5));
          if (!tag) {
            violation(line_no, "invalid NER tag '" + attr + "'");
          }
          tok.ner = *tag;
        }
      }
    }
    pending.tokens.push_back(std::move(tok));
  }
  flush_sentence(line_no);
  return docs;
}

inline void keep_declared_tasks(PredToken& tok, const std::set<Task>& tasks) {
  if (tasks.count(Task::Pos) == 0) tok.pos.clear();
  if (tasks.count(Task::Dep) == 0) {
    tok.head.reset();
    tok.deprel.clear();
  }
  if (tasks.count(Task::Ner) == 0) tok.ner = BioTag::outside();
}

}  // namespace pipeline_detail

/// Validates and converts a pipeline's raw stdout into a PredictionSet
/// for the given corpus. Spans are taken from gold for tokenization=given
/// (after checking the forms match exactly) and recovered by in-order
/// string search over the document text for tokenization=own.
inline PredictionSet parse_wire_response(const std::string& output,
                                         const Corpus& corpus,
                                         const PipelineSpec& spec) {
  using pipeline_detail::RawDocument;
  const std::vector<RawDocument> raw =
      pipeline_detail::parse_response(output, spec.name);
  const auto violation = [&spec](const std::string& doc,
                                 const std::string& message) {
    throw pipeline_error("pipeline '" + spec.name + "': document '" + doc +
                         "': " + message);
  };
  if (raw.size() != corpus.documents.size()) {
    throw pipeline_error("pipeline '" + spec.name + "': expected " +
                         std::to_string(corpus.documents.size()) +
                         " documents in output, got " +
                         std::to_string(raw.size()));
  }

  PredictionSet out;
  out.tasks = spec.tasks;
  for (std::size_t d = 0; d < raw.size(); ++d) {
    const Document& gold = corpus.documents[d];
    const RawDocument& resp = raw[d];
    if (resp.doc_id != gold.doc_id) {
      violation(gold.doc_id, "output document order mismatch (got '" +
                                 resp.doc_id + "')");
    }
    PredDocument pred;
    pred.doc_id = resp.doc_id;
    pred.sentences = resp.sentences;

    if (spec.tokenization == PipelineSpec::Tokenization::Given) {
      // The pipeline must return exactly the gold tokenization.
      if (pred.sentences.size() != gold.sentences.size()) {
        violation(gold.doc_id, "sentence count differs from the input");
      }
      for (std::size_t s = 0; s < pred.sentences.size(); ++s) {
        auto& ptoks = pred.sentences[s].tokens;
        const auto& gtoks = gold.sentences[s].tokens;
        if (ptoks.size() != gtoks.size()) {
          violation(gold.doc_id, "token count differs from the input in '" +
                                     gold.sentences[s].sent_id + "'");
        }
        for (std::size_t t = 0; t < ptoks.size(); ++t) {
          if (ptoks[t].form != gtoks[t].form) {
            violation(gold.doc_id,
                      "form '" + ptoks[t].form + "' differs from input '" +
                          gtoks[t].form + "'");
          }
          ptoks[t].span = gtoks[t].span;
        }
      }
    } else {
      // Own tokenization: anchor each form in the document text, in
      // order. Tokens the pipeline dropped simply stay uncovered.
      const std::u32string text = utf8::decode(gold.text);
      std::size_t cursor = 0;
      for (PredSentence& sent : pred.sentences) {
        for (PredToken& tok : sent.tokens) {
          const std::u32string form = utf8::decode(tok.form);
          const std::size_t at = text.find(form, cursor);
          if (at == std::u32string::npos) {
            violation(gold.doc_id, "token '" + tok.form +
                                       "' does not occur in the document "
                                       "text after offset " +
                                       std::to_string(cursor));
          }
          tok.span = CharSpan{at, at + form.size()};
          cursor = at + form.size();
        }
      }
    }

    for (PredSentence& sent : pred.sentences) {
      const int n = static_cast<int>(sent.tokens.size());
      for (int t = 0; t < n; ++t) {
        PredToken& tok = sent.tokens[static_cast<std::size_t>(t)];
        if (tok.head.has_value() && (*tok.head < 0 || *tok.head > n)) {
          violation(gold.doc_id,
                    "head " + std::to_string(*tok.head) + " outside [0, " +
                        std::to_string(n) + "]");
        }
        if (tok.head.has_value() && *tok.head == t + 1) {
          violation(gold.doc_id, "token is its own head");
        }
        pipeline_detail::keep_declared_tasks(tok, spec.tasks);
      }
    }
    out.documents.push_back(std::move(pred));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Built-in pipelines

/// Returns the corpus's own annotations. Downstream metrics score it at
/// exactly 1.0, which makes it the test harness for augmentation and
/// protocol correctness.
inline PredictionSet builtin_gold_oracle(const Corpus& corpus) {
  const auto start = std::chrono::steady_clock::now();
  PredictionSet out;
  out.tasks = {Task::Pos, Task::Ner, Task::Dep};
  for (const Document& doc : corpus.documents) {
    PredDocument pred;
    pred.doc_id = doc.doc_id;
    for (const Sentence& sent : doc.sentences) {
      PredSentence ps;
      ps.tokens.reserve(sent.tokens.size());
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
      pred.sentences.push_back(std::move(ps));
    }
    out.documents.push_back(std::move(pred));
  }
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

/// Deterministic desk-scale comparator. POS: the most frequent tag for
/// known forms, else PROPN for mid-sentence capitalized tokens, else
/// NOUN. NER: every maximal run of mid-sentence capitalized tokens is a
/// MISC entity. Dependencies: token 1 is the root, everything else
/// attaches to its left neighbor as "dep".
inline PredictionSet builtin_baseline(
    const Corpus& corpus, const std::map<std::string, std::string>& pos_stats) {
  const auto start = std::chrono::steady_clock::now();
  PredictionSet out;
  out.tasks = {Task::Pos, Task::Ner, Task::Dep};
  for (const Document& doc : corpus.documents) {
    PredDocument pred;
    pred.doc_id = doc.doc_id;
    for (const Sentence& sent : doc.sentences) {
      PredSentence ps;
      bool in_entity = false;
      for (const Token& tok : sent.tokens) {
        PredToken pt;
        pt.form = tok.form;
        pt.span = tok.span;
        const bool mid_sentence_capitalized =
            tok.index > 1 && unicode::starts_uppercase(tok.form);
        const auto known = pos_stats.find(tok.form);
        if (known != pos_stats.end()) {
          pt.pos = known->second;
        } else {
          pt.pos = mid_sentence_capitalized ? "PROPN" : "NOUN";
        }
        if (mid_sentence_capitalized) {
          pt.ner = in_entity ? BioTag::inside(EntityType::MISC)
                             : BioTag::begin(EntityType::MISC);
          in_entity = true;
        } else {
          pt.ner = BioTag::outside();
          in_entity = false;
        }
        if (tok.index == 1) {
          pt.head = 0;
          pt.deprel = "root";
        } else {
          pt.head = tok.index - 1;
          pt.deprel = "dep";
        }
        ps.tokens.push_back(std::move(pt));
      }
      pred.sentences.push_back(std::move(ps));
    }
    out.documents.push_back(std::move(pred));
  }
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

// ---------------------------------------------------------------------------
// The adapter

/// A 1-document corpus used for the untimed warmup invocation.
inline Corpus warmup_corpus(const Corpus& corpus) {
  Corpus out;
  out.explicit_outside_tags = corpus.explicit_outside_tags;
  if (!corpus.documents.empty()) out.documents.push_back(corpus.documents[0]);
  return out;
}

/// Runs one pipeline over one corpus and returns aligned-ready
/// predictions. External process failures, malformed output, and
/// timeouts raise pipeline_error; partial results are never returned.
inline PredictionSet annotate(const PipelineSpec& spec, const Corpus& corpus) {
  if (spec.tasks.empty()) {
    throw config_error("pipeline '" + spec.name + "': no tasks declared");
  }
  if (spec.builtin == "oracle") {
    PredictionSet out = builtin_gold_oracle(corpus);
    out.tasks = spec.tasks;
    return out;
  }
  if (spec.builtin == "baseline") {
    PredictionSet out = builtin_baseline(corpus, spec.pos_stats);
    out.tasks = spec.tasks;
    return out;
  }
  if (!spec.builtin.empty()) {
    throw config_error("pipeline '" + spec.name + "': unknown builtin '" +
                       spec.builtin + "'");
  }
  if (spec.command.empty()) {
    throw config_error("pipeline '" + spec.name + "': no command configured");
  }
  if (corpus.documents.empty()) {
    PredictionSet out;
    out.tasks = spec.tasks;
    return out;
  }

  // Untimed warmup so process cold start stays out of the measurement.
  const Corpus warmup = warmup_corpus(corpus);
  try {
    const ProcessResult warm =
        run_process(spec.command, wire_payload(warmup, spec), spec.timeout);
    if (warm.exit_code != 0) {
      throw pipeline_error("pipeline '" + spec.name +
                           "': warmup invocation exited with code " +
                           std::to_string(warm.exit_code));
    }
  } catch (const process_error& e) {
    throw pipeline_error("pipeline '" + spec.name + "': " + e.what());
  }

  ProcessResult result;
  try {
    result = run_process(spec.command, wire_payload(corpus, spec),
                         spec.timeout);
  } catch (const process_error& e) {
    throw pipeline_error("pipeline '" + spec.name + "': " + e.what());
  }
  if (result.exit_code != 0) {
    throw pipeline_error("pipeline '" + spec.name + "': exited with code " +
                         std::to_string(result.exit_code));
  }
  PredictionSet out = parse_wire_response(result.output, corpus, spec);
  out.wall_time = result.elapsed_seconds;
  return out;
}

// ---------------------------------------------------------------------------
// Registry

/// Loads "form<TAB>pos" rows for the baseline builtin.
inline std::map<std::string, std::string> load_pos_stats(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open pos stats: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = strings::split(line, '\t');
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
      throw config_error(path + " row " + std::to_string(line_no) +
                         ": expected form<TAB>pos");
    }
    out[cols[0]] = cols[1];
  }
  return out;
}

/// One pipeline entry from registry JSON. Relative resource paths are
/// resolved against base_dir.
inline PipelineSpec pipeline_spec_from_json(const nlohmann::json& j,
                                            const std::string& base_dir = "") {
  PipelineSpec spec;
  if (!j.contains("name") || !j["name"].is_string()) {
    throw config_error("pipeline entry: missing 'name'");
  }
  spec.name = j["name"].get<std::string>();
  if (j.contains("command")) {
    for (const auto& arg : j["command"]) {
      spec.command.push_back(arg.get<std::string>());
    }
  }
  if (j.contains("builtin")) spec.builtin = j["builtin"].get<std::string>();
  if (spec.builtin.empty() && spec.command.empty()) {
    throw config_error("pipeline '" + spec.name +
                       "': needs either 'command' or 'builtin'");
  }
  if (!j.contains("tasks") || j["tasks"].empty()) {
    throw config_error("pipeline '" + spec.name + "': 'tasks' is required");
  }
  for (const auto& t : j["tasks"]) {
    const auto task = task_from(t.get<std::string>());
    if (!task) {
      throw config_error("pipeline '" + spec.name + "': unknown task '" +
                         t.get<std::string>() + "'");
    }
    spec.tasks.insert(*task);
  }
  if (j.contains("tokenization")) {
    const std::string mode = j["tokenization"].get<std::string>();
    if (mode == "own") {
      spec.tokenization = PipelineSpec::Tokenization::Own;
    } else if (mode == "given") {
      spec.tokenization = PipelineSpec::Tokenization::Given;
    } else {
      throw config_error("pipeline '" + spec.name +
                         "': tokenization must be 'own' or 'given'");
    }
  }
  if (j.contains("timeout")) spec.timeout = j["timeout"].get<double>();
  if (spec.timeout <= 0.0) {
    throw config_error("pipeline '" + spec.name + "': timeout must be > 0");
  }
  if (j.contains("hardware")) spec.hardware = j["hardware"].get<std::string>();
  if (j.contains("include_gold_labels")) {
    spec.include_gold_labels = j["include_gold_labels"].get<bool>();
  }
  if (j.contains("pos_stats")) {
    std::filesystem::path p = j["pos_stats"].get<std::string>();
    if (p.is_relative() && !base_dir.empty()) {
      p = std::filesystem::path(base_dir) / p;
    }
    spec.pos_stats = load_pos_stats(p.string());
  }
  return spec;
}

/// Loads the pipeline registry: {"pipelines": [ ... ]}.
inline std::vector<PipelineSpec> load_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open registry: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("registry " + path + ": " + e.what());
  }
  if (!j.contains("pipelines") || !j["pipelines"].is_array()) {
    throw config_error("registry " + path + ": missing 'pipelines' array");
  }
  std::vector<PipelineSpec> out;
  std::set<std::string> names;
  const std::string base_dir =
      std::filesystem::path(path).parent_path().string();
  for (const auto& entry : j["pipelines"]) {
    out.push_back(pipeline_spec_from_json(entry, base_dir));
    if (!names.insert(out.back().name).second) {
      throw config_error("registry " + path + ": duplicate pipeline '" +
                         out.back().name + "'");
    }
  }
  return out;
}

}  // namespace augbench

#endif  // AUGBENCH_PIPELINE_HPP_
