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

#ifndef AUGBENCH_RUNNER_HPP_
#define AUGBENCH_RUNNER_HPP_

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "augbench/augment.hpp"
#include "augbench/conllu.hpp"
#include "augbench/corpus.hpp"
#include "augbench/metrics.hpp"
#include "augbench/pipeline.hpp"
#include "augbench/report.hpp"
#include "augbench/resources.hpp"
#include "augbench/stats.hpp"
#include "augbench/version.hpp"

// End-to-end orchestration behind the CLI: build the condition suite,
// generate seeded augmented corpora, run every pipeline over every
// repetition, persist raw per-document counts, aggregate, test
// significance, and render reports. Identical run configurations produce
// byte-identical outputs except for wall-time fields.

namespace augbench {

// ---------------------------------------------------------------------------
// Configuration

struct AugmenterConfig {
  std::string name;
  std::map<std::string, std::string> params;
  std::vector<AugmenterConfig> stages;  // for "compose"
  std::string label;                    // defaults to the canonical id
  // Condition to pair against for significance; "" = default rule,
  // "none" disables the pairing.
  std::string compare_to;
};

struct RunConfig {
  std::string corpus_path;
  std::string registry_path;
  std::string output_dir = "out";
  std::string lexicon_path;
  std::string layout_path;  // empty = built-in Danish QWERTY
  std::uint64_t base_seed = 42;
  int repetitions = 20;
  double alpha = 0.05;
  int bootstrap_iterations = 2000;
  bool exclude_punct = false;
  std::string ner_metric = "micro_f1_no_misc";  // micro_f1 | macro_f1 | ...
  int workers = 0;  // 0 = AUGBENCH_WORKERS env var, else min(4, hardware)
  std::vector<AugmenterConfig> augmenters;  // empty = the default suite
};

/// The default condition suite: keystroke at 2/5/15%, æøå
/// transliteration, lowercasing, 5% whitespace deletion, the four name
/// substitution modes, first-name abbreviation, and input-length
/// grouping at 5 and 10 sentences.
inline std::vector<AugmenterConfig> default_suite() {
  std::vector<AugmenterConfig> out;
  const auto add = [&out](std::string name,
                          std::map<std::string, std::string> params,
                          std::string compare_to = "") {
    AugmenterConfig cfg;
    cfg.name = std::move(name);
    cfg.params = std::move(params);
    cfg.compare_to = std::move(compare_to);
    out.push_back(std::move(cfg));
  };
  add("keystroke", {{"rate", "0.02"}});
  add("keystroke", {{"rate", "0.05"}});
  add("keystroke", {{"rate", "0.15"}});
  add("aeoeaa", {});
  add("lowercase", {});
  add("spacing", {{"rate", "0.05"}});
  add("names", {{"mode", "danish"}});
  add("names", {{"mode", "muslim"}}, "names[mode=danish]");
  add("names", {{"mode", "female"}}, "names[mode=danish]");
  add("names", {{"mode", "male"}}, "names[mode=danish]");
  add("abbreviate", {});
  add("group", {{"n", "5"}});
  add("group", {{"n", "10"}});
  return out;
}

namespace runner_detail {

inline std::string json_value_to_param(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline AugmenterConfig augmenter_config_from_json(const nlohmann::json& j) {
  AugmenterConfig cfg;
  if (!j.contains("name") || !j["name"].is_string()) {
    throw config_error("augmenter entry: missing 'name'");
  }
  cfg.name = j["name"].get<std::string>();
  if (j.contains("params")) {
    for (const auto& [key, value] : j["params"].items()) {
      cfg.params[key] = json_value_to_param(value);
    }
  }
  if (j.contains("stages")) {
    for (const auto& stage : j["stages"]) {
      cfg.stages.push_back(augmenter_config_from_json(stage));
    }
  }
  if (j.contains("label")) cfg.label = j["label"].get<std::string>();
  if (j.contains("compare_to")) {
    cfg.compare_to = j["compare_to"].get<std::string>();
  }
  return cfg;
}

inline std::string resolve_path(const std::string& path,
                                const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace runner_detail

/// Loads a RunConfig from JSON; relative paths resolve against the
/// config file's directory.
inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config " + path + ": " + e.what());
  }
  const std::string base_dir =
      std::filesystem::path(path).parent_path().string();
  RunConfig cfg;
  const auto path_of = [&](const char* key) {
    return j.contains(key)
               ? runner_detail::resolve_path(j[key].get<std::string>(),
                                             base_dir)
               : std::string{};
  };
  cfg.corpus_path = path_of("corpus");
  cfg.registry_path = path_of("registry");
  if (j.contains("output_dir")) {
    cfg.output_dir = runner_detail::resolve_path(
        j["output_dir"].get<std::string>(), base_dir);
  }
  if (j.contains("resources")) {
    const auto& r = j["resources"];
    if (r.contains("name_lexicon")) {
      cfg.lexicon_path = runner_detail::resolve_path(
          r["name_lexicon"].get<std::string>(), base_dir);
    }
    if (r.contains("keyboard_layout")) {
      cfg.layout_path = runner_detail::resolve_path(
          r["keyboard_layout"].get<std::string>(), base_dir);
    }
  }
  if (j.contains("base_seed")) cfg.base_seed = j["base_seed"].get<std::uint64_t>();
  if (j.contains("repetitions")) cfg.repetitions = j["repetitions"].get<int>();
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
  if (j.contains("bootstrap_iterations")) {
    cfg.bootstrap_iterations = j["bootstrap_iterations"].get<int>();
  }
  if (j.contains("exclude_punct")) {
    cfg.exclude_punct = j["exclude_punct"].get<bool>();
  }
  if (j.contains("ner_metric")) {
    cfg.ner_metric = j["ner_metric"].get<std::string>();
  }
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  if (j.contains("augmenters")) {
    for (const auto& entry : j["augmenters"]) {
      cfg.augmenters.push_back(
          runner_detail::augmenter_config_from_json(entry));
    }
  }
  if (cfg.repetitions < 1) throw config_error("repetitions must be >= 1");
  if (cfg.ner_metric != "micro_f1_no_misc" && cfg.ner_metric != "micro_f1" &&
      cfg.ner_metric != "macro_f1" && cfg.ner_metric != "macro_f1_no_misc") {
    throw config_error("unknown ner_metric '" + cfg.ner_metric + "'");
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Conditions

struct Condition {
  std::string label;
  Augmenter augmenter;
  int reps = 1;
  std::string compare_to;  // "" = no pairing
};

namespace runner_detail {

struct Resources {
  std::optional<NameLexicon> lexicon;
  KeyboardLayout layout = danish_qwerty();
};

inline Resources load_resources(const RunConfig& cfg) {
  Resources res;
  if (!cfg.lexicon_path.empty()) {
    res.lexicon = load_name_lexicon(cfg.lexicon_path);
  }
  if (!cfg.layout_path.empty()) {
    res.layout = load_keyboard_layout(cfg.layout_path);
  }
  return res;
}

inline Augmenter build_augmenter(const AugmenterConfig& cfg,
                                 const Resources& res) {
  if (cfg.name == "compose") {
    if (cfg.stages.empty()) {
      throw config_error("compose: needs a non-empty 'stages' list");
    }
    std::vector<Augmenter> stages;
    for (const AugmenterConfig& stage : cfg.stages) {
      stages.push_back(build_augmenter(stage, res));
    }
    return compose(stages);
  }
  const NameLexicon* lexicon =
      res.lexicon.has_value() ? &*res.lexicon : nullptr;
  if (cfg.name == "names" && lexicon == nullptr) {
    throw config_error(
        "names augmenter requires resources.name_lexicon in the config");
  }
  return make_augmenter(cfg.name, cfg.params, &res.layout, lexicon);
}

}  // namespace runner_detail

/// Builds the ordered condition list: the un-augmented baseline first,
/// then one condition per configured augmenter. Stochastic conditions
/// run `repetitions` times, deterministic ones once. Default pairing:
/// every condition against "baseline", except non-danish name modes,
/// which pair against the danish-names condition when present.
inline std::vector<Condition> build_conditions(const RunConfig& cfg) {
  const runner_detail::Resources res = runner_detail::load_resources(cfg);
  const std::vector<AugmenterConfig> suite =
      cfg.augmenters.empty() ? default_suite() : cfg.augmenters;

  std::vector<Condition> out;
  Condition baseline;
  baseline.label = "baseline";
  baseline.augmenter = make_augmenter("identity", {});
  baseline.reps = 1;
  out.push_back(std::move(baseline));

  std::set<std::string> labels = {"baseline"};
  for (const AugmenterConfig& acfg : suite) {
    Condition cond;
    cond.augmenter = runner_detail::build_augmenter(acfg, res);
    cond.label = acfg.label.empty() ? cond.augmenter.id() : acfg.label;
    if (cond.label.find('/') != std::string::npos) {
      throw config_error("condition label '" + cond.label +
                         "' must not contain '/'");
    }
    if (!labels.insert(cond.label).second) {
      throw config_error("duplicate condition label '" + cond.label + "'");
    }
    cond.reps = cond.augmenter.kind == Augmenter::Kind::Stochastic
                    ? cfg.repetitions
                    : 1;
    cond.compare_to = acfg.compare_to;
    out.push_back(std::move(cond));
  }

  // Default pairing resolution.
  std::string danish_label;
  for (const Condition& cond : out) {
    if (cond.augmenter.name == "names") {
      const auto it = cond.augmenter.params.find("mode");
      if (it != cond.augmenter.params.end() && it->second == "danish") {
        danish_label = cond.label;
      }
    }
  }
  for (Condition& cond : out) {
    if (cond.label == "baseline") continue;
    if (cond.compare_to == "none") {
      cond.compare_to.clear();
      continue;
    }
    if (!cond.compare_to.empty()) continue;
    const auto mode = cond.augmenter.params.find("mode");
    if (cond.augmenter.name == "names" && !danish_label.empty() &&
        mode != cond.augmenter.params.end() && mode->second != "danish") {
      cond.compare_to = danish_label;
    } else {
      cond.compare_to = "baseline";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Atomic file output

/// Writes content to path via a temp file and rename, so interrupted
/// runs never leave partially-written files.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      throw std::runtime_error("short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Raw per-repetition scores

struct RawScore {
  std::string pipeline;
  std::string condition;
  int rep = 0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;
  std::set<Task> tasks;
  std::vector<DocCounts> documents;
};

namespace runner_detail {

inline nlohmann::ordered_json doc_counts_to_json(const DocCounts& doc) {
  nlohmann::ordered_json j;
  j["doc_id"] = doc.doc_id;
  j["pos"] = {{"correct", doc.pos.correct}, {"total", doc.pos.total}};
  nlohmann::ordered_json ner;
  for (EntityType t : kEntityTypes) {
    const NerTypeCounts& c = doc.ner.by_type.at(t);
    ner[to_string(t)] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
  }
  j["ner"] = ner;
  j["dep"] = {{"total", doc.dep.total},
              {"uas_correct", doc.dep.uas_correct},
              {"las_correct", doc.dep.las_correct},
              {"total_nopunct", doc.dep.total_nopunct},
              {"uas_correct_nopunct", doc.dep.uas_correct_nopunct},
              {"las_correct_nopunct", doc.dep.las_correct_nopunct}};
  j["bio_repairs"] = doc.bio_repairs;
  return j;
}

inline DocCounts doc_counts_from_json(const nlohmann::json& j) {
  DocCounts doc;
  doc.doc_id = j.at("doc_id").get<std::string>();
  doc.pos.correct = j.at("pos").at("correct").get<long>();
  doc.pos.total = j.at("pos").at("total").get<long>();
  for (EntityType t : kEntityTypes) {
    const auto& c = j.at("ner").at(to_string(t));
    doc.ner.by_type[t] = NerTypeCounts{c.at("tp").get<long>(),
                                       c.at("fp").get<long>(),
                                       c.at("fn").get<long>()};
  }
  const auto& dep = j.at("dep");
  doc.dep.total = dep.at("total").get<long>();
  doc.dep.uas_correct = dep.at("uas_correct").get<long>();
  doc.dep.las_correct = dep.at("las_correct").get<long>();
  doc.dep.total_nopunct = dep.at("total_nopunct").get<long>();
  doc.dep.uas_correct_nopunct = dep.at("uas_correct_nopunct").get<long>();
  doc.dep.las_correct_nopunct = dep.at("las_correct_nopunct").get<long>();
  doc.bio_repairs = j.at("bio_repairs").get<int>();
  return doc;
}

inline std::string raw_score_to_json(const RawScore& raw) {
  nlohmann::ordered_json j;
  j["pipeline"] = raw.pipeline;
  j["condition"] = raw.condition;
  j["rep"] = raw.rep;
  j["seed"] = raw.seed;
  j["wall_time"] = raw.wall_time;
  nlohmann::ordered_json tasks = nlohmann::ordered_json::array();
  for (Task t : raw.tasks) tasks.push_back(to_string(t));
  j["tasks"] = tasks;
  j["documents"] = nlohmann::ordered_json::array();
  for (const DocCounts& doc : raw.documents) {
    j["documents"].push_back(doc_counts_to_json(doc));
  }
  return j.dump(2) + "\n";
}

inline RawScore raw_score_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RawScore raw;
  raw.pipeline = j.at("pipeline").get<std::string>();
  raw.condition = j.at("condition").get<std::string>();
  raw.rep = j.at("rep").get<int>();
  raw.seed = j.at("seed").get<std::uint64_t>();
  raw.wall_time = j.at("wall_time").get<double>();
  for (const auto& t : j.at("tasks")) {
    raw.tasks.insert(*task_from(t.get<std::string>()));
  }
  for (const auto& doc : j.at("documents")) {
    raw.documents.push_back(doc_counts_from_json(doc));
  }
  return raw;
}

inline std::string rep_file_name(int rep) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "rep_%03d.json", rep);
  return buffer;
}

}  // namespace runner_detail

// ---------------------------------------------------------------------------
// Headline metrics

namespace runner_detail {

inline double corpus_headline(const TaskScores& scores, Task task,
                              const RunConfig& cfg) {
  switch (task) {
    case Task::Pos:
      return scores.pos_accuracy.value_or(0.0);
    case Task::Ner:
      if (cfg.ner_metric == "micro_f1") return scores.ner_micro->f1;
      if (cfg.ner_metric == "macro_f1") return *scores.ner_macro_f1;
      if (cfg.ner_metric == "macro_f1_no_misc") {
        return *scores.ner_macro_f1_no_misc;
      }
      return scores.ner_micro_no_misc->f1;
    case Task::Dep:
      return scores.las.value_or(0.0);
  }
  return 0.0;
}

inline double doc_headline(const DocCounts& doc, Task task,
                           const RunConfig& cfg) {
  switch (task) {
    case Task::Pos:
      return doc_pos_accuracy(doc);
    case Task::Ner:
      if (cfg.ner_metric == "micro_f1") return doc_ner_f1(doc, false);
      if (cfg.ner_metric == "macro_f1") return doc_ner_macro_f1(doc, false);
      if (cfg.ner_metric == "macro_f1_no_misc") {
        return doc_ner_macro_f1(doc, true);
      }
      return doc_ner_f1(doc, true);
    case Task::Dep:
      return doc_las(doc, cfg.exclude_punct);
  }
  return 0.0;
}

inline long task_support(const TaskScores& scores, Task task) {
  switch (task) {
    case Task::Pos:
      return scores.pos_total;
    case Task::Ner:
      return scores.ner_gold_entities;
    case Task::Dep:
      return scores.dep_total;
  }
  return 0;
}

}  // namespace runner_detail

// ---------------------------------------------------------------------------
// The manifest

struct ConditionInfo {
  std::string label;
  std::string id;
  std::string name;
  Augmenter::Kind kind = Augmenter::Kind::Deterministic;
  int reps = 1;
  std::vector<std::uint64_t> seeds;
  std::string compare_to;
  std::vector<std::string> doc_ids;
};

struct Manifest {
  std::string version = AUGBENCH_VERSION;
  std::uint64_t base_seed = 42;
  int repetitions = 20;
  double alpha = 0.05;
  int bootstrap_iterations = 2000;
  bool exclude_punct = false;
  std::string ner_metric = "micro_f1_no_misc";
  std::vector<ConditionInfo> conditions;
  std::vector<std::string> pipelines;
  std::map<std::string, std::set<Task>> pipeline_tasks;
  std::map<std::string, std::string> pipeline_hardware;
  std::vector<std::string> errors;
};

namespace runner_detail {

inline std::string manifest_to_json(const Manifest& m) {
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["base_seed"] = m.base_seed;
  j["repetitions"] = m.repetitions;
  j["alpha"] = m.alpha;
  j["bootstrap_iterations"] = m.bootstrap_iterations;
  j["exclude_punct"] = m.exclude_punct;
  j["ner_metric"] = m.ner_metric;
  j["conditions"] = nlohmann::ordered_json::array();
  for (const ConditionInfo& c : m.conditions) {
    nlohmann::ordered_json cj;
    cj["label"] = c.label;
    cj["id"] = c.id;
    cj["name"] = c.name;
    cj["kind"] = c.kind == Augmenter::Kind::Stochastic ? "stochastic"
                                                       : "deterministic";
    cj["reps"] = c.reps;
    cj["seeds"] = c.seeds;
    cj["compare_to"] = c.compare_to;
    cj["doc_ids"] = c.doc_ids;
    j["conditions"].push_back(cj);
  }
  j["pipelines"] = nlohmann::ordered_json::array();
  for (const std::string& p : m.pipelines) {
    nlohmann::ordered_json pj;
    pj["name"] = p;
    nlohmann::ordered_json tasks = nlohmann::ordered_json::array();
    for (Task t : m.pipeline_tasks.at(p)) tasks.push_back(to_string(t));
    pj["tasks"] = tasks;
    pj["hardware"] = m.pipeline_hardware.count(p)
                         ? m.pipeline_hardware.at(p)
                         : "";
    j["pipelines"].push_back(pj);
  }
  j["errors"] = m.errors;
  return j.dump(2) + "\n";
}

inline Manifest manifest_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Manifest m;
  m.version = j.at("version").get<std::string>();
  m.base_seed = j.at("base_seed").get<std::uint64_t>();
  m.repetitions = j.at("repetitions").get<int>();
  m.alpha = j.at("alpha").get<double>();
  m.bootstrap_iterations = j.at("bootstrap_iterations").get<int>();
  m.exclude_punct = j.at("exclude_punct").get<bool>();
  m.ner_metric = j.at("ner_metric").get<std::string>();
  for (const auto& cj : j.at("conditions")) {
    ConditionInfo c;
    c.label = cj.at("label").get<std::string>();
    c.id = cj.at("id").get<std::string>();
    c.name = cj.at("name").get<std::string>();
    c.kind = cj.at("kind").get<std::string>() == "stochastic"
                 ? Augmenter::Kind::Stochastic
                 : Augmenter::Kind::Deterministic;
    c.reps = cj.at("reps").get<int>();
    c.seeds = cj.at("seeds").get<std::vector<std::uint64_t>>();
    c.compare_to = cj.at("compare_to").get<std::string>();
    c.doc_ids = cj.at("doc_ids").get<std::vector<std::string>>();
    m.conditions.push_back(std::move(c));
  }
  for (const auto& pj : j.at("pipelines")) {
    const std::string name = pj.at("name").get<std::string>();
    m.pipelines.push_back(name);
    std::set<Task> tasks;
    for (const auto& t : pj.at("tasks")) {
      tasks.insert(*task_from(t.get<std::string>()));
    }
    m.pipeline_tasks[name] = tasks;
    m.pipeline_hardware[name] = pj.at("hardware").get<std::string>();
  }
  m.errors = j.at("errors").get<std::vector<std::string>>();
  return m;
}

}  // namespace runner_detail

// ---------------------------------------------------------------------------
// Worker pool

namespace runner_detail {

inline int resolve_workers(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("AUGBENCH_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(4u, hw == 0 ? 1u : hw));
}

/// Runs jobs on a bounded pool. Jobs must handle their own errors.
inline void run_parallel(std::vector<std::function<void()>>& jobs,
                         int workers) {
  if (workers <= 1 || jobs.size() <= 1) {
    for (auto& job : jobs) job();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  const int n = std::min<int>(workers, static_cast<int>(jobs.size()));
  threads.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    threads.emplace_back([&jobs, &next] {
      while (true) {
        const std::size_t k = next.fetch_add(1);
        if (k >= jobs.size()) break;
        jobs[k]();
      }
    });
  }
  for (std::thread& t : threads) t.join();
}

}  // namespace runner_detail

// ---------------------------------------------------------------------------
// Report assembly (shared by `evaluate` and `report`)

using RawScoreMap =
    std::map<std::string, std::map<std::string, std::vector<RawScore>>>;

/// Aggregates raw scores into an EvalReport: mean/sd per (pipeline,
/// condition, task), a paired bootstrap against each condition's pairing
/// target, and Bonferroni correction per (pipeline, task) family. A
/// pairing only applies when both conditions scored the same document
/// set; conditions that restructure documents (grouping) carry no
/// significance flag.
inline EvalReport build_report(const Manifest& manifest, const RawScoreMap& raw,
                               const RunConfig& cfg) {
  EvalReport report;
  report.base_seed = manifest.base_seed;
  report.repetitions = manifest.repetitions;
  report.alpha = cfg.alpha;
  report.bootstrap_iterations = cfg.bootstrap_iterations;
  report.ner_metric = cfg.ner_metric;
  report.exclude_punct = cfg.exclude_punct;
  report.pipeline_order = manifest.pipelines;
  for (const ConditionInfo& c : manifest.conditions) {
    report.condition_order.push_back(c.label);
  }
  report.notes =
      "Name-substitution modes pair against the danish-names condition; "
      "everything else pairs against the un-augmented baseline. m = number "
      "of paired conditions within one (pipeline, task) family.";

  std::map<std::string, const ConditionInfo*> cond_by_label;
  for (const ConditionInfo& c : manifest.conditions) {
    cond_by_label[c.label] = &c;
  }
  const auto find_reps =
      [&raw](const std::string& pipeline,
             const std::string& condition) -> const std::vector<RawScore>* {
    const auto pit = raw.find(pipeline);
    if (pit == raw.end()) return nullptr;
    const auto cit = pit->second.find(condition);
    return cit == pit->second.end() ? nullptr : &cit->second;
  };

  for (const std::string& pipeline : manifest.pipelines) {
    const std::set<Task>& tasks = manifest.pipeline_tasks.at(pipeline);
    for (Task task : {Task::Pos, Task::Ner, Task::Dep}) {
      if (tasks.count(task) == 0) continue;

      struct Pending {
        ReportRow row;
        std::optional<double> p;
      };
      std::vector<Pending> pending;

      for (const ConditionInfo& cond : manifest.conditions) {
        Pending entry;
        entry.row.pipeline = pipeline;
        entry.row.condition = cond.label;
        entry.row.task = task;

        const std::vector<RawScore>* reps = find_reps(pipeline, cond.label);
        if (reps == nullptr ||
            static_cast<int>(reps->size()) != cond.reps) {
          pending.push_back(std::move(entry));  // failed row
          continue;
        }

        std::vector<double> values;
        double wall_sum = 0.0;
        values.reserve(reps->size());
        for (const RawScore& r : *reps) {
          const TaskScores scores =
              compute_scores(r.documents, {task}, cfg.exclude_punct);
          values.push_back(runner_detail::corpus_headline(scores, task, cfg));
          wall_sum += r.wall_time;
        }
        const MeanSd ms = aggregate(values);
        entry.row.mean = ms.mean;
        if (cond.kind == Augmenter::Kind::Stochastic) entry.row.sd = ms.sd;
        entry.row.wall_time = wall_sum / static_cast<double>(reps->size());
        entry.row.support = runner_detail::task_support(
            compute_scores(reps->front().documents, {task},
                           cfg.exclude_punct),
            task);

        if (!cond.compare_to.empty()) {
          const auto bit = cond_by_label.find(cond.compare_to);
          const std::vector<RawScore>* base_reps =
              bit == cond_by_label.end()
                  ? nullptr
                  : find_reps(pipeline, cond.compare_to);
          if (bit != cond_by_label.end() && base_reps != nullptr &&
              static_cast<int>(base_reps->size()) == bit->second->reps &&
              bit->second->doc_ids == cond.doc_ids) {
            const auto matrix =
                [&](const std::vector<RawScore>& scores) {
                  std::vector<std::vector<double>> m;
                  m.reserve(scores.size());
                  for (const RawScore& r : scores) {
                    std::vector<double> row;
                    row.reserve(r.documents.size());
                    for (const DocCounts& d : r.documents) {
                      row.push_back(
                          runner_detail::doc_headline(d, task, cfg));
                    }
                    m.push_back(std::move(row));
                  }
                  return m;
                };
            RngStream rng(derive_seed(
                manifest.base_seed,
                "bootstrap/" + pipeline + "/" + to_string(task) + "/" +
                    cond.label,
                0));
            entry.p = paired_bootstrap_test(matrix(*base_reps), matrix(*reps),
                                            cfg.bootstrap_iterations, rng);
          }
        }
        pending.push_back(std::move(entry));
      }

      std::vector<double> family;
      for (const Pending& entry : pending) {
        if (entry.p.has_value()) family.push_back(*entry.p);
      }
      const std::vector<SignificanceResult> corrected =
          bonferroni(family, cfg.alpha);
      std::size_t k = 0;
      for (Pending& entry : pending) {
        if (entry.p.has_value()) {
          entry.row.p_value = corrected[k].p_value;
          entry.row.significant = corrected[k].significant;
          ++k;
        }
        report.rows.push_back(std::move(entry.row));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Subcommand: validate

/// Parses and validates a corpus file, printing one
/// severity/location/rule/message line per finding.
/// Exit status: 0 clean, 1 violations, 2 unreadable input.
inline int run_validate(const std::string& corpus_path, std::ostream& out) {
  std::ifstream in(corpus_path);
  if (!in) {
    out << "error\t" << corpus_path << "\tio\tcannot open file\n";
    return 2;
  }
  std::vector<Violation> warnings;
  try {
    const Corpus corpus = parse_conllu(in, &warnings);
    for (const Violation& w : warnings) out << w.str() << "\n";
    const std::vector<Violation> found = validate(corpus);
    for (const Violation& v : found) out << v.str() << "\n";
    for (const Violation& v : found) {
      if (v.severity == Violation::Severity::Error) return 1;
    }
    return 0;
  } catch (const parse_error& e) {
    out << "error\tline " << e.line() << "\t" << e.rule() << "\t" << e.what()
        << "\n";
    return 1;
  } catch (const encoding_error& e) {
    out << "error\t" << corpus_path << "\tencoding\t" << e.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------------------------
// Subcommand: augment

/// Writes one CoNLL-U file per (condition, repetition) under
/// <output_dir>/augmented/<label>/rep_NNN.conllu with provenance
/// comments. Deterministic augmenters collapse to a single repetition.
inline int run_augment(const RunConfig& cfg, std::ostream& log) {
  std::ifstream in(cfg.corpus_path);
  if (!in) throw config_error("cannot open corpus: " + cfg.corpus_path);
  const Corpus corpus = parse_conllu(in);
  // Build all conditions (and load all resources) before writing
  // anything, so configuration failures leave no partial output.
  const std::vector<Condition> conditions = build_conditions(cfg);

  int files = 0;
  for (const Condition& cond : conditions) {
    if (cond.label == "baseline") continue;
    const std::vector<AugmentedCorpus> reps =
        run_repetitions(cond.augmenter, corpus, cond.reps, cfg.base_seed);
    for (const AugmentedCorpus& ac : reps) {
      Corpus output = ac.corpus;
      output.provenance.emplace_back("augmenter", ac.augmenter_id);
      output.provenance.emplace_back("seed", std::to_string(ac.seed));
      output.provenance.emplace_back("rep", std::to_string(ac.rep));
      char name[32];
      std::snprintf(name, sizeof(name), "rep_%03d.conllu", ac.rep);
      write_file_atomic(std::filesystem::path(cfg.output_dir) / "augmented" /
                            cond.label / name,
                        serialize_conllu(output));
      ++files;
    }
  }
  log << "wrote " << files << " augmented corpora to " << cfg.output_dir
      << "/augmented\n";
  return 0;
}

// ---------------------------------------------------------------------------
// Subcommand: evaluate

inline int run_evaluate(const RunConfig& cfg, std::ostream& log) {
  std::ifstream in(cfg.corpus_path);
  if (!in) throw config_error("cannot open corpus: " + cfg.corpus_path);
  const Corpus corpus = parse_conllu(in);

  std::vector<PipelineSpec> pipelines;
  if (cfg.registry_path.empty()) {
    PipelineSpec oracle;
    oracle.name = "gold-oracle";
    oracle.builtin = "oracle";
    oracle.tasks = {Task::Pos, Task::Ner, Task::Dep};
    pipelines.push_back(std::move(oracle));
  } else {
    pipelines = load_registry(cfg.registry_path);
  }
  const std::vector<Condition> conditions = build_conditions(cfg);

  // Generate every repetition corpus up front; they are shared
  // read-only across pipelines.
  std::vector<std::vector<AugmentedCorpus>> augmented;
  augmented.reserve(conditions.size());
  for (const Condition& cond : conditions) {
    augmented.push_back(
        run_repetitions(cond.augmenter, corpus, cond.reps, cfg.base_seed));
  }

  Manifest manifest;
  manifest.base_seed = cfg.base_seed;
  manifest.repetitions = cfg.repetitions;
  manifest.alpha = cfg.alpha;
  manifest.bootstrap_iterations = cfg.bootstrap_iterations;
  manifest.exclude_punct = cfg.exclude_punct;
  manifest.ner_metric = cfg.ner_metric;
  for (std::size_t c = 0; c < conditions.size(); ++c) {
    ConditionInfo info;
    info.label = conditions[c].label;
    info.id = conditions[c].augmenter.id();
    info.name = conditions[c].augmenter.name;
    info.kind = conditions[c].augmenter.kind;
    info.reps = conditions[c].reps;
    info.compare_to = conditions[c].compare_to;
    for (const AugmentedCorpus& ac : augmented[c]) info.seeds.push_back(ac.seed);
    for (const Document& doc : augmented[c].front().corpus.documents) {
      info.doc_ids.push_back(doc.doc_id);
    }
    manifest.conditions.push_back(std::move(info));
  }
  for (const PipelineSpec& spec : pipelines) {
    manifest.pipelines.push_back(spec.name);
    manifest.pipeline_tasks[spec.name] = spec.tasks;
    manifest.pipeline_hardware[spec.name] = spec.hardware;
  }

  // One job per (pipeline, condition, repetition). Wall-time
  // measurement is serialized per pipeline; scoring runs concurrently.
  RawScoreMap raw;
  std::vector<std::string> errors;
  std::mutex result_mutex;
  std::vector<std::mutex> pipeline_mutexes(pipelines.size());
  std::vector<std::function<void()>> jobs;
  for (std::size_t p = 0; p < pipelines.size(); ++p) {
    for (std::size_t c = 0; c < conditions.size(); ++c) {
      for (std::size_t r = 0; r < augmented[c].size(); ++r) {
        jobs.push_back([&, p, c, r] {
          const PipelineSpec& spec = pipelines[p];
          const Condition& cond = conditions[c];
          const AugmentedCorpus& ac = augmented[c][r];
          try {
            PredictionSet preds;
            {
              std::lock_guard<std::mutex> lock(pipeline_mutexes[p]);
              preds = annotate(spec, ac.corpus);
            }
            preds.corpus_ref =
                cond.label + "#rep" + std::to_string(ac.rep);
            RawScore score;
            score.pipeline = spec.name;
            score.condition = cond.label;
            score.rep = ac.rep;
            score.seed = ac.seed;
            score.wall_time = preds.wall_time;
            score.tasks = spec.tasks;
            for (std::size_t d = 0; d < ac.corpus.documents.size(); ++d) {
              score.documents.push_back(score_document(
                  ac.corpus.documents[d], preds.documents[d], spec.tasks));
            }
            std::lock_guard<std::mutex> lock(result_mutex);
            raw[spec.name][cond.label].push_back(std::move(score));
          } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(result_mutex);
            errors.push_back("pipeline '" + spec.name + "' condition '" +
                             cond.label + "' rep " + std::to_string(ac.rep) +
                             ": " + e.what());
          }
        });
      }
    }
  }
  runner_detail::run_parallel(jobs, runner_detail::resolve_workers(cfg.workers));

  // Deterministic ordering regardless of completion order.
  for (auto& [pipeline, by_condition] : raw) {
    for (auto& [condition, reps] : by_condition) {
      std::sort(reps.begin(), reps.end(),
                [](const RawScore& a, const RawScore& b) {
                  return a.rep < b.rep;
                });
    }
  }
  std::sort(errors.begin(), errors.end());
  manifest.errors = errors;

  const std::filesystem::path out_dir(cfg.output_dir);
  for (const auto& [pipeline, by_condition] : raw) {
    for (const auto& [condition, reps] : by_condition) {
      for (const RawScore& score : reps) {
        write_file_atomic(out_dir / "scores" / pipeline / condition /
                              runner_detail::rep_file_name(score.rep),
                          runner_detail::raw_score_to_json(score));
      }
    }
  }
  write_file_atomic(out_dir / "manifest.json",
                    runner_detail::manifest_to_json(manifest));

  const EvalReport report = build_report(manifest, raw, cfg);
  write_file_atomic(out_dir / "report.md", render(report, "markdown"));
  write_file_atomic(out_dir / "report.csv", render(report, "csv"));
  write_file_atomic(out_dir / "report.json", render(report, "json"));

  log << "evaluated " << pipelines.size() << " pipeline(s) x "
      << conditions.size() << " condition(s); reports in " << cfg.output_dir
      << "\n";
  for (const std::string& e : errors) log << "error: " << e << "\n";
  return errors.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Subcommand: report (re-render from persisted scores)

struct ReportOptions {
  std::string format = "markdown";
  std::string output_path;  // empty = write to the stream
  std::optional<double> alpha;
  std::optional<int> bootstrap_iterations;
  std::optional<bool> exclude_punct;
  std::optional<std::string> ner_metric;
};

inline int run_report(const std::string& out_dir, const ReportOptions& options,
                      std::ostream& out) {
  const std::filesystem::path dir(out_dir);
  std::ifstream manifest_in(dir / "manifest.json");
  if (!manifest_in) {
    throw config_error("no manifest.json under " + out_dir +
                       " (run evaluate first)");
  }
  const std::string manifest_text(
      (std::istreambuf_iterator<char>(manifest_in)),
      std::istreambuf_iterator<char>());
  const Manifest manifest = runner_detail::manifest_from_json(manifest_text);

  RunConfig cfg;
  cfg.base_seed = manifest.base_seed;
  cfg.repetitions = manifest.repetitions;
  cfg.alpha = options.alpha.value_or(manifest.alpha);
  cfg.bootstrap_iterations =
      options.bootstrap_iterations.value_or(manifest.bootstrap_iterations);
  cfg.exclude_punct = options.exclude_punct.value_or(manifest.exclude_punct);
  cfg.ner_metric = options.ner_metric.value_or(manifest.ner_metric);

  RawScoreMap raw;
  for (const std::string& pipeline : manifest.pipelines) {
    for (const ConditionInfo& cond : manifest.conditions) {
      for (int rep = 0; rep < cond.reps; ++rep) {
        const std::filesystem::path path = dir / "scores" / pipeline /
                                           cond.label /
                                           runner_detail::rep_file_name(rep);
        std::ifstream rep_in(path);
        if (!rep_in) continue;  // failed repetition
        const std::string text((std::istreambuf_iterator<char>(rep_in)),
                               std::istreambuf_iterator<char>());
        raw[pipeline][cond.label].push_back(
            runner_detail::raw_score_from_json(text));
      }
    }
  }

  const EvalReport report = build_report(manifest, raw, cfg);
  const std::string text = render(report, options.format);
  if (options.output_path.empty()) {
    out << text;
  } else {
    write_file_atomic(options.output_path, text);
  }
  return 0;
}

}  // namespace augbench

#endif  // AUGBENCH_RUNNER_HPP_
