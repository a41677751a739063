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

#ifndef AUGBENCH_REPORT_HPP_
#define AUGBENCH_REPORT_HPP_

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "augbench/predictions.hpp"
#include "augbench/resources.hpp"
#include "augbench/version.hpp"

// Rendering of evaluation results as tables: one table per task with
// conditions as columns and pipelines as rows, cells as "mean (sd)*"
// with means in percentage points. Markdown mirrors the published table
// shape (best bold, second best underlined); csv and json carry full
// precision for downstream analysis.

namespace augbench {

struct ReportRow {
  std::string pipeline;
  std::string condition;
  Task task = Task::Pos;
  std::optional<double> mean;         // absent when the pipeline failed
  std::optional<double> sd;           // stochastic conditions only
  std::optional<double> p_value;      // only where a baseline pairing exists
  std::optional<bool> significant;    // after Bonferroni correction
  long support = 0;
  std::optional<double> wall_time;    // seconds, mean across repetitions

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct EvalReport {
  std::vector<std::string> pipeline_order;
  std::vector<std::string> condition_order;
  std::vector<ReportRow> rows;

  // Metadata for reproducibility.
  std::string version = AUGBENCH_VERSION;
  std::uint64_t base_seed = 0;
  int repetitions = 0;
  double alpha = 0.05;
  int bootstrap_iterations = 0;
  std::string ner_metric = "micro_f1_no_misc";
  bool exclude_punct = false;
  std::string notes;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

namespace report_detail {

inline std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

inline std::string full_precision(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

/// Cell text for one row: mean in percentage points, one decimal, with
/// "(sd)" for stochastic conditions and "*" when significant. Ranking
/// decoration is applied separately.
inline std::string cell_text(const ReportRow& row) {
  if (!row.mean.has_value()) return "failed";
  std::string out = fixed(*row.mean * 100.0, 1);
  if (row.sd.has_value()) out += " (" + fixed(*row.sd * 100.0, 1) + ")";
  if (row.significant.has_value() && *row.significant) out += "*";
  return out;
}

inline std::string task_title(Task task, const EvalReport& report) {
  switch (task) {
    case Task::Pos:
      return "POS accuracy";
    case Task::Ner: {
      if (report.ner_metric == "micro_f1") return "NER F1 (micro)";
      if (report.ner_metric == "macro_f1") return "NER F1 (macro)";
      return "NER F1 (micro, excluding MISC)";
    }
    case Task::Dep:
      return report.exclude_punct ? "Dependency LAS (excluding punctuation)"
                                  : "Dependency LAS";
  }
  return "?";
}

inline const ReportRow* find_row(const EvalReport& report,
                                 const std::string& pipeline,
                                 const std::string& condition, Task task) {
  for (const ReportRow& row : report.rows) {
    if (row.pipeline == pipeline && row.condition == condition &&
        row.task == task) {
      return &row;
    }
  }
  return nullptr;
}

inline std::string render_markdown(const EvalReport& report) {
  std::string out = "# Evaluation report\n";
  std::vector<std::string> ties;

  for (Task task : {Task::Pos, Task::Ner, Task::Dep}) {
    bool task_present = false;
    for (const ReportRow& row : report.rows) task_present |= row.task == task;
    if (!task_present) continue;

    out += "\n## " + task_title(task, report) + "\n\n";
    out += "| Model |";
    for (const std::string& condition : report.condition_order) {
      out += " " + condition + " |";
    }
    out += "\n|---|";
    for (std::size_t i = 0; i < report.condition_order.size(); ++i) {
      out += "---|";
    }
    out += "\n";

    // Ranking per column, on unrounded means.
    std::map<std::string, std::pair<int, int>> ranks;  // condition -> rows
    for (const std::string& condition : report.condition_order) {
      int best = -1;
      int second = -1;
      for (int p = 0; p < static_cast<int>(report.pipeline_order.size());
           ++p) {
        const ReportRow* row = find_row(
            report, report.pipeline_order[static_cast<std::size_t>(p)],
            condition, task);
        if (row == nullptr || !row->mean.has_value()) continue;
        const double mean = *row->mean;
        const auto mean_of = [&](int idx) {
          return *find_row(report,
                           report.pipeline_order[static_cast<std::size_t>(idx)],
                           condition, task)
                      ->mean;
        };
        if (best < 0 || mean > mean_of(best)) {
          second = best;
          best = p;
        } else {
          if (mean == mean_of(best)) {
            ties.push_back(task_title(task, report) + " / " + condition +
                           ": " +
                           report.pipeline_order[static_cast<std::size_t>(
                               best)] +
                           " and " +
                           report.pipeline_order[static_cast<std::size_t>(p)]);
          }
          if (second < 0 || mean > mean_of(second)) second = p;
        }
      }
      ranks[condition] = {best, second};
    }

    for (int p = 0; p < static_cast<int>(report.pipeline_order.size()); ++p) {
      const std::string& pipeline =
          report.pipeline_order[static_cast<std::size_t>(p)];
      out += "| " + pipeline + " |";
      for (const std::string& condition : report.condition_order) {
        const ReportRow* row = find_row(report, pipeline, condition, task);
        if (row == nullptr) {
          out += "  |";
          continue;
        }
        std::string cell = cell_text(*row);
        const auto [best, second] = ranks[condition];
        if (row->mean.has_value()) {
          if (p == best) {
            cell = "<b>" + cell + "</b>";
          } else if (p == second) {
            cell = "<u>" + cell + "</u>";
          }
        }
        out += " " + cell + " |";
      }
      out += "\n";
    }
  }

  // Wall time has no ranking decoration.
  bool any_wall = false;
  for (const ReportRow& row : report.rows) {
    any_wall |= row.wall_time.has_value();
  }
  if (any_wall) {
    out += "\n## Wall time (seconds)\n\n| Model |";
    for (const std::string& condition : report.condition_order) {
      out += " " + condition + " |";
    }
    out += "\n|---|";
    for (std::size_t i = 0; i < report.condition_order.size(); ++i) {
      out += "---|";
    }
    out += "\n";
    for (const std::string& pipeline : report.pipeline_order) {
      out += "| " + pipeline + " |";
      for (const std::string& condition : report.condition_order) {
        std::optional<double> wall;
        for (Task task : {Task::Pos, Task::Ner, Task::Dep}) {
          const ReportRow* row = find_row(report, pipeline, condition, task);
          if (row != nullptr && row->wall_time.has_value()) {
            wall = row->wall_time;
            break;
          }
        }
        out += wall.has_value() ? " " + fixed(*wall, 3) + " |" : "  |";
      }
      out += "\n";
    }
  }

  if (!ties.empty()) {
    out += "\nTies for best value:\n";
    for (const std::string& tie : ties) out += "- " + tie + "\n";
  }

  out += "\n---\n";
  out += "alpha " + fixed(report.alpha, 3) + " with Bonferroni correction; " +
         std::to_string(report.repetitions) +
         " repetitions for stochastic augmenters; base seed " +
         std::to_string(report.base_seed) + "; paired bootstrap (" +
         std::to_string(report.bootstrap_iterations) +
         " resamples of documents) against the baseline condition; " +
         "* marks significance after correction.\n";
  if (!report.notes.empty()) out += report.notes + "\n";
  return out;
}

inline std::string csv_escape(const std::string& s) {
  bool needs_quotes = false;
  for (char c : s) {
    if (c == ',' || c == '"' || c == '\n') needs_quotes = true;
  }
  if (!needs_quotes) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  return out + "\"";
}

inline std::string render_csv(const EvalReport& report) {
  std::string out =
      "pipeline,condition,task,mean,sd,p_value,significant,support,"
      "wall_time\n";
  for (const ReportRow& row : report.rows) {
    out += csv_escape(row.pipeline) + "," + csv_escape(row.condition) + "," +
           to_string(row.task) + ",";
    out += row.mean.has_value() ? full_precision(*row.mean) : "";
    out += ",";
    out += row.sd.has_value() ? full_precision(*row.sd) : "";
    out += ",";
    out += row.p_value.has_value() ? full_precision(*row.p_value) : "";
    out += ",";
    out += row.significant.has_value() ? (*row.significant ? "true" : "false")
                                       : "";
    out += "," + std::to_string(row.support) + ",";
    out += row.wall_time.has_value() ? full_precision(*row.wall_time) : "";
    out += "\n";
  }
  return out;
}

inline nlohmann::ordered_json row_to_json(const ReportRow& row) {
  nlohmann::ordered_json j;
  j["pipeline"] = row.pipeline;
  j["condition"] = row.condition;
  j["task"] = to_string(row.task);
  j["mean"] = row.mean.has_value() ? nlohmann::ordered_json(*row.mean)
                                   : nlohmann::ordered_json(nullptr);
  j["sd"] = row.sd.has_value() ? nlohmann::ordered_json(*row.sd)
                               : nlohmann::ordered_json(nullptr);
  j["p_value"] = row.p_value.has_value()
                     ? nlohmann::ordered_json(*row.p_value)
                     : nlohmann::ordered_json(nullptr);
  j["significant"] = row.significant.has_value()
                         ? nlohmann::ordered_json(*row.significant)
                         : nlohmann::ordered_json(nullptr);
  j["support"] = row.support;
  j["wall_time"] = row.wall_time.has_value()
                       ? nlohmann::ordered_json(*row.wall_time)
                       : nlohmann::ordered_json(nullptr);
  return j;
}

inline std::string render_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["metadata"]["version"] = report.version;
  j["metadata"]["base_seed"] = report.base_seed;
  j["metadata"]["repetitions"] = report.repetitions;
  j["metadata"]["alpha"] = report.alpha;
  j["metadata"]["bootstrap_iterations"] = report.bootstrap_iterations;
  j["metadata"]["ner_metric"] = report.ner_metric;
  j["metadata"]["exclude_punct"] = report.exclude_punct;
  j["metadata"]["notes"] = report.notes;
  j["metadata"]["pipeline_order"] = report.pipeline_order;
  j["metadata"]["condition_order"] = report.condition_order;
  j["rows"] = nlohmann::ordered_json::array();
  for (const ReportRow& row : report.rows) j["rows"].push_back(row_to_json(row));
  return j.dump(2) + "\n";
}

}  // namespace report_detail

/// Renders a report. Formats: "markdown", "csv", "json".
inline std::string render(const EvalReport& report, const std::string& format) {
  if (format == "markdown" || format == "md") {
    return report_detail::render_markdown(report);
  }
  if (format == "csv") return report_detail::render_csv(report);
  if (format == "json") return report_detail::render_json(report);
  throw config_error("unknown report format '" + format +
                     "' (markdown, csv, json)");
}

/// Parses render(report, "json") back into an equal EvalReport.
inline EvalReport report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("report json: ") + e.what());
  }
  EvalReport report;
  const auto& meta = j.at("metadata");
  report.version = meta.at("version").get<std::string>();
  report.base_seed = meta.at("base_seed").get<std::uint64_t>();
  report.repetitions = meta.at("repetitions").get<int>();
  report.alpha = meta.at("alpha").get<double>();
  report.bootstrap_iterations = meta.at("bootstrap_iterations").get<int>();
  report.ner_metric = meta.at("ner_metric").get<std::string>();
  report.exclude_punct = meta.at("exclude_punct").get<bool>();
  report.notes = meta.at("notes").get<std::string>();
  report.pipeline_order =
      meta.at("pipeline_order").get<std::vector<std::string>>();
  report.condition_order =
      meta.at("condition_order").get<std::vector<std::string>>();
  for (const auto& rj : j.at("rows")) {
    ReportRow row;
    row.pipeline = rj.at("pipeline").get<std::string>();
    row.condition = rj.at("condition").get<std::string>();
    const auto task = task_from(rj.at("task").get<std::string>());
    if (!task) throw config_error("report json: unknown task");
    row.task = *task;
    if (!rj.at("mean").is_null()) row.mean = rj.at("mean").get<double>();
    if (!rj.at("sd").is_null()) row.sd = rj.at("sd").get<double>();
    if (!rj.at("p_value").is_null()) {
      row.p_value = rj.at("p_value").get<double>();
    }
    if (!rj.at("significant").is_null()) {
      row.significant = rj.at("significant").get<bool>();
    }
    row.support = rj.at("support").get<long>();
    if (!rj.at("wall_time").is_null()) {
      row.wall_time = rj.at("wall_time").get<double>();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace augbench

#endif  // AUGBENCH_REPORT_HPP_
