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

#include "augbench/report.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace augbench;

namespace {

ReportRow make_row(const std::string& pipeline, const std::string& condition,
                   Task task, double mean) {
  ReportRow row;
  row.pipeline = pipeline;
  row.condition = condition;
  row.task = task;
  row.mean = mean;
  row.support = 100;
  return row;
}

}  // namespace

TEST_CASE("stochastic cells render as mean (sd) with a star", "[report]") {
  EvalReport report;
  report.pipeline_order = {"model-a"};
  report.condition_order = {"keystroke"};
  ReportRow row = make_row("model-a", "keystroke", Task::Ner, 0.8616);
  row.sd = 0.0057;
  row.significant = true;
  row.p_value = 0.001;
  report.rows = {row};
  const std::string md = render(report, "markdown");
  CHECK(md.find("86.2 (0.6)*") != std::string::npos);
}

TEST_CASE("the synthetic acceptance cell renders exactly", "[report]") {
  EvalReport report;
  report.pipeline_order = {"m"};
  report.condition_order = {"c"};
  ReportRow row = make_row("m", "c", Task::Ner, 0.862);
  row.sd = 0.006;
  row.significant = true;
  report.rows = {row};
  CHECK(render(report, "markdown").find("86.2 (0.6)*") != std::string::npos);
}

TEST_CASE("deterministic cells carry no parentheses", "[report]") {
  EvalReport report;
  report.pipeline_order = {"model-a"};
  report.condition_order = {"baseline"};
  report.rows = {make_row("model-a", "baseline", Task::Ner, 0.856)};
  const std::string md = render(report, "markdown");
  CHECK(md.find("85.6") != std::string::npos);
  CHECK(md.find("85.6 (") == std::string::npos);
  CHECK(md.find("85.6*") == std::string::npos);
}

TEST_CASE("an empty report renders headers only", "[report]") {
  EvalReport report;
  report.condition_order = {"baseline"};
  const std::string md = render(report, "markdown");
  CHECK(md.find("# Evaluation report") != std::string::npos);
  CHECK(md.find("| Model |") == std::string::npos);  // no task tables
  CHECK(render(report, "csv") ==
        "pipeline,condition,task,mean,sd,p_value,significant,support,"
        "wall_time\n");
}

TEST_CASE("best is bold, second best underlined, per column", "[report]") {
  EvalReport report;
  report.pipeline_order = {"low", "high", "mid"};
  report.condition_order = {"baseline"};
  report.rows = {
      make_row("low", "baseline", Task::Pos, 0.701),
      make_row("high", "baseline", Task::Pos, 0.903),
      make_row("mid", "baseline", Task::Pos, 0.802),
  };
  const std::string md = render(report, "markdown");
  CHECK(md.find("<b>90.3</b>") != std::string::npos);
  CHECK(md.find("<u>80.2</u>") != std::string::npos);
  CHECK(md.find("<b>70.1</b>") == std::string::npos);
}

TEST_CASE("ranking uses unrounded means", "[report]") {
  // Both cells round to 80.0 but the second is larger unrounded.
  EvalReport report;
  report.pipeline_order = {"a", "b"};
  report.condition_order = {"c"};
  report.rows = {
      make_row("a", "c", Task::Pos, 0.8001),
      make_row("b", "c", Task::Pos, 0.8004),
  };
  const std::string md = render(report, "markdown");
  const std::size_t bold = md.find("<b>80.0</b>");
  REQUIRE(bold != std::string::npos);
  // The bold cell is on the "b" row.
  const std::size_t b_row = md.find("| b |");
  CHECK(bold > b_row);
}

TEST_CASE("ties go to the earlier row and are annotated", "[report]") {
  EvalReport report;
  report.pipeline_order = {"first", "second"};
  report.condition_order = {"c"};
  report.rows = {
      make_row("first", "c", Task::Pos, 0.75),
      make_row("second", "c", Task::Pos, 0.75),
  };
  const std::string md = render(report, "markdown");
  const std::size_t first_row = md.find("| first | <b>75.0</b> |");
  CHECK(first_row != std::string::npos);
  CHECK(md.find("| second | <u>75.0</u> |") != std::string::npos);
  CHECK(md.find("Ties for best value:") != std::string::npos);
  CHECK(md.find("first and second") != std::string::npos);
}

TEST_CASE("failed rows render as failed", "[report]") {
  EvalReport report;
  report.pipeline_order = {"m"};
  report.condition_order = {"c"};
  ReportRow row;
  row.pipeline = "m";
  row.condition = "c";
  row.task = Task::Pos;
  report.rows = {row};
  CHECK(render(report, "markdown").find("failed") != std::string::npos);
}

TEST_CASE("missing (pipeline, task) combinations render as empty cells",
          "[report]") {
  EvalReport report;
  report.pipeline_order = {"tagger", "parser"};
  report.condition_order = {"baseline"};
  report.rows = {
      make_row("tagger", "baseline", Task::Pos, 0.9),
      make_row("parser", "baseline", Task::Dep, 0.8),
  };
  const std::string md = render(report, "markdown");
  CHECK(md.find("| parser |  |") != std::string::npos);  // in the POS table
}

TEST_CASE("json rendering round-trips to an equal report", "[report]") {
  EvalReport report;
  report.pipeline_order = {"gold-oracle", "baseline"};
  report.condition_order = {"baseline", "keystroke[rate=0.05]"};
  report.base_seed = 42;
  report.repetitions = 20;
  report.alpha = 0.05;
  report.bootstrap_iterations = 2000;
  report.notes = "test run";
  ReportRow row = make_row("gold-oracle", "keystroke[rate=0.05]", Task::Ner,
                           1.0 / 3.0);
  row.sd = 0.0123456789;
  row.p_value = 0.004;
  row.significant = true;
  row.wall_time = 1.25;
  report.rows = {row, make_row("baseline", "baseline", Task::Pos, 0.5)};

  const std::string json = render(report, "json");
  const EvalReport back = report_from_json(json);
  CHECK(back == report);
}

TEST_CASE("csv carries full precision", "[report]") {
  EvalReport report;
  report.pipeline_order = {"m"};
  report.condition_order = {"c"};
  ReportRow row = make_row("m", "c", Task::Ner, 1.0 / 3.0);
  row.sd = 0.000123456789;
  report.rows = {row};
  const std::string csv = render(report, "csv");
  CHECK(csv.find("0.33333333333333331") != std::string::npos);
  CHECK(csv.find("0.000123456789") != std::string::npos);
}

TEST_CASE("unknown formats are a usage error", "[report]") {
  CHECK_THROWS_AS(render(EvalReport{}, "xml"), config_error);
}

TEST_CASE("wall time appears in its own undecorated table", "[report]") {
  EvalReport report;
  report.pipeline_order = {"m"};
  report.condition_order = {"baseline"};
  ReportRow row = make_row("m", "baseline", Task::Pos, 0.95);
  row.wall_time = 12.5;
  report.rows = {row};
  const std::string md = render(report, "markdown");
  CHECK(md.find("## Wall time (seconds)") != std::string::npos);
  CHECK(md.find("12.500") != std::string::npos);
  CHECK(md.find("<b>12.500</b>") == std::string::npos);
}
