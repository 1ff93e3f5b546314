#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "doctest.h"

#include "confforge/fmt.hpp"
#include "confforge/report.hpp"

using namespace confforge;

TEST_CASE("format_double keeps round-trip precision") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1e-8) == "1e-08");
  CHECK(format_double(250.0) == "250");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-1.5) == "-1.5");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("csv_cell maps the special values") {
  CHECK(csv_cell(std::numeric_limits<double>::quiet_NaN()) == "");
  CHECK(csv_cell(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(csv_cell(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(csv_cell(0.25) == "0.25");
  CHECK(csv_cell(std::optional<double>{}) == "");
  CHECK(csv_cell(std::optional<double>{2.0}) == "2");
}

TEST_CASE("json values render with stable layout and escaping") {
  JValue obj = JValue::object();
  obj.set("name", "a\"b\\c\nd");
  obj.set("count", static_cast<std::int64_t>(3));
  obj.set("ratio", 0.5);
  obj.set("bad", std::numeric_limits<double>::quiet_NaN());
  obj.set("ok", true);
  obj.set("missing", JValue());
  JValue arr = JValue::array();
  arr.push(static_cast<std::int64_t>(1));
  arr.push(static_cast<std::int64_t>(2));
  obj.set("items", std::move(arr));
  obj.set("empty", JValue::array());

  const std::string expected =
      "{\n"
      "  \"name\": \"a\\\"b\\\\c\\nd\",\n"
      "  \"count\": 3,\n"
      "  \"ratio\": 0.5,\n"
      "  \"bad\": null,\n"
      "  \"ok\": true,\n"
      "  \"missing\": null,\n"
      "  \"items\": [\n"
      "    1,\n"
      "    2\n"
      "  ],\n"
      "  \"empty\": []\n"
      "}\n";
  CHECK(obj.dump() == expected);
}

TEST_CASE("json_quote escapes control characters") {
  CHECK(json_quote("plain") == "\"plain\"");
  CHECK(json_quote("a\tb") == "\"a\\tb\"");
  CHECK(json_quote(std::string("a\x01") + "b") == "\"a\\u0001b\"");
}

TEST_CASE("optional doubles serialize as null when absent") {
  JValue obj = JValue::object();
  obj.set("present", std::optional<double>{1.5});
  obj.set("absent", std::optional<double>{});
  CHECK(obj.dump() ==
        "{\n  \"present\": 1.5,\n  \"absent\": null\n}\n");
}

TEST_CASE("eval report writers emit their pinned headers") {
  EvalReport report{};
  report.config = {"in.jsonl", 0.1,   "symmetric", 1,     100,
                   7,          true,  std::nullopt, std::nullopt,
                   50,         200,   20,          19,    1e-8,
                   false,      false, false};
  RunEval run{};
  run.run_index = 0;
  run.seed = 1;
  run.n_cal = 100;
  run.n_test = 50;
  run.q_hat = 1.5;
  run.coverage_original = 0.8;
  run.coverage_conformal = 0.9;
  run.sharpness_original = 1.0;
  run.sharpness_conformal = 2.0;
  GroupRow g{};
  g.group = "a";
  g.n_cal = 100;
  g.n_test = 50;
  g.q_hat = 1.5;
  g.fallback = false;
  g.coverage_pooled = 0.875;
  run.per_group.push_back(g);
  BinRow b{};
  b.bin = 0;
  b.mean_attr = 0.375;
  b.n_cal = 100;
  b.n_test = 50;
  b.q_hat = 1.25;
  run.per_bin.push_back(b);
  report.runs.push_back(run);

  const std::string per_group = write_per_group_csv(report);
  CHECK(per_group.rfind("run,group,n_cal,n_test,q_hat,fallback,"
                        "coverage_pooled,coverage_grouped\n", 0) == 0);
  CHECK(per_group.find("0,a,100,50,1.5,0,0.875,\n") != std::string::npos);

  const std::string per_bin = write_per_bin_csv(report);
  CHECK(per_bin.rfind("run,bin,lo,hi,mean_attr,n_cal,n_test,q_hat,"
                      "coverage_pooled,coverage_mondrian\n", 0) == 0);
  // A first bin has no lower boundary and a last bin no upper one.
  CHECK(per_bin.find("0,0,-inf,inf,0.375,100,50,1.25,,\n") !=
        std::string::npos);

  IntervalRow row{};
  row.run = 0;
  row.id = "r1";
  row.group = "a";
  row.y = 0.5;
  row.y_hat = 0.25;
  row.q_hat = 1.5;
  row.lo = -1.0;
  row.hi = 1.0;
  row.covered = true;
  const std::string intervals = write_intervals_csv({row});
  CHECK(intervals ==
        "run,id,group,bin,y,y_hat,q_hat,lo,hi,covered\n"
        "0,r1,a,,0.5,0.25,1.5,-1,1,1\n");

  const std::string json = write_eval_report_json(report);
  CHECK(json.rfind("{\n  \"format_version\": \"1\",\n  \"command\": "
                   "\"evaluate\",\n", 0) == 0);
  CHECK(json.find("\"seed\": \"7\"") != std::string::npos);
  CHECK(json.find("\"eps_delta\": 1e-08") != std::string::npos);
  CHECK(json.find("\"ece_original\": null") != std::string::npos);
}
