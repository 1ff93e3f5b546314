#include <cmath>
#include <sstream>
#include <variant>

#include "doctest.h"

#include "confforge/error.hpp"
#include "confforge/io.hpp"
#include "confforge/record.hpp"

using namespace confforge;

namespace {

bool fails_with(errc code, const RawRecord& raw,
                const ValidateOptions& options = {}) {
  try {
    validate_record(raw, options);
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

RawRecord sigma_raw(double y_hat, double sigma) {
  RawRecord raw;
  raw.id = "r";
  raw.y_hat = y_hat;
  raw.sigma = sigma;
  return raw;
}

}  // namespace

TEST_CASE("validate_record accepts each uncertainty representation") {
  RawRecord raw = sigma_raw(1.0, 0.5);
  raw.y = 1.2;
  raw.group = "g";
  const RegressionRecord rec = validate_record(raw);
  CHECK(rec.id == "r");
  CHECK(rec.group == "g");
  CHECK(rec.has_y());
  CHECK(*rec.y_true == 1.2);
  CHECK(std::get<SigmaEstimate>(rec.uncertainty).sigma == 0.5);

  RawRecord pair;
  pair.id = "p";
  pair.y_hat = 0.0;
  pair.delta_lo = 0.25;
  pair.delta_hi = 0.5;
  const auto& asym =
      std::get<AsymmetricEstimate>(validate_record(pair).uncertainty);
  CHECK(asym.delta_lo == 0.25);
  CHECK(asym.delta_hi == 0.5);

  RawRecord shorthand;
  shorthand.id = "d";
  shorthand.y_hat = 0.0;
  shorthand.delta = 0.75;
  const auto& both =
      std::get<AsymmetricEstimate>(validate_record(shorthand).uncertainty);
  CHECK(both.delta_lo == 0.75);
  CHECK(both.delta_hi == 0.75);
}

TEST_CASE("validate_record defaults y_hat to the sample mean") {
  RawRecord raw;
  raw.id = "s";
  raw.samples = std::vector<double>{1.0, 3.0};
  const RegressionRecord rec = validate_record(raw);
  CHECK(rec.y_hat == 2.0);
  CHECK(std::get<SamplesEstimate>(rec.uncertainty).values.size() == 2);
}

TEST_CASE("validate_record error taxonomy") {
  RawRecord none;
  none.id = "n";
  none.y_hat = 0.0;
  CHECK(fails_with(errc::missing_uncertainty, none));

  RawRecord mixed = sigma_raw(0.0, 1.0);
  mixed.delta = 0.5;
  CHECK(fails_with(errc::missing_uncertainty, mixed));

  RawRecord half;
  half.id = "h";
  half.y_hat = 0.0;
  half.delta_lo = 0.5;
  CHECK(fails_with(errc::missing_uncertainty, half));

  CHECK(fails_with(errc::non_finite,
                   sigma_raw(std::nan(""), 1.0)));
  RawRecord bad_y = sigma_raw(0.0, 1.0);
  bad_y.y = std::numeric_limits<double>::infinity();
  CHECK(fails_with(errc::non_finite, bad_y));

  RawRecord no_yhat;
  no_yhat.id = "m";
  no_yhat.sigma = 1.0;
  CHECK(fails_with(errc::non_finite, no_yhat));

  CHECK(fails_with(errc::non_positive_sigma, sigma_raw(0.0, -1.0)));
  CHECK(fails_with(errc::non_positive_sigma, sigma_raw(0.0, 0.0)));

  RawRecord neg;
  neg.id = "neg";
  neg.y_hat = 0.0;
  neg.delta_lo = -0.1;
  neg.delta_hi = 0.1;
  CHECK(fails_with(errc::non_positive_delta, neg));

  RawRecord one_sample;
  one_sample.id = "one";
  one_sample.samples = std::vector<double>{1.0};
  CHECK(fails_with(errc::empty_samples, one_sample));
}

TEST_CASE("zero uncertainty clamps to the floor only when asked") {
  ValidateOptions clamp;
  clamp.clamp_zero_uncertainty = true;
  clamp.eps_delta = 1e-6;
  const RegressionRecord rec = validate_record(sigma_raw(0.0, 0.0), clamp);
  CHECK(std::get<SigmaEstimate>(rec.uncertainty).sigma == 1e-6);

  RawRecord zz;
  zz.id = "z";
  zz.y_hat = 0.0;
  zz.delta_lo = 0.0;
  zz.delta_hi = 0.0;
  CHECK(fails_with(errc::non_positive_delta, zz));
  const auto& pair =
      std::get<AsymmetricEstimate>(validate_record(zz, clamp).uncertainty);
  CHECK(pair.delta_lo == 1e-6);
  CHECK(pair.delta_hi == 1e-6);
}

TEST_CASE("jsonl reader parses records and rejects malformed input") {
  std::istringstream in(
      R"({"id": "a", "group": "g1", "y": 1.0, "y_hat": 0.5, "sigma": 0.1})"
      "\n"
      "\n"
      R"({"y_hat": 0.0, "delta": 0.2, "attrs": {"len": 7}})"
      "\n"
      R"({"id": "c", "y_hat": 1.0, "samples": [0.5, 1.5, 2.5]})"
      "\n");
  const auto records = read_records_jsonl(in, {}, "test.jsonl");
  REQUIRE(records.size() == 3);
  CHECK(records[0].id == "a");
  CHECK(records[0].group == "g1");
  CHECK(records[1].id == "row2");
  CHECK(records[1].attrs.at("len") == 7.0);
  CHECK(records[2].id == "c");

  std::istringstream bad("not json\n");
  CHECK_THROWS_AS(read_records_jsonl(bad, {}, "t"), Error);

  std::istringstream unknown(R"({"id": "a", "y_hat": 0, "sig": 1})" "\n");
  CHECK_THROWS_AS(read_records_jsonl(unknown, {}, "t"), Error);

  std::istringstream dup(
      R"({"id": "a", "y_hat": 0, "sigma": 1})" "\n"
      R"({"id": "a", "y_hat": 0, "sigma": 1})" "\n");
  CHECK_THROWS_AS(read_records_jsonl(dup, {}, "t"), Error);
}

TEST_CASE("jsonl parse errors carry source and line") {
  std::istringstream bad("{\"id\": \"a\", \"y_hat\": 0, \"sigma\": 1}\n[1]\n");
  try {
    read_records_jsonl(bad, {}, "data.jsonl");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
    CHECK(std::string(e.what()).find("data.jsonl:2") != std::string::npos);
  }
}

TEST_CASE("csv reader handles reserved columns, samples and attributes") {
  std::istringstream in(
      "id,group,y,y_hat,sigma,len\n"
      "a,g1,1.0,0.5,0.1,7\n"
      "b,g2,,0.25,0.2,9\n");
  const auto records = read_records_csv(in, {}, "test.csv");
  REQUIRE(records.size() == 2);
  CHECK(records[0].attrs.at("len") == 7.0);
  CHECK(records[1].has_y() == false);

  std::istringstream samples(
      "id,y_hat,samples\n"
      "s,1.0,0.5|1.5|2.5\n");
  const auto srec = read_records_csv(samples, {}, "s.csv");
  REQUIRE(srec.size() == 1);
  CHECK(std::get<SamplesEstimate>(srec[0].uncertainty).values ==
        std::vector<double>{0.5, 1.5, 2.5});
}

TEST_CASE("format_for_path selects csv only for the csv extension") {
  CHECK(format_for_path("data.csv") == RecordFormat::csv);
  CHECK(format_for_path("data.jsonl") == RecordFormat::jsonl);
  CHECK(format_for_path("data") == RecordFormat::jsonl);
  CHECK(format_for_path("dir.csv/data") == RecordFormat::jsonl);
}

TEST_CASE("training csv splits target, passthrough and features") {
  std::istringstream in(
      "id,group,y,x1,x2\n"
      "a,g,1.5,0.1,0.2\n"
      "b,g,2.5,0.3,0.4\n");
  const TrainingTable table = read_training_csv(in, "train.csv");
  CHECK(table.feature_names == std::vector<std::string>{"x1", "x2"});
  REQUIRE(table.features.size() == 2);
  CHECK(table.features[1] == std::vector<double>{0.3, 0.4});
  CHECK(table.targets == std::vector<double>{1.5, 2.5});
  CHECK(table.ids[0] == "a");
  CHECK(table.groups[1] == "g");
}

TEST_CASE("training csv requires the target column") {
  std::istringstream in("id,x1\na,0.1\n");
  CHECK_THROWS_AS(read_training_csv(in, "t.csv"), Error);
}

TEST_CASE("error codes map to the documented exit statuses") {
  CHECK(exit_code_for(errc::invalid_config) == 1);
  CHECK(exit_code_for(errc::invalid_alpha) == 1);
  CHECK(exit_code_for(errc::invalid_tau) == 1);
  CHECK(exit_code_for(errc::parse_error) == 2);
  CHECK(exit_code_for(errc::missing_ground_truth) == 2);
  CHECK(exit_code_for(errc::unknown_group) == 2);
  CHECK(exit_code_for(errc::unbounded_interval) == 2);
  CHECK(exit_code_for(errc::degenerate_input) == 3);
  CHECK(exit_code_for(errc::non_finite_loss) == 3);
}
