// Report model and deterministic serialization. All report files are
// byte-stable: fixed key order, 17-significant-digit decimals, null for
// non-finite values, seeds as decimal strings (they exceed the exact
// integer range of JSON numbers).
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace confforge {

// Ordered JSON value; objects keep insertion order.
class JValue {
 public:
  using Array = std::vector<JValue>;
  using Object = std::vector<std::pair<std::string, JValue>>;

  JValue() : value_(nullptr) {}
  JValue(std::nullptr_t) : value_(nullptr) {}
  JValue(bool b) : value_(b) {}
  JValue(int v) : value_(static_cast<std::int64_t>(v)) {}
  JValue(std::int64_t v) : value_(v) {}
  JValue(double v) : value_(v) {}
  JValue(const char* s) : value_(std::string(s)) {}
  JValue(std::string s) : value_(std::move(s)) {}
  JValue(Array a) : value_(std::move(a)) {}
  JValue(Object o) : value_(std::move(o)) {}

  template <typename T>
  JValue(const std::optional<T>& v) : value_(nullptr) {
    if (v.has_value()) *this = JValue(*v);
  }

  // Two-space indented rendering with a trailing newline.
  std::string dump() const;

  static JValue object() { return JValue(Object{}); }
  static JValue array() { return JValue(Array{}); }
  JValue& set(const std::string& key, JValue v);
  JValue& push(JValue v);

 private:
  void render(std::string& out, int depth) const;
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array,
               Object>
      value_;
};

struct GroupRow {
  std::string group;
  int n_cal;  // calibration records in this run
  int n_test;
  double q_hat;   // quantile applied to this group
  bool fallback;  // pooled quantile substituted for a small group
  std::optional<double> coverage_pooled;
  std::optional<double> coverage_grouped;
};

struct BinRow {
  int bin;
  std::optional<double> lo;  // absent = open end
  std::optional<double> hi;
  double mean_attr;
  int n_cal;
  int n_test;
  double q_hat;
  std::optional<double> coverage_pooled;
  std::optional<double> coverage_mondrian;
};

struct RunEval {
  int run_index;
  std::uint64_t seed;
  int n_cal;
  int n_test;
  double q_hat;  // pooled conformal quantile; may be +inf
  double coverage_original;
  std::optional<double> coverage_calibrated;
  double coverage_conformal;
  double sharpness_original;
  std::optional<double> sharpness_calibrated;
  double sharpness_conformal;
  std::optional<double> ece_original;
  std::optional<double> ece_calibrated;
  std::optional<double> affine_a;
  std::optional<double> affine_b;
  std::vector<GroupRow> per_group;
  std::vector<BinRow> per_bin;
  std::vector<std::string> warnings;
};

struct GroupMean {
  std::string group;
  std::optional<double> coverage_pooled;
  std::optional<double> coverage_grouped;
  double mean_n_test;
};

struct BinMean {
  int bin;
  std::optional<double> coverage_pooled;
  std::optional<double> coverage_mondrian;
  double mean_n_test;
};

struct EvalMeans {
  double q_hat;
  double coverage_original;
  std::optional<double> coverage_calibrated;
  double coverage_conformal;
  double sharpness_original;
  std::optional<double> sharpness_calibrated;
  double sharpness_conformal;
  std::optional<double> ece_original;
  std::optional<double> ece_calibrated;
  std::optional<double> affine_a;
  std::optional<double> affine_b;
  std::vector<GroupMean> per_group;
  std::vector<BinMean> per_bin;
};

struct EvalConfigEcho {
  std::string input;
  double alpha;
  std::string kind;  // "symmetric" | "asymmetric"
  int runs;
  int cal_size;
  std::uint64_t seed;
  bool stratify;
  std::optional<std::string> group_by;
  std::optional<std::string> bin_attr;
  int min_group_size;
  int min_bin_size;
  int max_bins;
  int ece_levels;
  double eps_delta;
  bool allow_unbounded;
  bool clamp_zero_uncertainty;
  bool unseen_group_fallback;
};

struct EvalReport {
  EvalConfigEcho config;
  std::vector<RunEval> runs;
  EvalMeans mean;
  std::vector<std::string> warnings;
};

// One conformal test interval, echoed per record in the intervals CSV.
struct IntervalRow {
  int run;
  std::string id;
  std::string group;
  std::optional<int> bin;
  std::optional<double> y;
  double y_hat;
  double q_hat;
  double lo;
  double hi;
  std::optional<bool> covered;
};

std::string write_eval_report_json(const EvalReport& report);
std::string write_per_group_csv(const EvalReport& report);
std::string write_per_bin_csv(const EvalReport& report);
std::string write_intervals_csv(const std::vector<IntervalRow>& rows);

// CSV cell for a double: %.17g, with unbounded values as inf / -inf
// and absent optionals as empty cells.
std::string csv_cell(double v);
std::string csv_cell(const std::optional<double>& v);

// The string as a quoted, escaped JSON literal.
std::string json_quote(const std::string& s);

}  // namespace confforge
