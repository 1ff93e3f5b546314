#include "confforge/report.hpp"

#include <cmath>

#include "confforge/error.hpp"
#include "confforge/fmt.hpp"

namespace confforge {

namespace {

void escape_into(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void indent_into(std::string& out, int depth) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
}

}  // namespace

std::string json_quote(const std::string& s) {
  std::string out;
  escape_into(out, s);
  return out;
}

JValue& JValue::set(const std::string& key, JValue v) {
  auto* obj = std::get_if<Object>(&value_);
  if (!obj) {
    throw Error(errc::invalid_argument, "set() on a non-object JSON value");
  }
  obj->emplace_back(key, std::move(v));
  return *this;
}

JValue& JValue::push(JValue v) {
  auto* arr = std::get_if<Array>(&value_);
  if (!arr) {
    throw Error(errc::invalid_argument, "push() on a non-array JSON value");
  }
  arr->push_back(std::move(v));
  return *this;
}

void JValue::render(std::string& out, int depth) const {
  if (std::holds_alternative<std::nullptr_t>(value_)) {
    out += "null";
  } else if (const auto* b = std::get_if<bool>(&value_)) {
    out += *b ? "true" : "false";
  } else if (const auto* i = std::get_if<std::int64_t>(&value_)) {
    out += std::to_string(*i);
  } else if (const auto* d = std::get_if<double>(&value_)) {
    if (std::isfinite(*d)) {
      out += format_double(*d);
    } else {
      out += "null";
    }
  } else if (const auto* s = std::get_if<std::string>(&value_)) {
    escape_into(out, *s);
  } else if (const auto* arr = std::get_if<Array>(&value_)) {
    if (arr->empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < arr->size(); ++i) {
      indent_into(out, depth + 1);
      (*arr)[i].render(out, depth + 1);
      if (i + 1 < arr->size()) out += ",";
      out += "\n";
    }
    indent_into(out, depth);
    out += "]";
  } else {
    const auto& obj = std::get<Object>(value_);
    if (obj.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    for (std::size_t i = 0; i < obj.size(); ++i) {
      indent_into(out, depth + 1);
      escape_into(out, obj[i].first);
      out += ": ";
      obj[i].second.render(out, depth + 1);
      if (i + 1 < obj.size()) out += ",";
      out += "\n";
    }
    indent_into(out, depth);
    out += "}";
  }
}

std::string JValue::dump() const {
  std::string out;
  render(out, 0);
  out += "\n";
  return out;
}

namespace {

JValue strings_array(const std::vector<std::string>& items) {
  JValue arr = JValue::array();
  for (const auto& s : items) arr.push(s);
  return arr;
}

JValue group_row_json(const GroupRow& g) {
  JValue o = JValue::object();
  o.set("group", g.group);
  o.set("n_cal", g.n_cal);
  o.set("n_test", g.n_test);
  o.set("q_hat", g.q_hat);
  o.set("fallback", g.fallback);
  o.set("coverage_pooled", g.coverage_pooled);
  o.set("coverage_grouped", g.coverage_grouped);
  return o;
}

JValue bin_row_json(const BinRow& b) {
  JValue o = JValue::object();
  o.set("bin", b.bin);
  o.set("lo", b.lo);
  o.set("hi", b.hi);
  o.set("mean_attr", b.mean_attr);
  o.set("n_cal", b.n_cal);
  o.set("n_test", b.n_test);
  o.set("q_hat", b.q_hat);
  o.set("coverage_pooled", b.coverage_pooled);
  o.set("coverage_mondrian", b.coverage_mondrian);
  return o;
}

JValue run_json(const RunEval& r) {
  JValue o = JValue::object();
  o.set("run_index", r.run_index);
  o.set("seed", std::to_string(r.seed));
  o.set("n_cal", r.n_cal);
  o.set("n_test", r.n_test);
  o.set("q_hat", r.q_hat);
  o.set("coverage_original", r.coverage_original);
  o.set("coverage_calibrated", r.coverage_calibrated);
  o.set("coverage_conformal", r.coverage_conformal);
  o.set("sharpness_original", r.sharpness_original);
  o.set("sharpness_calibrated", r.sharpness_calibrated);
  o.set("sharpness_conformal", r.sharpness_conformal);
  o.set("ece_original", r.ece_original);
  o.set("ece_calibrated", r.ece_calibrated);
  o.set("affine_a", r.affine_a);
  o.set("affine_b", r.affine_b);
  JValue groups = JValue::array();
  for (const auto& g : r.per_group) groups.push(group_row_json(g));
  o.set("per_group", std::move(groups));
  JValue bins = JValue::array();
  for (const auto& b : r.per_bin) bins.push(bin_row_json(b));
  o.set("per_bin", std::move(bins));
  o.set("warnings", strings_array(r.warnings));
  return o;
}

JValue means_json(const EvalMeans& m) {
  JValue o = JValue::object();
  o.set("q_hat", m.q_hat);
  o.set("coverage_original", m.coverage_original);
  o.set("coverage_calibrated", m.coverage_calibrated);
  o.set("coverage_conformal", m.coverage_conformal);
  o.set("sharpness_original", m.sharpness_original);
  o.set("sharpness_calibrated", m.sharpness_calibrated);
  o.set("sharpness_conformal", m.sharpness_conformal);
  o.set("ece_original", m.ece_original);
  o.set("ece_calibrated", m.ece_calibrated);
  o.set("affine_a", m.affine_a);
  o.set("affine_b", m.affine_b);
  JValue groups = JValue::array();
  for (const auto& g : m.per_group) {
    JValue row = JValue::object();
    row.set("group", g.group);
    row.set("coverage_pooled", g.coverage_pooled);
    row.set("coverage_grouped", g.coverage_grouped);
    row.set("mean_n_test", g.mean_n_test);
    groups.push(std::move(row));
  }
  o.set("per_group", std::move(groups));
  JValue bins = JValue::array();
  for (const auto& b : m.per_bin) {
    JValue row = JValue::object();
    row.set("bin", b.bin);
    row.set("coverage_pooled", b.coverage_pooled);
    row.set("coverage_mondrian", b.coverage_mondrian);
    row.set("mean_n_test", b.mean_n_test);
    bins.push(std::move(row));
  }
  o.set("per_bin", std::move(bins));
  return o;
}

JValue config_json(const EvalConfigEcho& c) {
  JValue o = JValue::object();
  o.set("input", c.input);
  o.set("alpha", c.alpha);
  o.set("kind", c.kind);
  o.set("runs", c.runs);
  o.set("cal_size", c.cal_size);
  o.set("seed", std::to_string(c.seed));
  o.set("stratify", c.stratify);
  o.set("group_by", c.group_by);
  o.set("bin_attr", c.bin_attr);
  o.set("min_group_size", c.min_group_size);
  o.set("min_bin_size", c.min_bin_size);
  o.set("max_bins", c.max_bins);
  o.set("ece_levels", c.ece_levels);
  o.set("eps_delta", c.eps_delta);
  o.set("allow_unbounded", c.allow_unbounded);
  o.set("clamp_zero_uncertainty", c.clamp_zero_uncertainty);
  o.set("unseen_group_fallback", c.unseen_group_fallback);
  return o;
}

}  // namespace

std::string write_eval_report_json(const EvalReport& report) {
  JValue root = JValue::object();
  root.set("format_version", "1");
  root.set("command", "evaluate");
  root.set("config", config_json(report.config));
  JValue runs = JValue::array();
  for (const auto& r : report.runs) runs.push(run_json(r));
  root.set("runs", std::move(runs));
  root.set("mean", means_json(report.mean));
  root.set("warnings", strings_array(report.warnings));
  return root.dump();
}

std::string csv_cell(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

std::string csv_cell(const std::optional<double>& v) {
  return v.has_value() ? csv_cell(*v) : std::string();
}

std::string write_per_group_csv(const EvalReport& report) {
  std::string out =
      "run,group,n_cal,n_test,q_hat,fallback,coverage_pooled,"
      "coverage_grouped\n";
  for (const auto& run : report.runs) {
    for (const auto& g : run.per_group) {
      out += std::to_string(run.run_index);
      out += ",";
      out += g.group;
      out += ",";
      out += std::to_string(g.n_cal);
      out += ",";
      out += std::to_string(g.n_test);
      out += ",";
      out += csv_cell(g.q_hat);
      out += ",";
      out += g.fallback ? "1" : "0";
      out += ",";
      out += csv_cell(g.coverage_pooled);
      out += ",";
      out += csv_cell(g.coverage_grouped);
      out += "\n";
    }
  }
  return out;
}

std::string write_per_bin_csv(const EvalReport& report) {
  std::string out =
      "run,bin,lo,hi,mean_attr,n_cal,n_test,q_hat,coverage_pooled,"
      "coverage_mondrian\n";
  for (const auto& run : report.runs) {
    for (const auto& b : run.per_bin) {
      out += std::to_string(run.run_index);
      out += ",";
      out += std::to_string(b.bin);
      out += ",";
      out += b.lo.has_value() ? csv_cell(*b.lo) : "-inf";
      out += ",";
      out += b.hi.has_value() ? csv_cell(*b.hi) : "inf";
      out += ",";
      out += csv_cell(b.mean_attr);
      out += ",";
      out += std::to_string(b.n_cal);
      out += ",";
      out += std::to_string(b.n_test);
      out += ",";
      out += csv_cell(b.q_hat);
      out += ",";
      out += csv_cell(b.coverage_pooled);
      out += ",";
      out += csv_cell(b.coverage_mondrian);
      out += "\n";
    }
  }
  return out;
}

std::string write_intervals_csv(const std::vector<IntervalRow>& rows) {
  std::string out = "run,id,group,bin,y,y_hat,q_hat,lo,hi,covered\n";
  for (const auto& r : rows) {
    out += std::to_string(r.run);
    out += ",";
    out += r.id;
    out += ",";
    out += r.group;
    out += ",";
    if (r.bin.has_value()) out += std::to_string(*r.bin);
    out += ",";
    if (r.y.has_value()) out += csv_cell(*r.y);
    out += ",";
    out += csv_cell(r.y_hat);
    out += ",";
    out += csv_cell(r.q_hat);
    out += ",";
    out += csv_cell(r.lo);
    out += ",";
    out += csv_cell(r.hi);
    out += ",";
    if (r.covered.has_value()) out += *r.covered ? "1" : "0";
    out += "\n";
  }
  return out;
}

}  // namespace confforge
