#include "confforge/io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "confforge/error.hpp"

namespace confforge {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& source, std::size_t line,
                          const std::string& what) {
  throw Error(errc::parse_error,
              source + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& text, const std::string& source,
                    std::size_t line, const std::string& field) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    fail_at(source, line, "field '" + field + "' is not a number: '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == sep) {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  return cells;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void check_unique_id(std::set<std::string>& seen, const std::string& id,
                     const std::string& source, std::size_t line) {
  if (!seen.insert(id).second) {
    fail_at(source, line, "duplicate record id '" + id + "'");
  }
}

RegressionRecord validate_at(const RawRecord& raw,
                             const ValidateOptions& options,
                             const std::string& source, std::size_t line) {
  try {
    return validate_record(raw, options);
  } catch (const Error& e) {
    throw Error(e.code(),
                source + ":" + std::to_string(line) + ": " + e.what());
  }
}

const std::set<std::string> kKnownFields = {
    "id",    "group",    "y",     "y_hat", "sigma",
    "delta_lo", "delta_hi", "delta", "samples", "attrs"};

}  // namespace

RecordFormat format_for_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".csv") {
    return RecordFormat::csv;
  }
  return RecordFormat::jsonl;
}

std::vector<RegressionRecord> read_records_jsonl(
    std::istream& in, const ValidateOptions& options,
    const std::string& source_name) {
  std::vector<RegressionRecord> records;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  std::size_t data_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++data_no;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception& e) {
      fail_at(source_name, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!row.is_object()) {
      fail_at(source_name, line_no, "each line must be a JSON object");
    }
    RawRecord raw;
    raw.id = "row" + std::to_string(data_no);
    for (const auto& [key, value] : row.items()) {
      if (!kKnownFields.count(key)) {
        fail_at(source_name, line_no, "unknown field '" + key + "'");
      }
      if (key == "id") {
        if (!value.is_string()) {
          fail_at(source_name, line_no, "'id' must be a string");
        }
        raw.id = value.get<std::string>();
      } else if (key == "group") {
        if (!value.is_string()) {
          fail_at(source_name, line_no, "'group' must be a string");
        }
        raw.group = value.get<std::string>();
      } else if (key == "samples") {
        if (!value.is_array()) {
          fail_at(source_name, line_no, "'samples' must be an array");
        }
        std::vector<double> samples;
        for (const auto& v : value) {
          if (!v.is_number()) {
            fail_at(source_name, line_no, "'samples' must hold numbers");
          }
          samples.push_back(v.get<double>());
        }
        raw.samples = std::move(samples);
      } else if (key == "attrs") {
        if (!value.is_object()) {
          fail_at(source_name, line_no, "'attrs' must be an object");
        }
        for (const auto& [name, v] : value.items()) {
          if (!v.is_number()) {
            fail_at(source_name, line_no,
                    "attribute '" + name + "' must be a number");
          }
          raw.attrs[name] = v.get<double>();
        }
      } else {
        if (!value.is_number()) {
          fail_at(source_name, line_no, "'" + key + "' must be a number");
        }
        const double num = value.get<double>();
        if (key == "y") raw.y = num;
        else if (key == "y_hat") raw.y_hat = num;
        else if (key == "sigma") raw.sigma = num;
        else if (key == "delta_lo") raw.delta_lo = num;
        else if (key == "delta_hi") raw.delta_hi = num;
        else raw.delta = num;
      }
    }
    check_unique_id(seen, raw.id, source_name, line_no);
    records.push_back(validate_at(raw, options, source_name, line_no));
  }
  if (records.empty()) {
    throw Error(errc::empty_input, source_name + ": no records");
  }
  return records;
}

std::vector<RegressionRecord> read_records_csv(
    std::istream& in, const ValidateOptions& options,
    const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(errc::empty_input, source_name + ": empty file");
  }
  const std::vector<std::string> header = split_on(strip_cr(line), ',');
  std::vector<RegressionRecord> records;
  std::set<std::string> seen;
  std::size_t line_no = 1;
  std::size_t data_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    ++data_no;
    const std::vector<std::string> cells = split_on(line, ',');
    if (cells.size() != header.size()) {
      fail_at(source_name, line_no,
              "expected " + std::to_string(header.size()) + " cells, got " +
                  std::to_string(cells.size()));
    }
    RawRecord raw;
    raw.id = "row" + std::to_string(data_no);
    for (std::size_t c = 0; c < header.size(); ++c) {
      const std::string& name = header[c];
      const std::string& cell = cells[c];
      if (cell.empty()) continue;
      if (name == "id") {
        raw.id = cell;
      } else if (name == "group") {
        raw.group = cell;
      } else if (name == "samples") {
        std::vector<double> samples;
        for (const std::string& part : split_on(cell, '|')) {
          samples.push_back(
              parse_number(part, source_name, line_no, "samples"));
        }
        raw.samples = std::move(samples);
      } else if (name == "y" || name == "y_hat" || name == "sigma" ||
                 name == "delta_lo" || name == "delta_hi" ||
                 name == "delta") {
        const double num = parse_number(cell, source_name, line_no, name);
        if (name == "y") raw.y = num;
        else if (name == "y_hat") raw.y_hat = num;
        else if (name == "sigma") raw.sigma = num;
        else if (name == "delta_lo") raw.delta_lo = num;
        else if (name == "delta_hi") raw.delta_hi = num;
        else raw.delta = num;
      } else {
        raw.attrs[name] = parse_number(cell, source_name, line_no, name);
      }
    }
    check_unique_id(seen, raw.id, source_name, line_no);
    records.push_back(validate_at(raw, options, source_name, line_no));
  }
  if (records.empty()) {
    throw Error(errc::empty_input, source_name + ": no records");
  }
  return records;
}

std::vector<RegressionRecord> read_records_file(
    const std::string& path, const ValidateOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::io_error, "cannot open '" + path + "'");
  }
  if (format_for_path(path) == RecordFormat::csv) {
    return read_records_csv(in, options, path);
  }
  return read_records_jsonl(in, options, path);
}

TrainingTable read_training_csv(std::istream& in,
                                const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(errc::empty_input, source_name + ": empty file");
  }
  const std::vector<std::string> header = split_on(strip_cr(line), ',');
  std::size_t y_col = header.size();
  std::size_t id_col = header.size();
  std::size_t group_col = header.size();
  TrainingTable table;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "y") {
      y_col = c;
    } else if (header[c] == "id") {
      id_col = c;
    } else if (header[c] == "group") {
      group_col = c;
    } else {
      table.feature_names.push_back(header[c]);
    }
  }
  if (y_col == header.size()) {
    throw Error(errc::parse_error, source_name + ": no 'y' column");
  }
  if (table.feature_names.empty()) {
    throw Error(errc::parse_error, source_name + ": no feature columns");
  }
  std::size_t line_no = 1;
  std::size_t data_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    ++data_no;
    const std::vector<std::string> cells = split_on(line, ',');
    if (cells.size() != header.size()) {
      fail_at(source_name, line_no,
              "expected " + std::to_string(header.size()) + " cells, got " +
                  std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(table.feature_names.size());
    std::string id = "row" + std::to_string(data_no);
    std::string group;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == y_col) {
        table.targets.push_back(
            parse_number(cells[c], source_name, line_no, "y"));
      } else if (c == id_col) {
        id = cells[c];
      } else if (c == group_col) {
        group = cells[c];
      } else {
        row.push_back(parse_number(cells[c], source_name, line_no, header[c]));
      }
    }
    table.ids.push_back(std::move(id));
    table.groups.push_back(std::move(group));
    table.features.push_back(std::move(row));
  }
  if (table.features.empty()) {
    throw Error(errc::empty_input, source_name + ": no training rows");
  }
  return table;
}

TrainingTable read_training_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::io_error, "cannot open '" + path + "'");
  }
  return read_training_csv(in, path);
}

}  // namespace confforge
