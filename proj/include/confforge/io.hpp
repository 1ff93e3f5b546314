// Dataset ingestion: JSONL and CSV record files, CSV training tables.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "confforge/record.hpp"

namespace confforge {

enum class RecordFormat { jsonl, csv };

// Picks the format from the file extension; .csv is CSV, everything
// else JSONL.
RecordFormat format_for_path(const std::string& path);

// Reads and validates one record per JSONL line. Recognized fields:
// id, group, y, y_hat, sigma, delta_lo, delta_hi, delta, samples,
// attrs; unknown fields are an error. A missing id becomes "row<N>"
// (1-based line number). Ids must be unique.
std::vector<RegressionRecord> read_records_jsonl(
    std::istream& in, const ValidateOptions& options,
    const std::string& source_name);

// CSV with a header row. The reserved columns above apply; samples is a
// pipe-separated cell; every other column becomes a numeric attribute.
// Empty cells are absent fields.
std::vector<RegressionRecord> read_records_csv(
    std::istream& in, const ValidateOptions& options,
    const std::string& source_name);

std::vector<RegressionRecord> read_records_file(
    const std::string& path, const ValidateOptions& options);

// CSV training table for quantile fitting: y is the target, optional
// id and group carry through, every remaining column is a numeric
// feature (in header order).
struct TrainingTable {
  std::vector<std::string> ids;
  std::vector<std::string> groups;
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> features;
  std::vector<double> targets;
};

TrainingTable read_training_csv(std::istream& in,
                                const std::string& source_name);
TrainingTable read_training_csv_file(const std::string& path);

}  // namespace confforge
