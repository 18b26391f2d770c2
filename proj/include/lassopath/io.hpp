#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "lassopath/model.hpp"
#include "lassopath/verify.hpp"

namespace lassopath {

class IoError : public LassoError {
 public:
  using LassoError::LassoError;
};

class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : IoError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// 1-based line of the offending input, 0 when unknown.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DegenerateColumn : public LassoError {
 public:
  DegenerateColumn(const std::string& what, Index column) : LassoError(what), column_(column) {}
  Index column() const { return column_; }

 private:
  Index column_;
};

enum class DataFormat { Csv, Json };

/// Picks the format from the extension; anything but .csv is read as JSON.
DataFormat format_from_extension(const std::filesystem::path& file);
std::optional<DataFormat> parse_format(const std::string& name);

struct InstanceMeta {
  std::string name;
  std::string generated_by;
  std::optional<double> alpha_factor;
};

struct LoadedInstance {
  ProblemInstance instance;
  InstanceMeta meta;
};

/// Centers every column of X and y, then scales each to unit norm.
/// Throws DegenerateColumn for a constant column (or a constant y, index −1).
ProblemInstance normalize(const ProblemInstance& inst);

/// CSV: header row, one observation per line. The response is the column
/// named "y", or the last column if none is.
ProblemInstance read_csv_instance(std::istream& in);
LoadedInstance read_json_instance(std::istream& in);
LoadedInstance ingest(const std::filesystem::path& file, DataFormat format, bool normalize);

void write_instance(std::ostream& out, const ProblemInstance& inst, const InstanceMeta& meta);
void write_instance(const std::filesystem::path& file, const ProblemInstance& inst,
                    const InstanceMeta& meta);

/// Path file. Values are printed with enough digits to read back bit-exactly.
void write_path(std::ostream& out, const RegularizationPath& path);
void write_path(const std::filesystem::path& file, const RegularizationPath& path);
RegularizationPath read_path(std::istream& in);
RegularizationPath read_path(const std::filesystem::path& file);

/// lambda followed by sign(w_j)|w_j|^0.1 for every variable, one row per record.
void emit_plot_data(const RegularizationPath& path, std::ostream& out);
double plot_transform(double w);

std::string report_json(const VerificationReport& report);

}  // namespace lassopath
