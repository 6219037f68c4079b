#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "spinlab/config.hpp"
#include "spinlab/estimate.hpp"

namespace spinlab {

using Cell = std::variant<std::string, double, long long>;

/// Fixed-column result table, written as CSV with doubles at 17 significant
/// digits.
class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  /// Throws std::invalid_argument when the row width differs from the header.
  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
  const std::string& text(std::size_t row, const std::string& column) const;

  void write_csv(std::ostream& out) const;
  std::string csv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Version string recorded in manifests.
const char* code_version();

/// Writes `cfg.output_path` and `<output_path>.json`, the manifest with the
/// canonical config, its hash, the seed, code version and wall time. An empty
/// output_path writes nothing.
void write_outputs(const ExperimentConfig& cfg, const ResultTable& table, double wall_seconds,
                   const std::vector<std::pair<std::string, const ResultTable*>>& extra = {});

/// `base.csv` -> `base_<suffix>.csv`.
std::string sibling_path(const std::string& path, const std::string& suffix);

}  // namespace spinlab
