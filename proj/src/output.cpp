#include "spinlab/output.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "spinlab/disorder_io.hpp"

#ifndef SPINLAB_VERSION
#define SPINLAB_VERSION "0.0.0"
#endif

namespace spinlab {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                std::to_string(columns_.size()) + " columns");
  }
  rows_.push_back(std::move(row));
}

std::size_t ResultTable::column_index(const std::string& name) const {
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    if (columns_[k] == name) return k;
  }
  throw std::out_of_range("no column '" + name + "'");
}

double ResultTable::number(std::size_t row, const std::string& column) const {
  const Cell& c = rows_.at(row)[column_index(column)];
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  throw std::invalid_argument("column '" + column + "' is not numeric");
}

const std::string& ResultTable::text(std::size_t row, const std::string& column) const {
  return std::get<std::string>(rows_.at(row)[column_index(column)]);
}

void ResultTable::write_csv(std::ostream& out) const {
  for (std::size_t k = 0; k < columns_.size(); ++k) out << (k ? "," : "") << csv_field(columns_[k]);
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
              out << csv_field(v);
            } else if constexpr (std::is_same_v<T, double>) {
              out << format_double(v);
            } else {
              out << v;
            }
          },
          row[k]);
    }
    out << '\n';
  }
}

std::string ResultTable::csv() const {
  std::ostringstream o;
  write_csv(o);
  return o.str();
}

const char* code_version() { return SPINLAB_VERSION; }

std::string sibling_path(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "_" + suffix;
  }
  return path.substr(0, dot) + "_" + suffix + path.substr(dot);
}

void write_outputs(const ExperimentConfig& cfg, const ResultTable& table, double wall_seconds,
                   const std::vector<std::pair<std::string, const ResultTable*>>& extra) {
  if (cfg.output_path.empty()) return;
  write_file(cfg.output_path, table.csv());
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  files.push_back(cfg.output_path);
  for (const auto& [suffix, t] : extra) {
    const std::string p = sibling_path(cfg.output_path, suffix);
    write_file(p, t->csv());
    files.push_back(p);
  }

  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::istringstream lines(canonical_text(cfg));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find(" = ");
    config[line.substr(0, eq)] = line.substr(eq + 3);
  }
  nlohmann::ordered_json m;
  m["experiment"] = cfg.experiment;
  m["config"] = config;
  m["config_hash"] = config_hash(cfg);
  m["seed"] = cfg.seed;
  m["code_version"] = code_version();
  m["wall_time_seconds"] = wall_seconds;
  m["outputs"] = files;
  m["rows"] = table.rows().size();
  write_file(cfg.output_path + ".json", m.dump(2) + "\n");
}

}  // namespace spinlab
