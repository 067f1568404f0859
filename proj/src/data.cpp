#include "bioml/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bioml/error.hpp"
#include "bioml/rng.hpp"

namespace bioml {

void FeatureSchema::validate() const {
  if (names.empty()) throw Error(ErrorCode::Config, "schema has no columns");
  if (kinds.size() != names.size())
    throw Error(ErrorCode::Config, "schema kinds/names length differ");
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (name.empty()) throw Error(ErrorCode::Config, "empty column name");
    if (!seen.insert(name).second) throw Error(ErrorCode::Config, "duplicate column '" + name + "'");
  }
  for (const auto& t : target_names)
    if (!seen.contains(t)) throw Error(ErrorCode::Config, "target '" + t + "' is not a column");
  for (std::size_t j = 0; j < names.size(); ++j)
    if (kinds[j] == ColumnKind::Categorical && !encodings.contains(names[j]))
      throw Error(ErrorCode::Config, "categorical column '" + names[j] + "' has no encoding");
}

bool FeatureSchema::contains(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::size_t FeatureSchema::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(ErrorCode::MissingColumn, name);
  return static_cast<std::size_t>(it - names.begin());
}

bool FeatureSchema::is_target(const std::string& name) const {
  return std::find(target_names.begin(), target_names.end(), name) != target_names.end();
}

std::vector<std::string> FeatureSchema::feature_names() const {
  std::vector<std::string> out;
  for (const auto& n : names)
    if (!is_target(n)) out.push_back(n);
  return out;
}

const std::vector<std::string>& crop_rotation_levels() {
  static const std::vector<std::string> levels = {
      "corn-corn", "corn-soybean", "corn-soybean-wheat", "corn-wheat"};
  return levels;
}

FeatureSchema FeatureSchema::biomass() {
  FeatureSchema s;
  s.names = {"corn_yield",         "soybean_yield", "wheat_yield",    "soil_erodibility",
             "clay",               "silt",          "sand",           "organic_matter",
             "rainfall_erosivity", "slope",         "slope_length",   "k_factor",
             "crop_rotation",      "residue_removal_rate", "noise_1", "noise_2",
             "SEF",                "SCI",           "OMF",            "RRR"};
  s.kinds.assign(s.names.size(), ColumnKind::Continuous);
  s.kinds[12] = ColumnKind::Categorical;
  s.target_names = {"SEF", "SCI", "OMF", "RRR"};
  s.encodings["crop_rotation"] = crop_rotation_levels();
  return s;
}

Vector DataTable::column(const std::string& name) const {
  return rows.col(static_cast<Eigen::Index>(schema.index_of(name)));
}

Matrix DataTable::columns(const std::vector<std::string>& names) const {
  Matrix out(rows.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = rows.col(static_cast<Eigen::Index>(schema.index_of(names[j])));
  return out;
}

DataTable DataTable::select_rows(const std::vector<std::size_t>& indices) const {
  DataTable out{schema, Matrix(static_cast<Eigen::Index>(indices.size()), rows.cols())};
  for (std::size_t i = 0; i < indices.size(); ++i)
    out.rows.row(static_cast<Eigen::Index>(i)) = rows.row(static_cast<Eigen::Index>(indices[i]));
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(std::string_view text, double& value) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(value);
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

DataTable parse_csv(std::istream& in, const FeatureSchema& schema) {
  schema.validate();
  std::string line;
  if (!std::getline(in, line) || is_blank(line)) throw Error(ErrorCode::EmptyFile, "no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_fields(line);
  // file column -> schema column
  std::vector<std::size_t> target_of(header.size());
  std::vector<bool> present(schema.size(), false);
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(header[c]);
    if (!schema.contains(name))
      throw Error(ErrorCode::SchemaMismatch, "unexpected column '" + name + "'");
    target_of[c] = schema.index_of(name);
    if (present[target_of[c]]) throw Error(ErrorCode::SchemaMismatch, "duplicate column '" + name + "'");
    present[target_of[c]] = true;
  }
  for (std::size_t j = 0; j < schema.size(); ++j)
    if (!present[j]) throw Error(ErrorCode::MissingColumn, schema.names[j]);

  std::vector<std::vector<double>> records;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (is_blank(line)) continue;
    ++row;
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw Error(ErrorCode::SchemaMismatch, "row " + std::to_string(row) + " has " +
                                                 std::to_string(fields.size()) + " cells, expected " +
                                                 std::to_string(header.size()));
    std::vector<double> record(schema.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::size_t j = target_of[c];
      double value = 0.0;
      if (schema.kinds[j] == ColumnKind::Categorical) {
        const auto& levels = schema.encodings.at(schema.names[j]);
        auto it = std::find(levels.begin(), levels.end(), fields[c]);
        if (it != levels.end()) {
          value = static_cast<double>(it - levels.begin());
        } else if (!parse_double(fields[c], value) || value != std::floor(value) || value < 0 ||
                   value >= static_cast<double>(levels.size())) {
          throw Error(ErrorCode::NonNumericCell, "row " + std::to_string(row) + ", column '" +
                                                     schema.names[j] + "': unknown level '" +
                                                     std::string(fields[c]) + "'");
        }
      } else if (!parse_double(fields[c], value)) {
        throw Error(ErrorCode::NonNumericCell, "row " + std::to_string(row) + ", column '" +
                                                   schema.names[j] + "': '" + std::string(fields[c]) +
                                                   "'");
      }
      record[j] = value;
    }
    records.push_back(std::move(record));
  }
  if (records.empty()) throw Error(ErrorCode::EmptyFile, "header only, no data rows");

  DataTable table{schema, Matrix(static_cast<Eigen::Index>(records.size()),
                                 static_cast<Eigen::Index>(schema.size()))};
  for (std::size_t i = 0; i < records.size(); ++i)
    for (std::size_t j = 0; j < schema.size(); ++j)
      table.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = records[i][j];
  return table;
}

DataTable load_csv(const std::filesystem::path& path, const FeatureSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return parse_csv(in, schema);
}

std::string format_shortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const DataTable& table) {
  for (std::size_t j = 0; j < table.schema.size(); ++j) out << (j ? "," : "") << table.schema.names[j];
  out << '\n';
  for (Eigen::Index i = 0; i < table.rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.rows.cols(); ++j)
      out << (j ? "," : "") << format_shortest(table.rows(i, j));
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const DataTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  write_csv(out, table);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

Standardizer standardize_fit(const DataTable& table, const std::vector<std::string>& columns) {
  if (table.n() == 0) throw Error(ErrorCode::EmptyInput, "cannot standardize an empty table");
  Standardizer s;
  s.columns = columns;
  for (const auto& name : columns) {
    const Vector col = table.column(name);
    if (col.maxCoeff() == col.minCoeff()) {
      // zero variance: std sentinel 1 maps every value to exactly 0
      s.means.push_back(col(0));
      s.stds.push_back(1.0);
      continue;
    }
    const double mean = col.mean();
    const double var = (col.array() - mean).square().mean();
    s.means.push_back(mean);
    s.stds.push_back(var > 0.0 ? std::sqrt(var) : 1.0);
  }
  return s;
}

namespace {
DataTable transform(const Standardizer& s, const DataTable& table, bool inverse) {
  DataTable out = table;
  for (std::size_t k = 0; k < s.columns.size(); ++k) {
    if (!table.schema.contains(s.columns[k]))
      throw Error(ErrorCode::SchemaMismatch, "standardizer column '" + s.columns[k] + "' not in table");
    auto col = out.rows.col(static_cast<Eigen::Index>(table.schema.index_of(s.columns[k])));
    if (inverse)
      col = (col.array() * s.stds[k] + s.means[k]).matrix();
    else
      col = ((col.array() - s.means[k]) / s.stds[k]).matrix();
  }
  return out;
}
}  // namespace

DataTable standardize_apply(const Standardizer& s, const DataTable& table) { return transform(s, table, false); }

DataTable standardize_invert(const Standardizer& s, const DataTable& table) { return transform(s, table, true); }

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction <= 1.0))
    throw Error(ErrorCode::Config, "train fraction must lie in (0, 1]");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(spec.seed);
  rng.shuffle(order);
  // 1e-9 slack keeps e.g. 0.7 * 10 from flooring to 6 on representation error
  const auto n_train = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(n) + 1e-9));
  if (n_train == 0) throw Error(ErrorCode::DegenerateSplit, "empty training split");
  if (spec.train_fraction < 1.0 && n_train >= n)
    throw Error(ErrorCode::DegenerateSplit, "empty test split");
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return out;
}

std::pair<DataTable, DataTable> train_test_split(const DataTable& table, const SplitSpec& spec) {
  auto idx = split_indices(table.n(), spec);
  return {table.select_rows(idx.train), table.select_rows(idx.test)};
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidFolds, "fold count must be >= 2, got " + std::to_string(k));
  if (k > n)
    throw Error(ErrorCode::InvalidFolds,
                std::to_string(k) + " folds need at least " + std::to_string(k) + " rows, have " + std::to_string(n));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                    order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(folds[f].begin(), folds[f].end());
    pos += size;
  }
  return folds;
}

std::vector<std::size_t> fold_complement(const std::vector<std::vector<std::size_t>>& folds, std::size_t f) {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < folds.size(); ++g)
    if (g != f) out.insert(out.end(), folds[g].begin(), folds[g].end());
  std::sort(out.begin(), out.end());
  return out;
}

Matrix take_rows(const Matrix& X, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

Vector take_rows(const Vector& y, const std::vector<std::size_t>& rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
  return out;
}

}  // namespace bioml
