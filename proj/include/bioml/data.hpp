#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bioml/types.hpp"

namespace bioml {

enum class ColumnKind { Continuous, Categorical };

// Ordered column layout of a table. Target columns live alongside the
// features; `feature_names()` is everything that is not a target.
struct FeatureSchema {
  std::vector<std::string> names;
  std::vector<ColumnKind> kinds;
  std::vector<std::string> target_names;
  // Categorical column -> level labels. A label's code is its index.
  std::map<std::string, std::vector<std::string>> encodings;

  // Throws Config on duplicate/empty names, kind count mismatch, targets
  // outside `names`, or a categorical column without an encoding.
  void validate() const;

  std::size_t size() const { return names.size(); }
  bool contains(const std::string& name) const;
  // Throws MissingColumn.
  std::size_t index_of(const std::string& name) const;
  bool is_target(const std::string& name) const;
  std::vector<std::string> feature_names() const;

  // The 16-feature biomass layout plus the SEF, SCI, OMF and RRR targets.
  static FeatureSchema biomass();
};

// Level labels of the crop-rotation column in code order.
const std::vector<std::string>& crop_rotation_levels();

struct DataTable {
  FeatureSchema schema;
  Matrix rows;  // n x schema.size(), columns in schema order

  std::size_t n() const { return static_cast<std::size_t>(rows.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(rows.cols()); }

  Vector column(const std::string& name) const;
  // Sub-matrix with the requested columns in the requested order.
  Matrix columns(const std::vector<std::string>& names) const;
  DataTable select_rows(const std::vector<std::size_t>& indices) const;
};

DataTable load_csv(const std::filesystem::path& path, const FeatureSchema& schema);
DataTable parse_csv(std::istream& in, const FeatureSchema& schema);

// Shortest round-trip decimal representation, so write -> load is lossless.
void write_csv(std::ostream& out, const DataTable& table);
void write_csv(const std::filesystem::path& path, const DataTable& table);

std::string format_shortest(double value);

struct Standardizer {
  std::vector<std::string> columns;
  std::vector<double> means;
  std::vector<double> stds;  // population std; 1 for constant columns
};

Standardizer standardize_fit(const DataTable& table, const std::vector<std::string>& columns);
// out = (in - mean) / std on the standardizer's columns; other columns copied.
DataTable standardize_apply(const Standardizer& standardizer, const DataTable& table);
DataTable standardize_invert(const Standardizer& standardizer, const DataTable& table);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Seeded Fisher-Yates shuffle, then the first floor(fraction * n) rows train.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);
std::pair<DataTable, DataTable> train_test_split(const DataTable& table, const SplitSpec& spec);

// k folds of a seeded permutation of 0..n-1. The first n mod k folds hold one
// extra row; indices inside a fold are ascending. Throws InvalidFolds unless
// 2 <= k <= n.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed);
// All rows outside fold `f`, ascending.
std::vector<std::size_t> fold_complement(const std::vector<std::vector<std::size_t>>& folds, std::size_t f);

Matrix take_rows(const Matrix& X, const std::vector<std::size_t>& rows);
Vector take_rows(const Vector& y, const std::vector<std::size_t>& rows);

}  // namespace bioml
