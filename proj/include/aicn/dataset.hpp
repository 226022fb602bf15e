#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "aicn/linalg.hpp"

namespace aicn {

// Dense binary classification data: one row per sample, labels in {-1, +1}.
struct Dataset {
  Matrix features;  // m x d
  Vector labels;    // entries are exactly -1.0 or +1.0
  std::string name;
  bool normalized = false;

  int rows() const { return static_cast<int>(features.rows()); }
  int cols() const { return static_cast<int>(features.cols()); }
};

// Reads sparse "label idx:val idx:val ..." text. '#' starts a comment,
// blank lines are skipped, indices are 1-based and strictly increasing
// within a row. Feature width is max(largest index seen, dim_hint).
// Raw labels are remapped to {-1, +1} (smaller raw value -> -1); more than
// two distinct labels is a ParseError carrying the offending line number.
Dataset parse_libsvm(std::istream& in, std::optional<int> dim_hint = std::nullopt,
                     std::string name = "");

Dataset load_libsvm(const std::string& path, std::optional<int> dim_hint = std::nullopt);

// Inverse of parse_libsvm up to float formatting; values are written with
// enough digits to round-trip exactly, zeros are dropped.
void write_libsvm(const Dataset& data, std::ostream& out);

// Scales every sample to unit euclidean norm (zero rows are left alone).
Dataset normalize_rows(Dataset data);

// Deterministic synthetic two-class task: unit-norm Gaussian samples with
// labels from a random linear teacher plus label noise. Same seed, same bytes.
Dataset synth_logistic(int m, int d, std::uint64_t seed);

}  // namespace aicn
