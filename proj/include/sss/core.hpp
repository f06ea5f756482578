// Copyright 2026 The sss-canon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sss {

// Error categories. Everything thrown by the library derives from one of
// these so the CLI can map failures onto exit codes.

/// Input outside the geometric or mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation applied to data in the wrong processing stage.
class StageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed, truncated or inconsistent file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or index sets that do not line up.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

enum class Side { Port, Starboard };

std::string_view to_string(Side side);
Side side_from_string(std::string_view name);

/// Backscatter-vs-incidence model used for the Lambertian correction.
enum class LambertianLaw { Cos, CosSquared, Cot };

std::string_view to_string(LambertianLaw law);
/// Accepts the CLI spellings "cos", "cos2", "cot".
LambertianLaw law_from_string(std::string_view name);

/// Dense row-major matrix. Rows are pings, columns are range bins.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> flat() { return data_; }
  std::span<const T> flat() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Integer pixel coordinate: ping (row) and bin (column).
struct PixelCoord {
  long ping = 0;
  long bin = 0;
  bool operator==(const PixelCoord&) const = default;
};

}  // namespace sss
