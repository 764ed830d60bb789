// Copyright 2026 vidlang authors
// Dense row-major double tensor. The whole library computes in float64 so
// numerical acceptance tolerances stay tight across platforms.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace vidlang {

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int64_t> shape);
  Tensor(std::initializer_list<int64_t> shape)
      : Tensor(std::vector<int64_t>(shape)) {}

  static Tensor zeros(std::vector<int64_t> shape) { return Tensor(std::move(shape)); }
  static Tensor full(std::vector<int64_t> shape, double value);
  // Wraps existing values; `values.size()` must equal the shape's element count.
  static Tensor from(std::vector<int64_t> shape, std::vector<double> values);

  const std::vector<int64_t>& shape() const { return shape_; }
  size_t ndim() const { return shape_.size(); }
  int64_t dim(size_t i) const { return shape_[i]; }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  // 2-D accessors (most of the library works on matrices).
  int64_t rows() const { return shape_.size() == 2 ? shape_[0] : 0; }
  int64_t cols() const { return shape_.size() == 2 ? shape_[1] : 0; }
  double& operator()(int64_t r, int64_t c) { return data_[r * shape_[1] + c]; }
  double operator()(int64_t r, int64_t c) const { return data_[r * shape_[1] + c]; }

  double& operator[](int64_t i) { return data_[i]; }
  double operator[](int64_t i) const { return data_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& storage() { return data_; }
  const std::vector<double>& storage() const { return data_; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;
  void fill(double value);

 private:
  std::vector<int64_t> shape_;
  std::vector<double> data_;
};

}  // namespace vidlang
