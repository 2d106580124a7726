#pragma once

#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "mixssl/core/errors.hpp"

namespace mixssl {

// Dense row-major tensor. Shapes are small (rank <= 4 in practice), storage is
// contiguous and owned. No views, no broadcasting; kernels operate on raw
// pointers.
template <typename T>
class Tensor {
public:
  Tensor() = default;

  explicit Tensor(std::vector<int64_t> shape) : shape_(std::move(shape)) {
    data_.assign(static_cast<size_t>(compute_numel(shape_)), T{});
  }

  Tensor(std::vector<int64_t> shape, T fill_value) : shape_(std::move(shape)) {
    data_.assign(static_cast<size_t>(compute_numel(shape_)), fill_value);
  }

  static Tensor zeros(std::vector<int64_t> shape) { return Tensor(std::move(shape)); }

  static Tensor full(std::vector<int64_t> shape, T value) {
    return Tensor(std::move(shape), value);
  }

  int rank() const { return static_cast<int>(shape_.size()); }

  int64_t dim(int i) const { return shape_.at(static_cast<size_t>(i)); }

  const std::vector<int64_t>& shape() const { return shape_; }

  int64_t numel() const { return static_cast<int64_t>(data_.size()); }

  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  T& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  const T& operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  template <typename... Idx>
  T& operator()(Idx... idx) {
    return data_[static_cast<size_t>(flat_index(idx...))];
  }

  template <typename... Idx>
  const T& operator()(Idx... idx) const {
    return data_[static_cast<size_t>(flat_index(idx...))];
  }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  // Reinterprets the shape; element count must be preserved.
  void reshape(std::vector<int64_t> new_shape) {
    if (compute_numel(new_shape) != numel()) {
      throw InvalidInput("tensor reshape changes element count: " + shape_str(shape_) +
                         " -> " + shape_str(new_shape));
    }
    shape_ = std::move(new_shape);
  }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> out(shape_);
    for (int64_t i = 0; i < numel(); ++i) out[i] = static_cast<U>(data_[static_cast<size_t>(i)]);
    return out;
  }

  static std::string shape_str(const std::vector<int64_t>& shape) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < shape.size(); ++i) {
      if (i) os << ",";
      os << shape[i];
    }
    os << ")";
    return os.str();
  }

  std::string shape_str() const { return shape_str(shape_); }

private:
  template <typename... Idx>
  int64_t flat_index(Idx... idx) const {
    const int64_t ids[] = {static_cast<int64_t>(idx)...};
    const size_t n = sizeof...(idx);
    int64_t offset = 0;
    for (size_t i = 0; i < n; ++i) offset = offset * shape_[i] + ids[i];
    return offset;
  }

  static int64_t compute_numel(const std::vector<int64_t>& shape) {
    int64_t n = 1;
    for (int64_t d : shape) {
      if (d < 0) throw InvalidInput("negative tensor dimension");
      n *= d;
    }
    return n;
  }

  std::vector<int64_t> shape_;
  std::vector<T> data_;
};

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;

}  // namespace mixssl
