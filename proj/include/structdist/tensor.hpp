#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "structdist/errors.hpp"

namespace structdist {

using Shape = std::vector<std::size_t>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

inline std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

inline std::string shape_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

/// Dense row-major tensor of doubles. -inf is allowed, NaN is rejected on construction.
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(Shape shape, double fill = 0.0)
      : shape_(std::move(shape)), data_(shape_size(shape_), fill) {
    if (std::isnan(fill)) throw InvalidArgument("tensor: NaN fill value");
  }

  Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_size(shape_)) {
      throw InvalidArgument("tensor: data length " + std::to_string(data_.size()) +
                            " does not match shape " + shape_string(shape_));
    }
    if (std::any_of(data_.begin(), data_.end(), [](double v) { return std::isnan(v); })) {
      throw InvalidArgument("tensor: NaN entry");
    }
  }

  static Tensor scalar(double value) { return Tensor(Shape{}, std::vector<double>{value}); }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  template <typename... I>
  double& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <typename... I>
  double operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  double at(std::span<const std::size_t> idx) const { return data_[flat_index(idx)]; }
  double& at(std::span<const std::size_t> idx) { return data_[flat_index(idx)]; }

  std::size_t flat_index(std::span<const std::size_t> idx) const {
    if (idx.size() != shape_.size()) throw InvalidArgument("tensor: index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (idx[a] >= shape_[a]) throw InvalidArgument("tensor: index out of range");
      flat = flat * shape_[a] + idx[a];
    }
    return flat;
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  template <typename... I>
  std::size_t offset(I... idx) const {
    static_assert(sizeof...(I) > 0);
    const std::size_t ix[] = {static_cast<std::size_t>(idx)...};
    std::size_t flat = 0;
    for (std::size_t a = 0; a < sizeof...(I); ++a) flat = flat * shape_[a] + ix[a];
    return flat;
  }

  Shape shape_;
  std::vector<double> data_;
};

struct NamedTensor {
  std::string name;
  Tensor tensor;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

/// Ordered collection of named tensors. Used for log-potentials, marginals and indicators,
/// which all share one layout per family.
class TensorSet {
 public:
  TensorSet() = default;
  explicit TensorSet(std::vector<NamedTensor> tensors) : tensors_(std::move(tensors)) {}

  void add(std::string name, Tensor tensor) { tensors_.push_back({std::move(name), std::move(tensor)}); }

  bool contains(std::string_view name) const {
    return std::any_of(tensors_.begin(), tensors_.end(), [&](const auto& t) { return t.name == name; });
  }

  const Tensor& operator[](std::string_view name) const { return find(name); }
  Tensor& operator[](std::string_view name) {
    return const_cast<Tensor&>(static_cast<const TensorSet&>(*this).find(name));
  }

  const std::vector<NamedTensor>& entries() const noexcept { return tensors_; }
  std::vector<NamedTensor>& entries() noexcept { return tensors_; }

  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& t : tensors_) n += t.tensor.size();
    return n;
  }

  /// Offset of the named tensor inside flatten().
  std::size_t offset(std::string_view name) const {
    std::size_t off = 0;
    for (const auto& t : tensors_) {
      if (t.name == name) return off;
      off += t.tensor.size();
    }
    throw InvalidArgument("tensor set: no tensor named '" + std::string(name) + "'");
  }

  std::vector<double> flatten() const {
    std::vector<double> flat;
    flat.reserve(total_size());
    for (const auto& t : tensors_) flat.insert(flat.end(), t.tensor.data().begin(), t.tensor.data().end());
    return flat;
  }

  /// Same names and shapes as this set, values taken from `flat`.
  TensorSet with_values(std::span<const double> flat) const {
    if (flat.size() != total_size()) throw InvalidArgument("tensor set: flat size mismatch");
    TensorSet out;
    std::size_t off = 0;
    for (const auto& t : tensors_) {
      std::vector<double> values(flat.begin() + static_cast<std::ptrdiff_t>(off),
                                 flat.begin() + static_cast<std::ptrdiff_t>(off + t.tensor.size()));
      out.add(t.name, Tensor(t.tensor.shape(), std::move(values)));
      off += t.tensor.size();
    }
    return out;
  }

  TensorSet zeros_like() const { return with_values(std::vector<double>(total_size(), 0.0)); }

  friend bool operator==(const TensorSet&, const TensorSet&) = default;

 private:
  const Tensor& find(std::string_view name) const {
    for (const auto& t : tensors_) {
      if (t.name == name) return t.tensor;
    }
    throw InvalidArgument("tensor set: no tensor named '" + std::string(name) + "'");
  }

  std::vector<NamedTensor> tensors_;
};

}  // namespace structdist
