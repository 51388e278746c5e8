#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "structdist/tensor.hpp"

namespace structdist {

inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

/// Max-shifted log-sum-exp. An empty or all -inf range gives -inf.
inline double logsumexp(std::span<const double> values) {
  double hi = kNegInf;
  for (double v : values) hi = std::max(hi, v);
  if (hi == kNegInf) return kNegInf;
  if (hi == kPosInf) return kPosInf;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

/// Reduces `values` over `axis` with log-sum-exp; the result drops that axis.
inline Tensor logsumexp(const Tensor& values, std::size_t axis) {
  if (axis >= values.rank()) throw InvalidArgument("logsumexp: axis out of range");
  const Shape& shape = values.shape();
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
  for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
  const std::size_t len = shape[axis];

  Shape out_shape;
  for (std::size_t a = 0; a < shape.size(); ++a) {
    if (a != axis) out_shape.push_back(shape[a]);
  }
  Tensor out(out_shape);
  auto src = values.data();
  auto dst = out.data();
  std::vector<double> slice(len);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      for (std::size_t k = 0; k < len; ++k) slice[k] = src[(o * len + k) * inner + i];
      dst[o * inner + i] = logsumexp(slice);
    }
  }
  return out;
}

}  // namespace structdist
