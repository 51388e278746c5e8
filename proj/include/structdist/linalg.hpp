#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "structdist/tensor.hpp"

namespace structdist {

struct SignedLogDet {
  int sign = 0;
  double log_abs_det = kNegInf;
};

/// Row-major square matrix of ordinary reals.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

  static SquareMatrix from_tensor(const Tensor& t) {
    if (t.rank() != 2 || t.extent(0) != t.extent(1)) {
      throw InvalidArgument("matrix must be square, got shape " + shape_string(t.shape()));
    }
    SquareMatrix m(t.extent(0));
    std::copy(t.data().begin(), t.data().end(), m.a_.begin());
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// LU factorization with partial pivoting. A pivot is treated as zero when it is at most
/// 1e-12 times the largest absolute entry of the input.
class LuFactorization {
 public:
  static constexpr double kPivotTolerance = 1e-12;

  explicit LuFactorization(SquareMatrix m) : lu_(std::move(m)), perm_(lu_.size()) {
    const std::size_t n = lu_.size();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(lu_(i, j)));
    const double tiny = kPivotTolerance * scale;

    sign_ = 1;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
      }
      if (!(std::abs(lu_(p, k)) > tiny)) {
        singular_ = true;
        sign_ = 0;
        return;
      }
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(k, j));
        std::swap(perm_[p], perm_[k]);
        sign_ = -sign_;
      }
      const double pivot = lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const double f = lu_(i, k) / pivot;
        lu_(i, k) = f;
        if (f == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  bool singular() const noexcept { return singular_; }

  SignedLogDet signed_log_det() const {
    if (singular_) return {};
    SignedLogDet out{sign_, 0.0};
    for (std::size_t k = 0; k < lu_.size(); ++k) {
      const double d = lu_(k, k);
      if (d < 0) out.sign = -out.sign;
      out.log_abs_det += std::log(std::abs(d));
    }
    return out;
  }

  /// Solves A x = b.
  std::vector<double> solve(std::vector<double> b) const {
    const std::size_t n = lu_.size();
    if (singular_) throw InvalidArgument("solve: singular matrix");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
      x[i] /= lu_(i, i);
    }
    return x;
  }

  SquareMatrix inverse() const {
    const std::size_t n = lu_.size();
    SquareMatrix inv(n);
    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::fill(e.begin(), e.end(), 0.0);
      e[j] = 1.0;
      const auto col = solve(e);
      for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
  }

 private:
  SquareMatrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
};

inline SignedLogDet signed_log_det(const SquareMatrix& m) { return LuFactorization(m).signed_log_det(); }

/// Sign and log-magnitude of the determinant; sign 0 and -inf for singular input.
inline SignedLogDet signed_log_det(const Tensor& m) {
  auto mat = SquareMatrix::from_tensor(m);
  for (std::size_t i = 0; i < mat.size(); ++i)
    for (std::size_t j = 0; j < mat.size(); ++j)
      if (!std::isfinite(mat(i, j))) throw InvalidArgument("signed_log_det: non-finite entry");
  return signed_log_det(mat);
}

}  // namespace structdist
