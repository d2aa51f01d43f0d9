#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace factorlab {

using Vector = std::vector<double>;

// Dense row-major matrix. Just enough for least squares and a single LSTM cell.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  Vector column(std::size_t c) const {
    Vector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// out += m * v
inline void gemv_accumulate(const Matrix& m, std::span<const double> v, std::span<double> out) {
  assert(m.cols() == v.size() && m.rows() == out.size());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] += dot(m.row(r), v);
}

// out += m^T * v
inline void gemv_transpose_accumulate(const Matrix& m, std::span<const double> v,
                                      std::span<double> out) {
  assert(m.rows() == v.size() && m.cols() == out.size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double vr = v[r];
    if (vr == 0.0) continue;
    auto mr = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] += mr[c] * vr;
  }
}

// m += a * b^T
inline void outer_accumulate(Matrix& m, std::span<const double> a, std::span<const double> b) {
  assert(m.rows() == a.size() && m.cols() == b.size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double ar = a[r];
    if (ar == 0.0) continue;
    auto mr = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) mr[c] += ar * b[c];
  }
}

}  // namespace factorlab
