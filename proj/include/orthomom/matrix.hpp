#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace orthomom {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transposed() const;
  /// Leading rows x cols block.
  Matrix block(std::size_t rows, std::size_t cols) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Products split work by output row across `threads` workers. Every output
// entry is reduced in the same index order regardless of the split, so the
// result is bit-identical to the serial path.

/// a * b
Matrix multiply(const Matrix& a, const Matrix& b, unsigned threads = 1);
/// transpose(a) * b
Matrix multiply_at_b(const Matrix& a, const Matrix& b, unsigned threads = 1);
/// a * transpose(b)
Matrix multiply_a_bt(const Matrix& a, const Matrix& b, unsigned threads = 1);

double max_abs(const Matrix& m);
double max_abs_difference(const Matrix& a, const Matrix& b);

/// Runs fn(begin, end) over contiguous chunks of [0, count).
void parallel_ranges(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace orthomom
