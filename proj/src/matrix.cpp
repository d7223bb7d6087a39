#include "orthomom/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "orthomom/error.hpp"

namespace orthomom {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw InvalidArgument("matrix data length does not match its shape");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Matrix Matrix::block(std::size_t rows, std::size_t cols) const {
  if (rows > rows_ || cols > cols_) throw InvalidArgument("block exceeds matrix shape");
  Matrix b(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(row(r).begin(), cols, b.row(r).begin());
  }
  return b;
}

void parallel_ranges(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads == 0 ? 1 : threads, count));
  if (workers <= 1) {
    fn(0, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

Matrix multiply(const Matrix& a, const Matrix& b, unsigned threads) {
  if (a.cols() != b.rows()) throw InvalidArgument("multiply: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  parallel_ranges(a.rows(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto out = c.row(i);
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const double s = a(i, k);
        const auto brow = b.row(k);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += s * brow[j];
      }
    }
  });
  return c;
}

Matrix multiply_at_b(const Matrix& a, const Matrix& b, unsigned threads) {
  if (a.rows() != b.rows()) throw InvalidArgument("multiply_at_b: row counts differ");
  Matrix c(a.cols(), b.cols());
  parallel_ranges(a.cols(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto out = c.row(i);
      for (std::size_t k = 0; k < a.rows(); ++k) {
        const double s = a(k, i);
        const auto brow = b.row(k);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += s * brow[j];
      }
    }
  });
  return c;
}

Matrix multiply_a_bt(const Matrix& a, const Matrix& b, unsigned threads) {
  if (a.cols() != b.cols()) throw InvalidArgument("multiply_a_bt: column counts differ");
  Matrix c(a.rows(), b.rows());
  parallel_ranges(a.rows(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto arow = a.row(i);
      for (std::size_t j = 0; j < b.rows(); ++j) {
        const auto brow = b.row(j);
        double s = 0.0;
        for (std::size_t k = 0; k < arow.size(); ++k) s += arow[k] * brow[k];
        c(i, j) = s;
      }
    }
  });
  return c;
}

double max_abs(const Matrix& m) {
  double best = 0.0;
  for (double v : m.data()) best = std::max(best, std::abs(v));
  return best;
}

double max_abs_difference(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("max_abs_difference: shapes differ");
  }
  double best = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, std::abs(x[i] - y[i]));
  return best;
}

}  // namespace orthomom
