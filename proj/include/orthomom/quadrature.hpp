#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace orthomom {

enum class QuadratureKind { Simpson, NaiveConstant };

/// One-dimensional rule on the uniform grid of [-1, 1]:
/// integral ~= scale * sum_i weights[i] * f(x_i).
struct QuadratureRule {
  QuadratureKind kind;
  std::vector<double> weights;
  double scale;

  double integrate(std::span<const double> values) const;
};

/// Composite Simpson rule: weights 1, 4, 2, 4, ..., 2, 4, 1 and
/// scale 2 / (3 (M - 1)). Requires odd M >= 3.
QuadratureRule simpson_rule(std::size_t points);

/// Constant unit weights with scale 1. The closed-form baseline applies a
/// per-moment factor instead, see naive_moment_scale.
QuadratureRule naive_rule(std::size_t points);

/// (2i + 1)(2j + 1) / (M N) for zero-based moment orders i, j. This is the
/// constant-weight normalisation for classical (P_i(1) = 1) Legendre
/// polynomials.
double naive_moment_scale(std::size_t i, std::size_t j, std::size_t rows, std::size_t cols) noexcept;

}  // namespace orthomom
