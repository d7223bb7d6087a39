#include "orthomom/quadrature.hpp"

#include <string>

#include "orthomom/error.hpp"

namespace orthomom {

double QuadratureRule::integrate(std::span<const double> values) const {
  if (values.size() != weights.size()) {
    throw InvalidArgument("quadrature: " + std::to_string(values.size()) + " values for " +
                          std::to_string(weights.size()) + " nodes");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += weights[i] * values[i];
  return scale * sum;
}

QuadratureRule simpson_rule(std::size_t points) {
  if (points < 3 || points % 2 == 0) {
    throw InvalidArgument("Simpson rule needs an odd point count >= 3, got " +
                          std::to_string(points));
  }
  std::vector<double> w(points);
  w.front() = 1.0;
  w.back() = 1.0;
  for (std::size_t i = 1; i + 1 < points; ++i) w[i] = (i % 2 == 1) ? 4.0 : 2.0;
  return {QuadratureKind::Simpson, std::move(w), 2.0 / (3.0 * static_cast<double>(points - 1))};
}

QuadratureRule naive_rule(std::size_t points) {
  if (points < 1) throw InvalidArgument("naive rule needs at least one point");
  return {QuadratureKind::NaiveConstant, std::vector<double>(points, 1.0), 1.0};
}

double naive_moment_scale(std::size_t i, std::size_t j, std::size_t rows, std::size_t cols) noexcept {
  return (2.0 * static_cast<double>(i) + 1.0) * (2.0 * static_cast<double>(j) + 1.0) /
         (static_cast<double>(rows) * static_cast<double>(cols));
}

}  // namespace orthomom
