#include "orthomom/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "orthomom/error.hpp"

namespace orthomom {

PolynomialFamily PolynomialFamily::discrete_chebyshev(std::size_t node_count) {
  if (node_count < 2) {
    throw InvalidArgument("discrete Chebyshev family needs at least 2 nodes");
  }
  return PolynomialFamily(FamilyKind::DiscreteChebyshev, node_count);
}

double PolynomialFamily::weight(double x) const noexcept {
  switch (kind_) {
    case FamilyKind::ChebyshevSecondKind:
      return std::sqrt(std::max(0.0, 1.0 - x * x));
    case FamilyKind::Legendre:
    case FamilyKind::DiscreteChebyshev:
      break;
  }
  return 1.0;
}

std::string_view to_string(FamilyKind kind) noexcept {
  switch (kind) {
    case FamilyKind::Legendre:
      return "legendre";
    case FamilyKind::ChebyshevSecondKind:
      return "cheb2";
    case FamilyKind::DiscreteChebyshev:
      return "dcheb";
  }
  return "unknown";
}

RecurrenceCoefficients recurrence_coefficients(const PolynomialFamily& family, std::size_t n) {
  RecurrenceCoefficients coef{family, std::vector<double>(n + 1, 0.0),
                              std::vector<double>(n + 1, 0.0)};
  switch (family.kind()) {
    case FamilyKind::Legendre:
      coef.beta[0] = 2.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double k2 = static_cast<double>(k * k);
        coef.beta[k] = k2 / (4.0 * k2 - 1.0);
      }
      return coef;
    case FamilyKind::ChebyshevSecondKind:
      coef.beta[0] = std::numbers::pi / 2.0;
      for (std::size_t k = 1; k <= n; ++k) coef.beta[k] = 0.25;
      return coef;
    case FamilyKind::DiscreteChebyshev: {
      const std::size_t m = family.node_count();
      if (n >= m) {
        throw DomainError("discrete Chebyshev degree " + std::to_string(n) +
                          " requested on " + std::to_string(m) +
                          " nodes; at most " + std::to_string(m - 1) + " is possible");
      }
      const double md = static_cast<double>(m);
      coef.beta[0] = md;
      for (std::size_t k = 0; k <= n; ++k) coef.alpha[k] = (md - 1.0) / 2.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double ratio = kd / md;
        coef.beta[k] = (md * md / 4.0) * (1.0 - ratio * ratio) / (4.0 - 1.0 / (kd * kd));
      }
      return coef;
    }
  }
  throw InvalidArgument("unsupported polynomial family");
}

BasisMatrix evaluate_basis(const RecurrenceCoefficients& coef, std::span<const double> points) {
  if (points.empty()) throw InvalidArgument("evaluate_basis: empty point set");
  if (coef.alpha.empty() || coef.alpha.size() != coef.beta.size()) {
    throw InvalidArgument("evaluate_basis: malformed recurrence coefficients");
  }
  const std::size_t n = coef.max_degree();
  std::vector<double> root_beta(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    if (!(coef.beta[k] > 0.0)) throw InvalidArgument("evaluate_basis: beta must be positive");
    root_beta[k] = std::sqrt(coef.beta[k]);
  }

  BasisMatrix basis{coef.family, {points.begin(), points.end()}, Matrix(points.size(), n + 1)};
  const double p0 = 1.0 / root_beta[0];
  for (std::size_t r = 0; r < points.size(); ++r) {
    auto p = basis.values.row(r);
    const double x = points[r];
    p[0] = p0;
    if (n == 0) continue;
    p[1] = (x - coef.alpha[0]) * p[0] / root_beta[1];
    for (std::size_t k = 1; k < n; ++k) {
      p[k + 1] = ((x - coef.alpha[k]) * p[k] - root_beta[k] * p[k - 1]) / root_beta[k + 1];
    }
  }
  return basis;
}

std::size_t discrete_chebyshev_recurrence_limit(std::size_t node_count) noexcept {
  // The degree recurrence loses accuracy once p_n becomes exponentially small
  // near the end nodes: ~1e-13 at 4 sqrt(M), 1e-10 near 5.4 sqrt(M).
  if (node_count == 0) return 0;
  const auto limit = static_cast<std::size_t>(3.0 * std::sqrt(static_cast<double>(node_count)));
  return std::min(limit, node_count - 1);
}

BasisMatrix discrete_chebyshev_node_recurrence(std::size_t node_count, std::size_t n) {
  const auto family = PolynomialFamily::discrete_chebyshev(node_count);
  if (n >= node_count) {
    throw DomainError("discrete Chebyshev degree must be below the node count");
  }
  const std::size_t m = node_count;
  const double md = static_cast<double>(m);
  std::vector<double> nodes(m);
  for (std::size_t t = 0; t < m; ++t) nodes[t] = static_cast<double>(t);

  BasisMatrix basis{family, nodes, Matrix(m, n + 1)};
  Matrix& p = basis.values;
  const std::size_t half = (m + 1) / 2;

  double edge = 1.0 / std::sqrt(md);  // p_k(0)
  for (std::size_t k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    if (k > 0) {
      edge = -edge * std::sqrt((md - kd) / (md + kd)) * std::sqrt((2.0 * kd + 1.0) / (2.0 * kd - 1.0));
    }
    p(0, k) = edge;
    if (half > 1) p(1, k) = (1.0 + kd * (kd + 1.0) / (1.0 - md)) * edge;
    for (std::size_t t = 2; t < half; ++t) {
      const double td = static_cast<double>(t);
      const double denom = td * (md - td);
      const double g1 = (-kd * (kd + 1.0) - (2.0 * td - 1.0) * (td - md - 1.0) - td) / denom;
      const double g2 = (td - 1.0) * (td - md - 1.0) / denom;
      p(t, k) = g1 * p(t - 1, k) + g2 * p(t - 2, k);
    }
    const double parity = (k % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t t = half; t < m; ++t) p(t, k) = parity * p(m - 1 - t, k);
  }
  return basis;
}

BasisMatrix discrete_chebyshev_basis(std::size_t node_count, std::size_t n) {
  const auto family = PolynomialFamily::discrete_chebyshev(node_count);
  if (n > discrete_chebyshev_recurrence_limit(node_count)) {
    return discrete_chebyshev_node_recurrence(node_count, n);
  }
  std::vector<double> nodes(node_count);
  for (std::size_t t = 0; t < node_count; ++t) nodes[t] = static_cast<double>(t);
  return evaluate_basis(recurrence_coefficients(family, n), nodes);
}

double generalized_binomial(double a, std::size_t k) noexcept {
  double c = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    c *= (a - static_cast<double>(j)) / static_cast<double>(j + 1);
  }
  return c;
}

std::vector<double> legendre_monomial_coefficients(std::size_t i) {
  std::vector<double> c(i + 1);
  const double scale = std::ldexp(1.0, static_cast<int>(i));
  for (std::size_t k = 0; k <= i; ++k) {
    const double half = (static_cast<double>(i) + static_cast<double>(k) - 1.0) / 2.0;
    c[k] = scale * generalized_binomial(static_cast<double>(i), k) *
           generalized_binomial(half, i);
  }
  return c;
}

BasisMatrix legendre_closed_form(std::size_t n, std::span<const double> points,
                                 LegendreScaling scaling) {
  if (points.empty()) throw InvalidArgument("legendre_closed_form: empty point set");
  BasisMatrix basis{PolynomialFamily::legendre(), {points.begin(), points.end()},
                    Matrix(points.size(), n + 1)};
  for (std::size_t i = 0; i <= n; ++i) {
    const auto coeffs = legendre_monomial_coefficients(i);
    const double norm = scaling == LegendreScaling::Orthonormal
                            ? std::sqrt((2.0 * static_cast<double>(i) + 1.0) / 2.0)
                            : 1.0;
    for (std::size_t r = 0; r < points.size(); ++r) {
      const double x = points[r];
      double power = 1.0;
      double sum = 0.0;
      for (double c : coeffs) {
        sum += c * power;
        power *= x;
      }
      basis.values(r, i) = norm * sum;
    }
  }
  return basis;
}

}  // namespace orthomom
