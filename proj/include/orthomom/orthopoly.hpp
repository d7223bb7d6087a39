#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "orthomom/matrix.hpp"

namespace orthomom {

enum class FamilyKind { Legendre, ChebyshevSecondKind, DiscreteChebyshev };

/// A family of orthonormal polynomials, identified by its inner product.
///
/// Legendre: weight 1 on [-1, 1].
/// ChebyshevSecondKind: weight sqrt(1 - x^2) on [-1, 1].
/// DiscreteChebyshev(M): unit weights at the nodes t = 0, 1, ..., M - 1.
class PolynomialFamily {
 public:
  static PolynomialFamily legendre() { return PolynomialFamily(FamilyKind::Legendre, 0); }
  static PolynomialFamily chebyshev_second_kind() {
    return PolynomialFamily(FamilyKind::ChebyshevSecondKind, 0);
  }
  /// Throws InvalidArgument if node_count < 2.
  static PolynomialFamily discrete_chebyshev(std::size_t node_count);

  FamilyKind kind() const noexcept { return kind_; }
  bool is_discrete() const noexcept { return kind_ == FamilyKind::DiscreteChebyshev; }
  /// Number of discrete nodes; 0 for the continuous families.
  std::size_t node_count() const noexcept { return node_count_; }

  /// Weight function of the continuous inner product; 1 for the discrete family.
  double weight(double x) const noexcept;

  friend bool operator==(const PolynomialFamily&, const PolynomialFamily&) = default;

 private:
  PolynomialFamily(FamilyKind kind, std::size_t node_count)
      : kind_(kind), node_count_(node_count) {}

  FamilyKind kind_;
  std::size_t node_count_;
};

std::string_view to_string(FamilyKind kind) noexcept;

/// Three-term recurrence coefficients alpha_k, beta_k for k = 0..n.
/// beta[0] is the squared norm of the constant monic polynomial.
struct RecurrenceCoefficients {
  PolynomialFamily family;
  std::vector<double> alpha;
  std::vector<double> beta;

  std::size_t max_degree() const noexcept { return alpha.empty() ? 0 : alpha.size() - 1; }
};

/// Closed-form recurrence coefficients up to degree n.
/// Throws DomainError if n >= node_count for the discrete family.
RecurrenceCoefficients recurrence_coefficients(const PolynomialFamily& family, std::size_t n);

/// Evaluations of p_0..p_n at a point set; values(r, j) = p_j(points[r]).
struct BasisMatrix {
  PolynomialFamily family;
  std::vector<double> points;
  Matrix values;

  std::size_t max_degree() const noexcept { return values.cols() == 0 ? 0 : values.cols() - 1; }
};

/// Evaluates the orthonormal polynomials at `points` with the three-term
/// recurrence
///
///   sqrt(beta_{k+1}) p_{k+1}(x) = (x - alpha_k) p_k(x) - sqrt(beta_k) p_{k-1}(x),
///   p_0 = 1 / sqrt(beta_0),
///
/// in O(points * degree) operations.
BasisMatrix evaluate_basis(const RecurrenceCoefficients& coef, std::span<const double> points);

/// Highest degree for which the degree-direction recurrence keeps the
/// discrete Chebyshev basis on M nodes orthonormal to ~1e-12.
std::size_t discrete_chebyshev_recurrence_limit(std::size_t node_count) noexcept;

/// Discrete Chebyshev basis on the nodes 0..M-1 via a recurrence in the node
/// index, mirrored about the centre. Stable for every degree below M.
BasisMatrix discrete_chebyshev_node_recurrence(std::size_t node_count, std::size_t n);

/// Discrete Chebyshev basis p_0..p_n on the nodes 0..M-1. Uses
/// evaluate_basis while n is within discrete_chebyshev_recurrence_limit and
/// falls back to the node recurrence beyond it.
BasisMatrix discrete_chebyshev_basis(std::size_t node_count, std::size_t n);

/// Generalized binomial coefficient C(a, k) for real a, as a product of
/// (a - j) / (j + 1) factors.
double generalized_binomial(double a, std::size_t k) noexcept;

enum class LegendreScaling {
  Classical,    // P_i(1) = 1
  Orthonormal,  // P_i scaled by sqrt((2i + 1) / 2)
};

/// Monomial-basis coefficients of the classical Legendre polynomial P_i,
/// c[k] = 2^i C(i, k) C((i + k - 1) / 2, i).
std::vector<double> legendre_monomial_coefficients(std::size_t i);

/// Legendre polynomials evaluated through their explicit monomial expansion.
/// Ill-conditioned for large degree: kept as a baseline, overflow and
/// cancellation are not masked.
BasisMatrix legendre_closed_form(std::size_t n, std::span<const double> points,
                                 LegendreScaling scaling = LegendreScaling::Orthonormal);

}  // namespace orthomom
