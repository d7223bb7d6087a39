#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "orthomom/error.hpp"
#include "orthomom/orthopoly.hpp"

using namespace orthomom;

namespace {

std::vector<double> uniform_points(std::size_t count) {
  std::vector<double> x(count);
  for (std::size_t k = 0; k < count; ++k) {
    x[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  return x;
}

std::size_t sign_changes(const Matrix& values, std::size_t column) {
  std::size_t changes = 0;
  int last = 0;
  for (std::size_t r = 0; r < values.rows(); ++r) {
    const double v = values(r, column);
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s != 0 && last != 0 && s != last) ++changes;
    if (s != 0) last = s;
  }
  return changes;
}

}  // namespace

TEST_CASE("recurrence coefficients") {
  SUBCASE("legendre degree 2") {
    const auto c = recurrence_coefficients(PolynomialFamily::legendre(), 2);
    CHECK(c.alpha == std::vector<double>{0, 0, 0});
    CHECK(c.beta[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c.beta[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(c.beta[2] == doctest::Approx(4.0 / 15.0).epsilon(1e-15));
    CHECK(c.max_degree() == 2);
  }
  SUBCASE("second-kind chebyshev degree 1") {
    const auto c = recurrence_coefficients(PolynomialFamily::chebyshev_second_kind(), 1);
    CHECK(c.alpha == std::vector<double>{0, 0});
    CHECK(c.beta[0] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(c.beta[1] == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("discrete chebyshev on 5 nodes") {
    const auto c = recurrence_coefficients(PolynomialFamily::discrete_chebyshev(5), 1);
    CHECK(c.alpha == std::vector<double>{2, 2});
    CHECK(c.beta[0] == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(c.beta[1] == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("discrete degree must stay below the node count") {
    CHECK_NOTHROW(recurrence_coefficients(PolynomialFamily::discrete_chebyshev(5), 4));
    CHECK_THROWS_AS(recurrence_coefficients(PolynomialFamily::discrete_chebyshev(5), 5),
                    DomainError);
    CHECK_THROWS_AS(PolynomialFamily::discrete_chebyshev(1), InvalidArgument);
  }
}

TEST_CASE("family metadata") {
  CHECK(to_string(FamilyKind::Legendre) == "legendre");
  CHECK(to_string(FamilyKind::ChebyshevSecondKind) == "cheb2");
  CHECK(to_string(FamilyKind::DiscreteChebyshev) == "dcheb");
  CHECK(PolynomialFamily::discrete_chebyshev(7).node_count() == 7);
  CHECK(PolynomialFamily::discrete_chebyshev(7).is_discrete());
  CHECK(PolynomialFamily::chebyshev_second_kind().weight(0.6) == doctest::Approx(0.8));
  CHECK(PolynomialFamily::chebyshev_second_kind().weight(1.0) == 0.0);
  CHECK(PolynomialFamily::legendre().weight(0.3) == 1.0);
}

TEST_CASE("basis evaluation") {
  const auto legendre = [](std::size_t n) {
    return recurrence_coefficients(PolynomialFamily::legendre(), n);
  };
  SUBCASE("p0 of legendre") {
    const std::vector<double> x{0.5};
    const auto b = evaluate_basis(legendre(0), x);
    REQUIRE(b.values.rows() == 1);
    REQUIRE(b.values.cols() == 1);
    CHECK(b.values(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("p1 of legendre") {
    const auto x = uniform_points(11);
    const auto b = evaluate_basis(legendre(1), x);
    for (std::size_t r = 0; r < x.size(); ++r) {
      CHECK(b.values(r, 1) == doctest::Approx(std::sqrt(1.5) * x[r]).epsilon(1e-14));
    }
  }
  SUBCASE("matches scaled std::legendre") {
    const auto x = uniform_points(201);
    const auto b = evaluate_basis(legendre(40), x);
    double worst = 0.0;
    for (std::size_t r = 0; r < x.size(); ++r) {
      for (unsigned i = 0; i <= 40; ++i) {
        const double ref = std::legendre(i, x[r]) * std::sqrt((2.0 * i + 1.0) / 2.0);
        worst = std::max(worst, std::abs(b.values(r, i) - ref));
      }
    }
    CHECK(worst < 1e-12);
  }
  SUBCASE("matches trigonometric second-kind chebyshev") {
    const auto x = uniform_points(199);
    const auto b =
        evaluate_basis(recurrence_coefficients(PolynomialFamily::chebyshev_second_kind(), 30), x);
    double worst = 0.0;
    for (std::size_t r = 1; r + 1 < x.size(); ++r) {
      const double theta = std::acos(x[r]);
      for (std::size_t i = 0; i <= 30; ++i) {
        const double u = std::sin((static_cast<double>(i) + 1.0) * theta) / std::sin(theta);
        worst = std::max(worst, std::abs(b.values(r, i) - u * std::sqrt(2.0 / std::numbers::pi)));
      }
    }
    CHECK(worst < 1e-12);
  }
  SUBCASE("second-kind chebyshev Gram under Gauss quadrature") {
    constexpr std::size_t nodes = 20;
    std::vector<double> x(nodes), w(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
      const double t = static_cast<double>(k + 1) * std::numbers::pi / (nodes + 1);
      x[k] = std::cos(t);
      w[k] = std::numbers::pi / (nodes + 1) * std::sin(t) * std::sin(t);
    }
    const auto p =
        evaluate_basis(recurrence_coefficients(PolynomialFamily::chebyshev_second_kind(), 15), x)
            .values;
    Matrix wp = p;
    for (std::size_t r = 0; r < nodes; ++r) {
      for (double& v : wp.row(r)) v *= w[r];
    }
    CHECK(max_abs_difference(multiply_at_b(wp, p), Matrix::identity(16)) < 1e-13);
  }
  SUBCASE("rejects empty point sets") {
    CHECK_THROWS_AS(evaluate_basis(legendre(3), std::vector<double>{}), InvalidArgument);
  }
}

TEST_CASE("parity of symmetric families") {
  std::mt19937_64 rng(5);
  for (auto family : {PolynomialFamily::legendre(), PolynomialFamily::chebyshev_second_kind()}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(10), neg(10);
      for (std::size_t k = 0; k < x.size(); ++k) {
        x[k] = 2.0 * test::uniform01(rng) - 1.0;
        neg[k] = -x[k];
      }
      const std::size_t n = 1 + test::uniform_index(rng, 30);
      const auto c = recurrence_coefficients(family, n);
      const auto a = evaluate_basis(c, x).values;
      const auto b = evaluate_basis(c, neg).values;
      for (std::size_t r = 0; r < x.size(); ++r) {
        for (std::size_t k = 0; k <= n; ++k) {
          CHECK(b(r, k) == (k % 2 == 0 ? a(r, k) : -a(r, k)));
        }
      }
    }
  }
}

TEST_CASE("degree j has at most j sign changes") {
  const auto x = uniform_points(4001);
  for (auto family : {PolynomialFamily::legendre(), PolynomialFamily::chebyshev_second_kind()}) {
    const auto b = evaluate_basis(recurrence_coefficients(family, 25), x).values;
    for (std::size_t j = 0; j <= 25; ++j) CHECK(sign_changes(b, j) == j);
  }
  const auto d = discrete_chebyshev_basis(60, 59).values;
  for (std::size_t j = 0; j <= 59; ++j) CHECK(sign_changes(d, j) <= j);
}

TEST_CASE("discrete chebyshev basis") {
  SUBCASE("matches the explicit hypergeometric form") {
    for (std::size_t m : {2, 3, 7, 12, 16}) {
      const auto p = discrete_chebyshev_basis(m, m - 1).values;
      for (std::size_t t = 0; t < m; ++t) {
        for (std::size_t n = 0; n < m; ++n) {
          const auto ref = static_cast<double>(
              test::tchebichef(static_cast<long>(n), static_cast<long>(t), static_cast<long>(m)));
          CHECK(p(t, n) == doctest::Approx(ref).epsilon(1e-13).scale(1.0));
        }
      }
    }
  }
  SUBCASE("node recurrence agrees with the degree recurrence where both are stable") {
    for (std::size_t m : {10, 64, 255, 1000}) {
      const std::size_t n = discrete_chebyshev_recurrence_limit(m);
      const auto coef = recurrence_coefficients(PolynomialFamily::discrete_chebyshev(m), n);
      std::vector<double> nodes(m);
      for (std::size_t t = 0; t < m; ++t) nodes[t] = static_cast<double>(t);
      const auto a = evaluate_basis(coef, nodes).values;
      const auto b = discrete_chebyshev_node_recurrence(m, n).values;
      CHECK(max_abs_difference(a, b) < 1e-11);
    }
  }
  SUBCASE("Gram matrix is the identity for random sizes and degrees") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t m = 2 + test::uniform_index(rng, 600);
      const std::size_t n = test::uniform_index(rng, m);
      const auto p = discrete_chebyshev_basis(m, n).values;
      CHECK(max_abs_difference(multiply_at_b(p, p), Matrix::identity(n + 1)) < 1e-10);
    }
  }
  SUBCASE("degree bounds") {
    CHECK_THROWS_AS(discrete_chebyshev_basis(8, 8), DomainError);
    CHECK_THROWS_AS(discrete_chebyshev_node_recurrence(8, 8), DomainError);
  }
}

TEST_CASE("generalized binomial") {
  CHECK(generalized_binomial(5.0, 2) == 10.0);
  CHECK(generalized_binomial(5.0, 0) == 1.0);
  CHECK(generalized_binomial(3.0, 5) == 0.0);
  CHECK(generalized_binomial(-0.5, 2) == doctest::Approx(0.375));
  CHECK(generalized_binomial(0.5, 3) == doctest::Approx(0.0625));
}

TEST_CASE("closed-form legendre") {
  SUBCASE("monomial coefficients") {
    const auto c2 = legendre_monomial_coefficients(2);
    REQUIRE(c2.size() == 3);
    CHECK(c2[0] == doctest::Approx(-0.5));
    CHECK(c2[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(c2[2] == doctest::Approx(1.5));
    const auto c3 = legendre_monomial_coefficients(3);
    CHECK(c3[1] == doctest::Approx(-1.5));
    CHECK(c3[3] == doctest::Approx(2.5));
  }
  SUBCASE("degree zero is constant") {
    const std::vector<double> x{0.3};
    CHECK(legendre_closed_form(0, x, LegendreScaling::Classical).values(0, 0) == 1.0);
    const auto coef = recurrence_coefficients(PolynomialFamily::legendre(), 0);
    CHECK(legendre_closed_form(0, x).values(0, 0) ==
          doctest::Approx(evaluate_basis(coef, x).values(0, 0)).epsilon(1e-15));
  }
  SUBCASE("agrees with the recurrence at low degree and diverges at high degree") {
    const auto x = uniform_points(101);
    const auto dev = [&](std::size_t n) {
      const auto coef = recurrence_coefficients(PolynomialFamily::legendre(), n);
      return max_abs_difference(legendre_closed_form(n, x).values, evaluate_basis(coef, x).values);
    };
    const double low = dev(5);
    const double high = dev(50);
    CHECK(low < 1e-10);
    CHECK(high > 1e3 * std::max(low, 1e-16));
  }
  SUBCASE("classical scaling has P_i(1) = 1 at moderate degree") {
    const std::vector<double> x{1.0};
    const auto b = legendre_closed_form(12, x, LegendreScaling::Classical).values;
    for (std::size_t i = 0; i <= 12; ++i) CHECK(b(0, i) == doctest::Approx(1.0).epsilon(1e-9));
  }
}
