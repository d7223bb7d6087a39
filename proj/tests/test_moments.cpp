#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "orthomom/error.hpp"
#include "orthomom/image.hpp"
#include "orthomom/moments.hpp"

using namespace orthomom;

namespace {

constexpr MomentKind kAllKinds[] = {MomentKind::Legendre, MomentKind::Chebyshev2,
                                    MomentKind::DiscreteChebyshev, MomentKind::LegendreClosedForm};

double max_off_origin(const Matrix& mu) {
  double worst = 0.0;
  for (std::size_t i = 0; i < mu.rows(); ++i) {
    for (std::size_t j = 0; j < mu.cols(); ++j) {
      if (i != 0 || j != 0) worst = std::max(worst, std::abs(mu(i, j)));
    }
  }
  return worst;
}


}  // namespace

TEST_CASE("moment kind names") {
  for (auto kind : kAllKinds) CHECK(parse_moment_kind(to_string(kind)) == kind);
  CHECK(to_string(MomentKind::LegendreClosedForm) == "legendre-cf");
  CHECK_FALSE(parse_moment_kind("zernike").has_value());
}

TEST_CASE("legendre moments of a constant image") {
  const auto m = legendre_moments(Matrix(1023, 1023, 1.0), 6);
  CHECK(m.mu(0, 0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(max_off_origin(m.mu) <= 1e-8);
  CHECK(m.rows == 1023);
  CHECK(m.row_family() == PolynomialFamily::legendre());
}

TEST_CASE("second-kind chebyshev moments of a constant image") {
  // Reference values: the same Simpson sums in 40-digit arithmetic. The gap to
  // pi/2 is the rule's h^1.5 error on sqrt(1 - x^2).
  const auto m = chebyshev2_moments(Matrix(1023, 1023, 1.0), 4);
  CHECK(m.mu(0, 0) == doctest::Approx(1.5707565663276949).epsilon(1e-14));
  CHECK(std::abs(m.mu(0, 0) - std::numbers::pi / 2) < 5e-5);
  const double coarse = chebyshev2_moments(Matrix(255, 255, 1.0), 0).mu(0, 0) - std::numbers::pi / 2;
  const double fine = m.mu(0, 0) - std::numbers::pi / 2;
  CHECK(coarse / fine == doctest::Approx(8.0).epsilon(0.02));
}

TEST_CASE("second-kind chebyshev ignores the border") {
  std::mt19937_64 rng(1);
  const Matrix f = test::random_matrix(rng, 31, 41);
  Matrix g = f;
  for (std::size_t c = 0; c < g.cols(); ++c) {
    g(0, c) = test::uniform01(rng);
    g(g.rows() - 1, c) = test::uniform01(rng);
  }
  for (std::size_t r = 0; r < g.rows(); ++r) {
    g(r, 0) = test::uniform01(rng);
    g(r, g.cols() - 1) = test::uniform01(rng);
  }
  CHECK(chebyshev2_moments(f, 8).mu == chebyshev2_moments(g, 8).mu);
}

TEST_CASE("second-kind chebyshev emphasizes the centre") {
  const Matrix model = synth_model(255, 255).intensities();
  const std::size_t m = model.rows();
  const auto base = chebyshev2_moments(model, 10).mu;

  // Perturb the ring one pixel inside the border and an equal-energy centre patch.
  Matrix ring = model;
  std::size_t ring_pixels = 0;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    for (auto [r, c] : {std::pair{std::size_t{1}, k}, std::pair{m - 2, k}, std::pair{k, std::size_t{1}},
                        std::pair{k, m - 2}}) {
      ring(r, c) += 0.1;
      ++ring_pixels;
    }
  }
  Matrix centre = model;
  const auto side = static_cast<std::size_t>(std::sqrt(static_cast<double>(ring_pixels)));
  const std::size_t start = m / 2 - side / 2;
  for (std::size_t r = start; r < start + side; ++r) {
    for (std::size_t c = start; c < start + side; ++c) centre(r, c) += 0.1;
  }
  const double ring_change = max_abs_difference(chebyshev2_moments(ring, 10).mu, base);
  const double centre_change = max_abs_difference(chebyshev2_moments(centre, 10).mu, base);
  CHECK(ring_change < centre_change);
}

TEST_CASE("discrete chebyshev moments") {
  SUBCASE("constant image") {
    const auto m = discrete_chebyshev_moments(Matrix(12, 20, 0.7), 9);
    CHECK(m.mu(0, 0) == doctest::Approx(0.7 * std::sqrt(240.0)).epsilon(1e-14));
    CHECK(max_off_origin(m.mu) <= 1e-12);
  }
  SUBCASE("random 7x7 against the direct double sum") {
    std::mt19937_64 rng(7);
    const Matrix f = test::random_matrix(rng, 7, 7);
    const auto slow = test::brute_force_discrete_moments(f, 4);
    CHECK(max_abs_difference(discrete_chebyshev_moments(f, 4).mu, slow) <= 1e-13 * max_abs(slow));
  }
  SUBCASE("order bound") {
    CHECK_NOTHROW(discrete_chebyshev_moments(Matrix(5, 9, 1.0), 4));
    CHECK_THROWS_AS(discrete_chebyshev_moments(Matrix(5, 9, 1.0), 5), DomainError);
  }
  SUBCASE("model image reaches machine precision") {
    const Matrix model = synth_model(1023, 1023).intensities();
    const auto m = discrete_chebyshev_moments(model, 20);
    CHECK(reconstruction_error(model, reconstruct(m, 1023, 1023)) <= 1e-12);
  }
}

TEST_CASE("closed-form baseline") {
  SUBCASE("agrees with the recurrence pipeline at low order") {
    const Matrix model = synth_model(1023, 1023).intensities();
    const auto a = legendre_moments(model, 5).mu;
    const auto b = legendre_closed_form_moments(model, 5).mu;
    CHECK(max_abs_difference(a, b) <= 1e-2 * max_abs(a));
  }
  SUBCASE("constant image under the naive rule") {
    const auto m = legendre_closed_form_moments(Matrix(9, 9, 1.0), 0);
    CHECK(m.mu(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("high order is worse than the recurrence pipeline") {
    const Matrix model = synth_model(255, 255).intensities();
    const auto rec = legendre_moments(model, 50);
    const auto cf = legendre_closed_form_moments(model, 50);
    CHECK(reconstruction_error(model, reconstruct(cf, 255, 255)) >
          reconstruction_error(model, reconstruct(rec, 255, 255)));
  }
}

TEST_CASE("input validation and trimming") {
  CHECK_THROWS_AS(legendre_moments(Matrix(2, 5, 1.0), 1), InvalidArgument);
  CHECK(trim_to_odd(Matrix(6, 7)).rows() == 5);
  CHECK(trim_to_odd(Matrix(6, 7)).cols() == 7);
  const auto m = legendre_moments(Matrix(10, 12, 1.0), 2);
  CHECK(m.rows == 9);
  CHECK(m.cols == 11);
}

TEST_CASE("reconstruction") {
  SUBCASE("full discrete basis is exact") {
    std::mt19937_64 rng(8);
    const Matrix f = test::random_matrix(rng, 8, 8);
    CHECK(max_abs_difference(reconstruct(discrete_chebyshev_moments(f, 7), 8, 8), f) <= 1e-10);
  }
  SUBCASE("zero moments give a zero image") {
    for (auto kind : kAllKinds) {
      MomentMatrix zero{kind, 3, 9, 9, Matrix(4, 4)};
      CHECK(max_abs(reconstruct(zero, 9, 9)) == 0.0);
    }
  }
  SUBCASE("discrete moments need their own grid") {
    const auto m = discrete_chebyshev_moments(Matrix(9, 9, 1.0), 3);
    CHECK_THROWS_AS(reconstruct(m, 10, 9), InvalidArgument);
  }
  SUBCASE("legendre minimum near fifteen moments") {
    const Matrix model = synth_model(1023, 1023).intensities();
    const double e15 = reconstruction_error(model, reconstruct(legendre_moments(model, 15), 1023, 1023));
    const double e10 = reconstruction_error(model, reconstruct(legendre_moments(model, 10), 1023, 1023));
    const double e20 = reconstruction_error(model, reconstruct(legendre_moments(model, 20), 1023, 1023));
    CHECK(e15 < 1e-4);
    CHECK(e15 < e10);
    CHECK(e15 < e20);
  }
}

TEST_CASE("reconstruction error") {
  const Matrix f(4, 4, 1.0);
  CHECK(reconstruction_error(f, f) == 0.0);
  CHECK(reconstruction_error(f, Matrix(4, 4, 0.5)) == 0.5);
  CHECK_THROWS_AS(reconstruction_error(Matrix(4, 4), f), ZeroReferenceError);
  CHECK_THROWS_AS(reconstruction_error(f, Matrix(3, 4)), InvalidArgument);
}

TEST_CASE("every moment operator is linear") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 3 + test::uniform_index(rng, 30);
    const std::size_t cols = 3 + test::uniform_index(rng, 30);
    const std::size_t q = test::uniform_index(rng, std::min(rows, cols));
    const Matrix f = test::random_matrix(rng, rows, cols);
    const Matrix g = test::random_matrix(rng, rows, cols);
    const double a = 2.0 * test::uniform01(rng) - 1.0;
    const double b = 2.0 * test::uniform01(rng) - 1.0;
    Matrix h(rows, cols);
    for (std::size_t k = 0; k < h.size(); ++k) h.data()[k] = a * f.data()[k] + b * g.data()[k];
    for (auto kind : kAllKinds) {
      const auto mf = compute_moments(f, kind, q).mu;
      const auto mg = compute_moments(g, kind, q).mu;
      const auto mh = compute_moments(h, kind, q).mu;
      Matrix combo(mf.rows(), mf.cols());
      for (std::size_t k = 0; k < combo.size(); ++k) {
        combo.data()[k] = a * mf.data()[k] + b * mg.data()[k];
      }
      CHECK(max_abs_difference(mh, combo) <= 1e-12 * std::max(1.0, max_abs(mh)));
    }
  }
}

TEST_CASE("transposing the image transposes the moments") {
  std::mt19937_64 rng(13);
  const Matrix f = test::random_matrix(rng, 21, 33);
  for (auto kind : kAllKinds) {
    const auto a = compute_moments(f, kind, 6).mu;
    const auto b = compute_moments(f.transposed(), kind, 6).mu;
    CHECK(max_abs_difference(a.transposed(), b) <= 1e-13);
  }
}

TEST_CASE("threaded moments are bit-identical") {
  const Matrix model = synth_model(301, 257).intensities();
  for (auto kind : kAllKinds) {
    const auto serial = compute_moments(model, kind, 12, {1});
    const auto parallel = compute_moments(model, kind, 12, {4});
    CHECK(serial.mu == parallel.mu);
    CHECK(reconstruct(serial, serial.rows, serial.cols, {1}) ==
          reconstruct(serial, serial.rows, serial.cols, {3}));
  }
}

TEST_CASE("moments csv") {
  const Matrix model = synth_model(65, 65).intensities();
  for (auto kind : kAllKinds) {
    const auto m = compute_moments(model, kind, 5);
    const auto text = format_moments_csv(m);
    CHECK(text.rfind("family=" + std::string(to_string(kind)) + ",order=5,rows=65,cols=65\n", 0) == 0);
    const auto back = parse_moments_csv(text);
    CHECK(back.mu == m.mu);
    CHECK(back.kind == kind);
    CHECK(max_abs_difference(reconstruct(back, 65, 65), reconstruct(m, 65, 65)) <= 1e-12);
  }
  CHECK_THROWS_AS(parse_moments_csv("family=legendre,order=1,rows=3,cols=3\n1,2\n"), FormatError);
  CHECK_THROWS_AS(parse_moments_csv("order=1\n1,2\n3,4\n"), FormatError);
  CHECK_THROWS_AS(parse_moments_csv("family=nope,order=0,rows=3,cols=3\n1\n"), FormatError);
}
