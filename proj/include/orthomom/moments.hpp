#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "orthomom/matrix.hpp"
#include "orthomom/orthopoly.hpp"

namespace orthomom {

/// Moment pipelines. The first three use recurrence-evaluated orthonormal
/// bases; LegendreClosedForm is the monomial-expansion / constant-weight
/// baseline.
enum class MomentKind { Legendre, Chebyshev2, DiscreteChebyshev, LegendreClosedForm };

/// "legendre", "cheb2", "dcheb", "legendre-cf".
std::string_view to_string(MomentKind kind) noexcept;
std::optional<MomentKind> parse_moment_kind(std::string_view name) noexcept;

/// mu(i, j) for i, j = 0..order. rows/cols are the image dimensions actually
/// integrated over (after odd trimming for the continuous pipelines).
struct MomentMatrix {
  MomentKind kind = MomentKind::Legendre;
  std::size_t order = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  Matrix mu;

  /// Polynomial family along the row axis.
  PolynomialFamily row_family() const;
};

struct MomentOptions {
  unsigned threads = 1;
};

/// Drops the last row and/or column when the count is even.
Matrix trim_to_odd(const Matrix& image);

/// Legendre moments by the composite Simpson product rule on the normalized
/// grid. Requires at least 3x3 pixels.
MomentMatrix legendre_moments(const Matrix& image, std::size_t order, const MomentOptions& opts = {});

/// Second-kind Chebyshev moments; the weight sqrt(1-x^2) sqrt(1-y^2) is
/// folded into the Simpson weights, so border pixels contribute nothing.
MomentMatrix chebyshev2_moments(const Matrix& image, std::size_t order, const MomentOptions& opts = {});

/// Exact discrete Chebyshev moments P_rows^T * F * P_cols.
/// Throws DomainError if order >= min(rows, cols).
MomentMatrix discrete_chebyshev_moments(const Matrix& image, std::size_t order,
                                        const MomentOptions& opts = {});

/// Baseline pipeline on classical Legendre polynomials from the explicit
/// expansion. Each moment is a direct double sum with constant weights scaled
/// by (2i+1)(2j+1)/(MN), then rescaled to the orthonormal convention so the
/// result is comparable with legendre_moments.
MomentMatrix legendre_closed_form_moments(const Matrix& image, std::size_t order,
                                          const MomentOptions& opts = {});

MomentMatrix compute_moments(const Matrix& image, MomentKind kind, std::size_t order,
                             const MomentOptions& opts = {});

/// Basis the given pipeline uses along an axis with `count` pixels.
BasisMatrix axis_basis(MomentKind kind, std::size_t order, std::size_t count);

/// f(x, y) = sum_ij mu_ij p_i(x) p_j(y) on a rows x cols grid; not clamped.
/// The discrete pipeline needs the same grid the moments were taken on.
Matrix reconstruct(const MomentMatrix& moments, std::size_t rows, std::size_t cols,
                   const MomentOptions& opts = {});

/// max |F - R| / max |F|. Throws ZeroReferenceError for an all-zero F.
double reconstruction_error(const Matrix& reference, const Matrix& approximation);

/// Header line "family=<kind>,order=<q>,rows=<M>,cols=<N>", then one line per
/// i with the q+1 values of mu(i, .), 17 significant digits.
std::string format_moments_csv(const MomentMatrix& moments);
MomentMatrix parse_moments_csv(std::string_view text);
void save_moments_csv(const MomentMatrix& moments, const std::filesystem::path& path);
MomentMatrix load_moments_csv(const std::filesystem::path& path);

}  // namespace orthomom
