#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "orthomom/image.hpp"
#include "orthomom/matrix.hpp"
#include "orthomom/moments.hpp"

namespace orthomom {

enum class GlcmAngle { Deg0 = 0, Deg45 = 45, Deg90 = 90, Deg135 = 135 };

std::optional<GlcmAngle> glcm_angle_from_degrees(int degrees) noexcept;
inline int degrees(GlcmAngle a) noexcept { return static_cast<int>(a); }

/// (row, col) displacement of the second pixel of a pair:
/// 0 -> (0, d), 45 -> (-d, d), 90 -> (-d, 0), 135 -> (-d, -d).
struct PixelOffset {
  long row;
  long col;
};
PixelOffset glcm_offset(std::size_t distance, GlcmAngle angle) noexcept;

struct GlcmConfig {
  std::size_t distance = 1;
  std::vector<GlcmAngle> angles{GlcmAngle::Deg0, GlcmAngle::Deg45, GlcmAngle::Deg90,
                                GlcmAngle::Deg135};
  std::size_t level_count = kDefaultLevelCount;
  /// Count each pair in both directions. Off by default.
  bool symmetric = false;

  void validate() const;
};

struct CooccurrenceMatrix {
  Matrix counts;  // level_count x level_count
  std::size_t distance = 1;
  GlcmAngle angle = GlcmAngle::Deg0;
  bool symmetric = false;
  bool normalized = false;

  double total() const;
  /// Entries divided by their sum (the probability form). An empty GLCM
  /// (no valid pairs) stays all zero.
  CooccurrenceMatrix normalized_copy() const;
};

/// Number of in-bounds pixel pairs for an offset (single direction).
std::size_t glcm_pair_count(std::size_t rows, std::size_t cols, std::size_t distance,
                            GlcmAngle angle) noexcept;

/// counts(a, b) = #{p : level(p) = a, level(p + offset) = b}, out-of-bounds
/// pairs skipped. Throws InvalidArgument if the image has no levels.
CooccurrenceMatrix glcm(const GrayImage& image, std::size_t distance, GlcmAngle angle,
                        bool symmetric = false);

/// (q + 1)(q + 2) / 2
std::size_t triangular_size(std::size_t order) noexcept;

/// Entries mu(i, j) with i + j <= q, i outer, j inner.
std::vector<double> triangular_entries(const Matrix& mu, std::size_t order);

enum class FeatureSource { Image, Glcm };

struct DescriptorId {
  MomentKind kind = MomentKind::DiscreteChebyshev;
  std::size_t order = 0;
  FeatureSource source = FeatureSource::Image;
  GlcmConfig config;  // meaningful only for FeatureSource::Glcm

  /// e.g. "dcheb/q10/glcm/d1/a0-45-90-135/L256" or "legendre/q3/image".
  std::string str() const;
};

struct FeatureVector {
  DescriptorId id;
  std::vector<double> values;
};

/// Triangular moment entries of the image itself.
FeatureVector image_moment_features(const GrayImage& image, MomentKind kind, std::size_t order,
                                    const MomentOptions& opts = {});

/// For each configured angle: GLCM, normalized to sum 1, treated as an L x L
/// image, moments of order q, triangular entries; blocks concatenated in angle
/// order. Images are requantized when their level count differs from the
/// configuration.
FeatureVector glcm_moment_features(const GrayImage& image, MomentKind kind, std::size_t order,
                                   const GlcmConfig& config, const MomentOptions& opts = {});

/// Matrix CSV of a GLCM preceded by "distance=..,angle=..,levels=..,symmetric=..,normalized=..".
std::string format_glcm_csv(const CooccurrenceMatrix& m);

}  // namespace orthomom
