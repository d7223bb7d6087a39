#include "orthomom/glcm.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "orthomom/error.hpp"

namespace orthomom {

std::optional<GlcmAngle> glcm_angle_from_degrees(int deg) noexcept {
  switch (deg) {
    case 0:
      return GlcmAngle::Deg0;
    case 45:
      return GlcmAngle::Deg45;
    case 90:
      return GlcmAngle::Deg90;
    case 135:
      return GlcmAngle::Deg135;
    default:
      return std::nullopt;
  }
}

PixelOffset glcm_offset(std::size_t distance, GlcmAngle angle) noexcept {
  const long d = static_cast<long>(distance);
  switch (angle) {
    case GlcmAngle::Deg0:
      return {0, d};
    case GlcmAngle::Deg45:
      return {-d, d};
    case GlcmAngle::Deg90:
      return {-d, 0};
    case GlcmAngle::Deg135:
      return {-d, -d};
  }
  return {0, d};
}

void GlcmConfig::validate() const {
  if (distance < 1) throw InvalidArgument("GLCM distance must be at least 1");
  if (angles.empty()) throw InvalidArgument("GLCM needs at least one angle");
  if (level_count < 2) throw InvalidArgument("GLCM needs at least 2 gray levels");
}

double CooccurrenceMatrix::total() const {
  const auto d = counts.data();
  return std::accumulate(d.begin(), d.end(), 0.0);
}

CooccurrenceMatrix CooccurrenceMatrix::normalized_copy() const {
  CooccurrenceMatrix out = *this;
  const double sum = total();
  if (sum > 0.0) {
    for (double& v : out.counts.data()) v /= sum;
  }
  out.normalized = true;
  return out;
}

std::size_t glcm_pair_count(std::size_t rows, std::size_t cols, std::size_t distance,
                            GlcmAngle angle) noexcept {
  const auto off = glcm_offset(distance, angle);
  const std::size_t dr = static_cast<std::size_t>(off.row < 0 ? -off.row : off.row);
  const std::size_t dc = static_cast<std::size_t>(off.col < 0 ? -off.col : off.col);
  if (dr >= rows || dc >= cols) return 0;
  return (rows - dr) * (cols - dc);
}

CooccurrenceMatrix glcm(const GrayImage& image, std::size_t distance, GlcmAngle angle,
                        bool symmetric) {
  if (!image.has_levels()) throw InvalidArgument("GLCM needs a quantized image");
  if (distance < 1) throw InvalidArgument("GLCM distance must be at least 1");
  const std::size_t levels = image.level_count();
  CooccurrenceMatrix out{Matrix(levels, levels), distance, angle, symmetric, false};
  const auto off = glcm_offset(distance, angle);
  const long rows = static_cast<long>(image.rows());
  const long cols = static_cast<long>(image.cols());
  // Restrict the first pixel so that its partner stays in bounds.
  const long r0 = std::max(0L, -off.row), r1 = std::min(rows, rows - off.row);
  const long c0 = std::max(0L, -off.col), c1 = std::min(cols, cols - off.col);
  for (long r = r0; r < r1; ++r) {
    for (long c = c0; c < c1; ++c) {
      const auto a = image.level(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      const auto b = image.level(static_cast<std::size_t>(r + off.row),
                                 static_cast<std::size_t>(c + off.col));
      out.counts(a, b) += 1.0;
      if (symmetric) out.counts(b, a) += 1.0;
    }
  }
  return out;
}

std::size_t triangular_size(std::size_t order) noexcept { return (order + 1) * (order + 2) / 2; }

std::vector<double> triangular_entries(const Matrix& mu, std::size_t order) {
  if (mu.rows() < order + 1 || mu.cols() < order + 1) {
    throw InvalidArgument("moment matrix smaller than requested order");
  }
  std::vector<double> out;
  out.reserve(triangular_size(order));
  for (std::size_t i = 0; i <= order; ++i) {
    for (std::size_t j = 0; i + j <= order; ++j) out.push_back(mu(i, j));
  }
  return out;
}

std::string DescriptorId::str() const {
  std::string s = std::string(to_string(kind)) + "/q" + std::to_string(order);
  if (source == FeatureSource::Image) return s + "/image";
  s += "/glcm/d" + std::to_string(config.distance) + "/a";
  for (std::size_t i = 0; i < config.angles.size(); ++i) {
    if (i > 0) s += "-";
    s += std::to_string(degrees(config.angles[i]));
  }
  s += "/L" + std::to_string(config.level_count);
  if (config.symmetric) s += "/sym";
  return s;
}

FeatureVector image_moment_features(const GrayImage& image, MomentKind kind, std::size_t order,
                                    const MomentOptions& opts) {
  const auto m = compute_moments(image.intensities(), kind, order, opts);
  return {{kind, order, FeatureSource::Image, {}}, triangular_entries(m.mu, order)};
}

FeatureVector glcm_moment_features(const GrayImage& image, MomentKind kind, std::size_t order,
                                   const GlcmConfig& config, const MomentOptions& opts) {
  config.validate();
  const GrayImage quantized = image.has_levels() && image.level_count() == config.level_count
                                  ? image
                                  : image.quantized(config.level_count);
  FeatureVector out{{kind, order, FeatureSource::Glcm, config}, {}};
  out.values.reserve(config.angles.size() * triangular_size(order));
  for (const auto angle : config.angles) {
    const auto p = glcm(quantized, config.distance, angle, config.symmetric).normalized_copy();
    const auto m = compute_moments(p.counts, kind, order, opts);
    const auto block = triangular_entries(m.mu, order);
    out.values.insert(out.values.end(), block.begin(), block.end());
  }
  return out;
}

std::string format_glcm_csv(const CooccurrenceMatrix& m) {
  std::string out = "distance=" + std::to_string(m.distance) +
                    ",angle=" + std::to_string(degrees(m.angle)) +
                    ",levels=" + std::to_string(m.counts.rows()) +
                    ",symmetric=" + (m.symmetric ? "1" : "0") +
                    ",normalized=" + (m.normalized ? "1" : "0") + "\n";
  char buf[32];
  for (std::size_t r = 0; r < m.counts.rows(); ++r) {
    for (std::size_t c = 0; c < m.counts.cols(); ++c) {
      if (c > 0) out.push_back(',');
      const int n = std::snprintf(buf, sizeof buf, "%.17g", m.counts(r, c));
      out.append(buf, static_cast<std::size_t>(n));
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace orthomom
