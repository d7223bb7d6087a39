#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orthomom/matrix.hpp"

namespace orthomom {

/// Grayscale image: intensities in [0, 1] and, optionally, a quantized
/// view with level_count levels where level = min(floor(I * L), L - 1).
class GrayImage {
 public:
  GrayImage() = default;

  /// Throws InvalidArgument if any intensity is outside [0, 1].
  static GrayImage from_intensities(Matrix intensities);
  /// Levels in [0, L-1]; intensities become level / (L - 1).
  static GrayImage from_levels(std::size_t rows, std::size_t cols,
                               std::vector<std::uint32_t> levels, std::size_t level_count);

  std::size_t rows() const noexcept { return intensities_.rows(); }
  std::size_t cols() const noexcept { return intensities_.cols(); }
  const Matrix& intensities() const noexcept { return intensities_; }
  double intensity(std::size_t r, std::size_t c) const noexcept { return intensities_(r, c); }

  bool has_levels() const noexcept { return level_count_ > 0; }
  std::size_t level_count() const noexcept { return level_count_; }
  std::span<const std::uint32_t> levels() const noexcept { return levels_; }
  std::uint32_t level(std::size_t r, std::size_t c) const noexcept {
    return levels_[r * cols() + c];
  }

  /// Same intensities, levels recomputed for `level_count` levels.
  GrayImage quantized(std::size_t level_count) const;
  GrayImage transposed() const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  Matrix intensities_;
  std::vector<std::uint32_t> levels_;
  std::size_t level_count_ = 0;
};

inline constexpr std::size_t kDefaultLevelCount = 256;

/// Pixel coordinates mapped to [-1, 1]: x_k = (2k - (M + 1)) / (M - 1), k = 1..M.
struct Grid {
  std::vector<double> x;
  std::vector<double> y;
};

std::vector<double> normalized_coordinates(std::size_t count);
Grid normalized_grid(std::size_t rows, std::size_t cols);

/// Samples f(x, y) = exp(x) sin(pi x) sin(pi y) / 2 on the normalized grid
/// (x along rows, y along columns) and rescales it affinely onto [0, 1].
GrayImage synth_model(std::size_t rows, std::size_t cols);

enum class PgmEncoding { Ascii, Binary };

/// Reads P2 or P5 with maxval <= 65535. Bad content throws FormatError whose
/// kind() names the failing part; a payload of the wrong length is
/// TruncatedPayload.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(std::string_view bytes);

/// Writes the level data; images without levels are quantized to 256 levels.
void save_pgm(const GrayImage& image, const std::filesystem::path& path,
              PgmEncoding encoding = PgmEncoding::Binary);
std::string format_pgm(const GrayImage& image, PgmEncoding encoding = PgmEncoding::Binary);

/// Dense matrix text: one line per row, comma separated, 17 significant digits.
Matrix load_matrix_csv(const std::filesystem::path& path);
void save_matrix_csv(const Matrix& m, const std::filesystem::path& path);

/// Dispatches on extension: .csv is a dense intensity matrix, everything else PGM.
GrayImage load_image(const std::filesystem::path& path);
void save_image(const GrayImage& image, const std::filesystem::path& path);

/// Saves a real-valued field (e.g. a reconstruction) as 16-bit PGM after
/// clamping to [0, 1], or losslessly when the extension is .csv.
void save_field(const Matrix& field, const std::filesystem::path& path);

struct LabeledImage {
  GrayImage image;
  int label = 0;
  double orientation_degrees = 0.0;
  std::size_t sample_index = 0;
};

struct TextureDatasetSpec {
  std::size_t class_count = 5;
  std::vector<double> orientations_degrees{0.0, 30.0, 60.0, 90.0};
  std::size_t samples_per_class = 8;
  std::size_t size = 128;
  std::uint64_t seed = 1;
};

/// Rotated sinusoidal-grating textures. Each class mixes two gratings whose
/// frequency and angle spread depend on the class. Samples get random phases
/// and additive noise. Rotation is applied to the generating function, not to
/// a raster. Images are quantized to 256 levels.
/// Order: class, then orientation, then sample.
std::vector<LabeledImage> synth_texture_dataset(const TextureDatasetSpec& spec);

struct ManifestEntry {
  std::string path;
  int label = 0;
  double orientation_degrees = 0.0;
  std::size_t sample_index = 0;
};

/// JSON array of {path, class, orientation_degrees, sample_index}; paths are
/// relative to the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path);

/// Writes every image as PGM plus manifest.json into `dir`. Returns the manifest path.
std::filesystem::path write_dataset(const std::vector<LabeledImage>& dataset,
                                    const std::filesystem::path& dir);

}  // namespace orthomom
