#include "orthomom/image.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "orthomom/error.hpp"
#include "rng.hpp"

namespace orthomom {

namespace {

std::uint32_t quantize(double intensity, std::size_t level_count) {
  const double scaled = std::floor(intensity * static_cast<double>(level_count));
  const double top = static_cast<double>(level_count - 1);
  return static_cast<std::uint32_t>(std::clamp(scaled, 0.0, top));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

bool has_csv_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext == ".csv";
}

// Cursor over PGM header tokens, skipping whitespace and '#' comments.
class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view token() {
    skip_space_and_comments();
    const std::size_t begin = pos_;
    while (pos_ < bytes_.size() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') ++pos_;
    return bytes_.substr(begin, pos_ - begin);
  }

  std::optional<std::uint64_t> number() {
    const auto tok = token();
    std::uint64_t value = 0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (tok.empty() || ec != std::errc() || ptr != end) return std::nullopt;
    return value;
  }

  std::size_t position() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }
  std::string_view bytes() const noexcept { return bytes_; }

  bool at_space() const noexcept { return pos_ < bytes_.size() && is_space(bytes_[pos_]); }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

 private:
  static bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

GrayImage GrayImage::from_intensities(Matrix intensities) {
  for (double v : intensities.data()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("intensity " + format_double(v) + " outside [0, 1]");
    }
  }
  GrayImage img;
  img.intensities_ = std::move(intensities);
  return img;
}

GrayImage GrayImage::from_levels(std::size_t rows, std::size_t cols,
                                 std::vector<std::uint32_t> levels, std::size_t level_count) {
  if (level_count < 2) throw InvalidArgument("level count must be at least 2");
  if (levels.size() != rows * cols) throw InvalidArgument("level data length mismatch");
  GrayImage img;
  img.intensities_ = Matrix(rows, cols);
  const double top = static_cast<double>(level_count - 1);
  auto out = img.intensities_.data();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] >= level_count) {
      throw InvalidArgument("level " + std::to_string(levels[i]) + " exceeds level count " +
                            std::to_string(level_count));
    }
    out[i] = static_cast<double>(levels[i]) / top;
  }
  img.levels_ = std::move(levels);
  img.level_count_ = level_count;
  return img;
}

GrayImage GrayImage::quantized(std::size_t level_count) const {
  if (level_count < 2) throw InvalidArgument("level count must be at least 2");
  GrayImage img;
  img.intensities_ = intensities_;
  img.level_count_ = level_count;
  img.levels_.resize(intensities_.size());
  const auto src = intensities_.data();
  for (std::size_t i = 0; i < src.size(); ++i) img.levels_[i] = quantize(src[i], level_count);
  return img;
}

GrayImage GrayImage::transposed() const {
  GrayImage img;
  img.intensities_ = intensities_.transposed();
  img.level_count_ = level_count_;
  if (has_levels()) {
    img.levels_.resize(levels_.size());
    for (std::size_t r = 0; r < rows(); ++r) {
      for (std::size_t c = 0; c < cols(); ++c) img.levels_[c * rows() + r] = level(r, c);
    }
  }
  return img;
}

std::vector<double> normalized_coordinates(std::size_t count) {
  if (count < 2) throw InvalidArgument("normalized grid needs at least 2 points per axis");
  std::vector<double> x(count);
  const double denom = static_cast<double>(count - 1);
  // Integer numerators make x_k + x_{M+1-k} == 0 exact.
  const auto m1 = static_cast<long long>(count) + 1;
  for (std::size_t k = 1; k <= count; ++k) {
    x[k - 1] = static_cast<double>(2 * static_cast<long long>(k) - m1) / denom;
  }
  return x;
}

Grid normalized_grid(std::size_t rows, std::size_t cols) {
  return {normalized_coordinates(rows), normalized_coordinates(cols)};
}

GrayImage synth_model(std::size_t rows, std::size_t cols) {
  const auto grid = normalized_grid(rows, cols);
  Matrix f(rows, cols);
  std::vector<double> sy(cols);
  for (std::size_t c = 0; c < cols; ++c) sy[c] = std::sin(std::numbers::pi * grid.y[c]);
  for (std::size_t r = 0; r < rows; ++r) {
    const double x = grid.x[r];
    const double gx = 0.5 * std::exp(x) * std::sin(std::numbers::pi * x);
    for (std::size_t c = 0; c < cols; ++c) f(r, c) = gx * sy[c];
  }
  const auto [lo, hi] = std::minmax_element(f.data().begin(), f.data().end());
  const double min = *lo;
  const double range = *hi - *lo;
  for (double& v : f.data()) v = range > 0.0 ? (v - min) / range : 0.0;
  return GrayImage::from_intensities(std::move(f));
}

GrayImage parse_pgm(std::string_view bytes) {
  using Kind = FormatError::Kind;
  PgmReader reader(bytes);
  const auto magic = reader.token();
  if (magic != "P2" && magic != "P5") {
    throw FormatError(Kind::UnsupportedMagic,
                      "unsupported PGM magic '" + std::string(magic.substr(0, 8)) + "'");
  }
  const auto width = reader.number();
  const auto height = reader.number();
  const auto maxval = reader.number();
  if (!width || !height || !maxval) throw FormatError(Kind::MalformedHeader, "malformed PGM header");
  if (*width == 0 || *height == 0) throw FormatError(Kind::MalformedHeader, "PGM has zero size");
  if (*maxval == 0 || *maxval > 65535) {
    throw FormatError(Kind::MalformedHeader, "PGM maxval must be in 1..65535");
  }
  const std::size_t cols = *width;
  const std::size_t rows = *height;
  const std::size_t count = rows * cols;
  std::vector<std::uint32_t> levels(count);

  if (magic == "P5") {
    if (!reader.at_space()) throw FormatError(Kind::MalformedHeader, "missing whitespace after maxval");
    reader.advance(1);
    const std::size_t bpp = *maxval > 255 ? 2 : 1;
    const std::size_t have = bytes.size() - reader.position();
    if (have != count * bpp) {
      throw FormatError(Kind::TruncatedPayload, "PGM payload has " + std::to_string(have) +
                                                    " bytes, expected " +
                                                    std::to_string(count * bpp));
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + reader.position());
    for (std::size_t i = 0; i < count; ++i) {
      levels[i] = bpp == 1 ? p[i] : (static_cast<std::uint32_t>(p[2 * i]) << 8) | p[2 * i + 1];
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      reader.skip_space_and_comments();
      if (reader.position() >= bytes.size()) {
        throw FormatError(Kind::TruncatedPayload, "PGM payload has " + std::to_string(i) +
                                                      " samples, expected " + std::to_string(count));
      }
      const auto v = reader.number();
      if (!v) throw FormatError(Kind::Malformed, "non-numeric PGM sample");
      levels[i] = static_cast<std::uint32_t>(std::min<std::uint64_t>(*v, UINT32_MAX));
    }
    reader.skip_space_and_comments();
    if (reader.position() != bytes.size()) {
      throw FormatError(Kind::TruncatedPayload, "PGM payload has more than " +
                                                    std::to_string(count) + " samples");
    }
  }
  for (auto v : levels) {
    if (v > *maxval) throw FormatError(Kind::Malformed, "PGM sample exceeds maxval");
  }
  return GrayImage::from_levels(rows, cols, std::move(levels), *maxval + 1);
}

GrayImage load_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

std::string format_pgm(const GrayImage& image, PgmEncoding encoding) {
  const GrayImage q = image.has_levels() ? image : image.quantized(kDefaultLevelCount);
  if (q.level_count() > 65536) throw InvalidArgument("PGM supports at most 65536 levels");
  const std::size_t maxval = q.level_count() - 1;
  std::string out = (encoding == PgmEncoding::Binary ? "P5\n" : "P2\n") +
                    std::to_string(q.cols()) + " " + std::to_string(q.rows()) + "\n" +
                    std::to_string(maxval) + "\n";
  const auto levels = q.levels();
  if (encoding == PgmEncoding::Binary) {
    const bool wide = maxval > 255;
    out.reserve(out.size() + levels.size() * (wide ? 2 : 1));
    for (auto v : levels) {
      if (wide) out.push_back(static_cast<char>((v >> 8) & 0xff));
      out.push_back(static_cast<char>(v & 0xff));
    }
  } else {
    for (std::size_t r = 0; r < q.rows(); ++r) {
      for (std::size_t c = 0; c < q.cols(); ++c) {
        if (c > 0) out.push_back(' ');
        out += std::to_string(q.level(r, c));
      }
      out.push_back('\n');
    }
  }
  return out;
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path, PgmEncoding encoding) {
  write_file(path, format_pgm(image, encoding));
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  const auto text = read_file(path);
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::size_t fields = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      auto field = line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                       : comma - start);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw FormatError(FormatError::Kind::Malformed,
                          path.string() + ": bad number on row " + std::to_string(rows + 1));
      }
      values.push_back(v);
      ++fields;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      throw FormatError(FormatError::Kind::Malformed,
                        path.string() + ": ragged row " + std::to_string(rows + 1));
    }
    ++rows;
  }
  if (rows == 0) throw FormatError(FormatError::Kind::Malformed, path.string() + ": empty matrix");
  return Matrix(rows, cols, std::move(values));
}

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  std::string out;
  out.reserve(m.size() * 24);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c > 0) out.push_back(',');
      out += format_double(m(r, c));
    }
    out.push_back('\n');
  }
  write_file(path, out);
}

GrayImage load_image(const std::filesystem::path& path) {
  if (has_csv_extension(path)) return GrayImage::from_intensities(load_matrix_csv(path));
  return load_pgm(path);
}

void save_image(const GrayImage& image, const std::filesystem::path& path) {
  if (has_csv_extension(path)) {
    save_matrix_csv(image.intensities(), path);
  } else {
    save_pgm(image, path);
  }
}

void save_field(const Matrix& field, const std::filesystem::path& path) {
  if (has_csv_extension(path)) {
    save_matrix_csv(field, path);
    return;
  }
  Matrix clamped = field;
  for (double& v : clamped.data()) v = std::clamp(v, 0.0, 1.0);
  save_pgm(GrayImage::from_intensities(std::move(clamped)).quantized(65536), path);
}

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; std::normal_distribution is not reproducible across standard libraries.
double standard_normal(std::mt19937_64& rng) {
  double u1 = unit_uniform(rng);
  while (u1 <= 0.0) u1 = unit_uniform(rng);
  const double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

struct TextureClass {
  double frequency;  // cycles per pixel
  double frequency_ratio;
  double spread_radians;
  double contrast;
};

TextureClass texture_class(std::size_t c, std::size_t class_count) {
  const double t = class_count > 1 ? static_cast<double>(c) / static_cast<double>(class_count - 1)
                                   : 0.0;
  return {0.035 + 0.25 * t, 1.5 + 0.25 * static_cast<double>(c % 2),
          (25.0 + 20.0 * static_cast<double>(c % 3)) * std::numbers::pi / 180.0,
          0.22 + 0.06 * static_cast<double>(c % 4)};
}

}  // namespace

std::vector<LabeledImage> synth_texture_dataset(const TextureDatasetSpec& spec) {
  if (spec.class_count < 2) throw InvalidArgument("texture dataset needs at least 2 classes");
  if (spec.size < 32) throw InvalidArgument("texture size must be at least 32");
  if (spec.orientations_degrees.empty()) throw InvalidArgument("no orientations given");
  if (spec.samples_per_class < 1) throw InvalidArgument("samples_per_class must be positive");

  constexpr double kNoise = 0.03;
  constexpr double kSecondAmplitude = 0.6;
  const std::size_t n = spec.size;
  const double centre = (static_cast<double>(n) - 1.0) / 2.0;

  std::vector<LabeledImage> out;
  out.reserve(spec.class_count * spec.orientations_degrees.size() * spec.samples_per_class);
  for (std::size_t c = 0; c < spec.class_count; ++c) {
    const auto cls = texture_class(c, spec.class_count);
    for (std::size_t o = 0; o < spec.orientations_degrees.size(); ++o) {
      const double theta = spec.orientations_degrees[o] * std::numbers::pi / 180.0;
      for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
        std::mt19937_64 rng(detail::mix_seed(spec.seed ^ detail::mix_seed((c << 40) ^ (o << 20) ^ s)));
        const double phase1 = 2.0 * std::numbers::pi * unit_uniform(rng);
        const double phase2 = 2.0 * std::numbers::pi * unit_uniform(rng);
        const double jitter = 1.0 + 0.04 * (unit_uniform(rng) - 0.5);
        const double f1 = cls.frequency * jitter;
        const double f2 = f1 * cls.frequency_ratio;
        const double d1 = theta;
        const double d2 = theta + cls.spread_radians;
        const double c1 = std::cos(d1), s1 = std::sin(d1);
        const double c2 = std::cos(d2), s2 = std::sin(d2);

        std::vector<std::uint32_t> levels(n * n);
        for (std::size_t r = 0; r < n; ++r) {
          const double y = static_cast<double>(r) - centre;
          for (std::size_t col = 0; col < n; ++col) {
            const double x = static_cast<double>(col) - centre;
            const double u1 = x * c1 + y * s1;
            const double u2 = x * c2 + y * s2;
            const double wave = std::cos(2.0 * std::numbers::pi * f1 * u1 + phase1) +
                                kSecondAmplitude * std::cos(2.0 * std::numbers::pi * f2 * u2 + phase2);
            const double v = 0.5 + cls.contrast * wave / (1.0 + kSecondAmplitude) +
                             kNoise * standard_normal(rng);
            levels[r * n + col] = quantize(std::clamp(v, 0.0, 1.0), kDefaultLevelCount);
          }
        }
        out.push_back({GrayImage::from_levels(n, n, std::move(levels), kDefaultLevelCount),
                       static_cast<int>(c), spec.orientations_degrees[o], s});
      }
    }
  }
  return out;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatError::Kind::Malformed, path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw FormatError(FormatError::Kind::Malformed, "manifest must be a JSON array");
  std::vector<ManifestEntry> entries;
  entries.reserve(doc.size());
  try {
    for (const auto& item : doc) {
      entries.push_back({item.at("path").get<std::string>(), item.at("class").get<int>(),
                         item.at("orientation_degrees").get<double>(),
                         item.value("sample_index", std::size_t{0})});
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatError::Kind::Malformed, path.string() + ": " + e.what());
  }
  return entries;
}

void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path) {
  auto doc = nlohmann::json::array();
  for (const auto& e : entries) {
    doc.push_back({{"path", e.path},
                   {"class", e.label},
                   {"orientation_degrees", e.orientation_degrees},
                   {"sample_index", e.sample_index}});
  }
  write_file(path, doc.dump(2) + "\n");
}

std::filesystem::path write_dataset(const std::vector<LabeledImage>& dataset,
                                    const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  std::vector<ManifestEntry> entries;
  entries.reserve(dataset.size());
  for (const auto& item : dataset) {
    char name[96];
    std::snprintf(name, sizeof name, "class%02d_deg%g_s%03zu.pgm", item.label,
                  item.orientation_degrees, item.sample_index);
    save_pgm(item.image, dir / name);
    entries.push_back({name, item.label, item.orientation_degrees, item.sample_index});
  }
  const auto manifest = dir / "manifest.json";
  write_manifest(entries, manifest);
  return manifest;
}

}  // namespace orthomom
