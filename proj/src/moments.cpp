#include "orthomom/moments.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "orthomom/error.hpp"
#include "orthomom/image.hpp"
#include "orthomom/quadrature.hpp"

namespace orthomom {

std::string_view to_string(MomentKind kind) noexcept {
  switch (kind) {
    case MomentKind::Legendre:
      return "legendre";
    case MomentKind::Chebyshev2:
      return "cheb2";
    case MomentKind::DiscreteChebyshev:
      return "dcheb";
    case MomentKind::LegendreClosedForm:
      return "legendre-cf";
  }
  return "unknown";
}

std::optional<MomentKind> parse_moment_kind(std::string_view name) noexcept {
  if (name == "legendre") return MomentKind::Legendre;
  if (name == "cheb2") return MomentKind::Chebyshev2;
  if (name == "dcheb") return MomentKind::DiscreteChebyshev;
  if (name == "legendre-cf") return MomentKind::LegendreClosedForm;
  return std::nullopt;
}

PolynomialFamily MomentMatrix::row_family() const {
  switch (kind) {
    case MomentKind::Chebyshev2:
      return PolynomialFamily::chebyshev_second_kind();
    case MomentKind::DiscreteChebyshev:
      return PolynomialFamily::discrete_chebyshev(rows);
    case MomentKind::Legendre:
    case MomentKind::LegendreClosedForm:
      break;
  }
  return PolynomialFamily::legendre();
}

Matrix trim_to_odd(const Matrix& image) {
  const std::size_t rows = image.rows() % 2 == 0 ? image.rows() - 1 : image.rows();
  const std::size_t cols = image.cols() % 2 == 0 ? image.cols() - 1 : image.cols();
  if (rows == image.rows() && cols == image.cols()) return image;
  return image.block(rows, cols);
}

BasisMatrix axis_basis(MomentKind kind, std::size_t order, std::size_t count) {
  switch (kind) {
    case MomentKind::Legendre:
      return evaluate_basis(recurrence_coefficients(PolynomialFamily::legendre(), order),
                            normalized_coordinates(count));
    case MomentKind::Chebyshev2:
      return evaluate_basis(
          recurrence_coefficients(PolynomialFamily::chebyshev_second_kind(), order),
          normalized_coordinates(count));
    case MomentKind::DiscreteChebyshev:
      if (order >= count) {
        throw DomainError("discrete Chebyshev order " + std::to_string(order) +
                          " needs more than " + std::to_string(count) + " pixels per axis");
      }
      return discrete_chebyshev_basis(count, order);
    case MomentKind::LegendreClosedForm:
      return legendre_closed_form(order, normalized_coordinates(count));
  }
  throw InvalidArgument("unsupported moment kind");
}

namespace {

void require_continuous_size(const Matrix& image) {
  if (image.rows() < 3 || image.cols() < 3) {
    throw InvalidArgument("continuous moments need an image of at least 3x3 pixels");
  }
}

// Basis rows scaled by the Simpson weight and the family's weight function.
Matrix weighted_basis(const BasisMatrix& basis, const PolynomialFamily& family) {
  const auto rule = simpson_rule(basis.points.size());
  Matrix w = basis.values;
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const double factor = rule.scale * rule.weights[r] * family.weight(basis.points[r]);
    for (double& v : w.row(r)) v *= factor;
  }
  return w;
}

MomentMatrix simpson_moments(const Matrix& image, std::size_t order, MomentKind kind,
                             const PolynomialFamily& family, const MomentOptions& opts) {
  require_continuous_size(image);
  const Matrix f = trim_to_odd(image);
  const auto coef = recurrence_coefficients(family, order);
  const auto bx = evaluate_basis(coef, normalized_coordinates(f.rows()));
  const Matrix wx = weighted_basis(bx, family);
  const Matrix wy = f.cols() == f.rows()
                        ? wx
                        : weighted_basis(evaluate_basis(coef, normalized_coordinates(f.cols())),
                                         family);
  const Matrix g = multiply(f, wy, opts.threads);
  return {kind, order, f.rows(), f.cols(), multiply_at_b(wx, g, opts.threads)};
}

}  // namespace

MomentMatrix legendre_moments(const Matrix& image, std::size_t order, const MomentOptions& opts) {
  return simpson_moments(image, order, MomentKind::Legendre, PolynomialFamily::legendre(), opts);
}

MomentMatrix chebyshev2_moments(const Matrix& image, std::size_t order, const MomentOptions& opts) {
  return simpson_moments(image, order, MomentKind::Chebyshev2,
                         PolynomialFamily::chebyshev_second_kind(), opts);
}

MomentMatrix discrete_chebyshev_moments(const Matrix& image, std::size_t order,
                                        const MomentOptions& opts) {
  if (image.empty()) throw InvalidArgument("empty image");
  if (order >= std::min(image.rows(), image.cols())) {
    throw DomainError("discrete Chebyshev order " + std::to_string(order) +
                      " must be below min(rows, cols) = " +
                      std::to_string(std::min(image.rows(), image.cols())));
  }
  const auto px = discrete_chebyshev_basis(image.rows(), order);
  const Matrix g = image.cols() == image.rows()
                       ? multiply(image, px.values, opts.threads)
                       : multiply(image, discrete_chebyshev_basis(image.cols(), order).values,
                                  opts.threads);
  return {MomentKind::DiscreteChebyshev, order, image.rows(), image.cols(),
          multiply_at_b(px.values, g, opts.threads)};
}

MomentMatrix legendre_closed_form_moments(const Matrix& image, std::size_t order,
                                          const MomentOptions& opts) {
  require_continuous_size(image);
  const Matrix f = trim_to_odd(image);
  const std::size_t rows = f.rows();
  const std::size_t cols = f.cols();
  // Classical P_i, stored transposed so each polynomial is a contiguous row.
  const Matrix px =
      legendre_closed_form(order, normalized_coordinates(rows), LegendreScaling::Classical)
          .values.transposed();
  const Matrix py =
      legendre_closed_form(order, normalized_coordinates(cols), LegendreScaling::Classical)
          .values.transposed();

  MomentMatrix out{MomentKind::LegendreClosedForm, order, rows, cols, Matrix(order + 1, order + 1)};
  parallel_ranges(order + 1, opts.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto pi = px.row(i);
      const double si = (2.0 * static_cast<double>(i) + 1.0) / 2.0;
      for (std::size_t j = 0; j <= order; ++j) {
        const auto pj = py.row(j);
        double sum = 0.0;
        for (std::size_t k = 0; k < rows; ++k) {
          const auto frow = f.row(k);
          for (std::size_t l = 0; l < cols; ++l) sum += pi[k] * pj[l] * frow[l];
        }
        const double lambda = naive_moment_scale(i, j, rows, cols) * sum;
        // lambda multiplies P_i P_j; the orthonormal p_i = sqrt((2i+1)/2) P_i.
        const double sj = (2.0 * static_cast<double>(j) + 1.0) / 2.0;
        out.mu(i, j) = lambda / std::sqrt(si * sj);
      }
    }
  });
  return out;
}

MomentMatrix compute_moments(const Matrix& image, MomentKind kind, std::size_t order,
                             const MomentOptions& opts) {
  switch (kind) {
    case MomentKind::Legendre:
      return legendre_moments(image, order, opts);
    case MomentKind::Chebyshev2:
      return chebyshev2_moments(image, order, opts);
    case MomentKind::DiscreteChebyshev:
      return discrete_chebyshev_moments(image, order, opts);
    case MomentKind::LegendreClosedForm:
      return legendre_closed_form_moments(image, order, opts);
  }
  throw InvalidArgument("unsupported moment kind");
}

Matrix reconstruct(const MomentMatrix& moments, std::size_t rows, std::size_t cols,
                   const MomentOptions& opts) {
  if (moments.mu.rows() != moments.order + 1 || moments.mu.cols() != moments.order + 1) {
    throw InvalidArgument("moment matrix shape does not match its order");
  }
  if (moments.kind == MomentKind::DiscreteChebyshev &&
      (rows != moments.rows || cols != moments.cols)) {
    throw InvalidArgument("discrete Chebyshev moments of a " + std::to_string(moments.rows) +
                          "x" + std::to_string(moments.cols) +
                          " image cannot be reconstructed on a " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " grid");
  }
  const auto px = axis_basis(moments.kind, moments.order, rows);
  const Matrix t = multiply(px.values, moments.mu, opts.threads);
  if (cols == rows) return multiply_a_bt(t, px.values, opts.threads);
  return multiply_a_bt(t, axis_basis(moments.kind, moments.order, cols).values, opts.threads);
}

double reconstruction_error(const Matrix& reference, const Matrix& approximation) {
  if (reference.rows() != approximation.rows() || reference.cols() != approximation.cols()) {
    throw InvalidArgument("reconstruction_error: image shapes differ");
  }
  const double scale = max_abs(reference);
  if (scale == 0.0) throw ZeroReferenceError("relative error against an all-zero image");
  return max_abs_difference(reference, approximation) / scale;
}

std::string format_moments_csv(const MomentMatrix& moments) {
  std::string out = "family=" + std::string(to_string(moments.kind)) +
                    ",order=" + std::to_string(moments.order) +
                    ",rows=" + std::to_string(moments.rows) +
                    ",cols=" + std::to_string(moments.cols) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < moments.mu.rows(); ++i) {
    for (std::size_t j = 0; j < moments.mu.cols(); ++j) {
      if (j > 0) out.push_back(',');
      const int n = std::snprintf(buf, sizeof buf, "%.17g", moments.mu(i, j));
      out.append(buf, static_cast<std::size_t>(n));
    }
    out.push_back('\n');
  }
  return out;
}

namespace {

[[noreturn]] void bad_moments(const std::string& what) {
  throw FormatError(FormatError::Kind::Malformed, "moment CSV: " + what);
}

std::size_t parse_count(std::string_view text, const char* field) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    bad_moments(std::string("bad value for ") + field);
  }
  return v;
}

}  // namespace

MomentMatrix parse_moments_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    pos = eol + 1;
  }
  if (lines.empty()) bad_moments("empty input");

  MomentMatrix m;
  bool have_kind = false, have_order = false, have_rows = false, have_cols = false;
  std::string_view header = lines.front();
  while (!header.empty()) {
    const std::size_t comma = header.find(',');
    const auto item = header.substr(0, comma);
    header = comma == std::string_view::npos ? std::string_view{} : header.substr(comma + 1);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) bad_moments("header field without '='");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "family") {
      const auto kind = parse_moment_kind(value);
      if (!kind) bad_moments("unknown family '" + std::string(value) + "'");
      m.kind = *kind;
      have_kind = true;
    } else if (key == "order") {
      m.order = parse_count(value, "order");
      have_order = true;
    } else if (key == "rows") {
      m.rows = parse_count(value, "rows");
      have_rows = true;
    } else if (key == "cols") {
      m.cols = parse_count(value, "cols");
      have_cols = true;
    }
  }
  if (!(have_kind && have_order && have_rows && have_cols)) bad_moments("incomplete header");
  const std::size_t n = m.order + 1;
  if (lines.size() != n + 1) bad_moments("expected " + std::to_string(n) + " data rows");
  m.mu = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string_view line = lines[i + 1];
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t comma = line.find(',');
      const auto field = line.substr(0, comma);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        bad_moments("bad number in row " + std::to_string(i));
      }
      m.mu(i, j) = v;
      if ((comma == std::string_view::npos) != (j + 1 == n)) {
        bad_moments("row " + std::to_string(i) + " has the wrong number of fields");
      }
      line = comma == std::string_view::npos ? std::string_view{} : line.substr(comma + 1);
    }
  }
  return m;
}

void save_moments_csv(const MomentMatrix& moments, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  out << format_moments_csv(moments);
  if (!out) throw IoError("write failed for " + path.string());
}

MomentMatrix load_moments_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_moments_csv(ss.str());
}

}  // namespace orthomom
