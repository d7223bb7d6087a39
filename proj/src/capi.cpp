#include "orthomom/orthomom.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "orthomom/bench.hpp"
#include "orthomom/classify.hpp"
#include "orthomom/error.hpp"
#include "orthomom/glcm.hpp"
#include "orthomom/image.hpp"
#include "orthomom/moments.hpp"

struct om_image {
  orthomom::GrayImage image;
};
struct om_matrix {
  orthomom::Matrix matrix;
};
struct om_moments {
  orthomom::MomentMatrix moments;
};

namespace {

thread_local std::string last_error;

om_status fail(om_status status, const char* what) {
  last_error = what;
  return status;
}

// Maps the exception hierarchy onto status codes.
template <class Fn>
om_status guarded(Fn&& fn) noexcept {
  try {
    last_error.clear();
    fn();
    return OM_OK;
  } catch (const orthomom::FormatError& e) {
    return fail(OM_FORMAT, e.what());
  } catch (const orthomom::IoError& e) {
    return fail(OM_IO, e.what());
  } catch (const orthomom::DomainError& e) {
    return fail(OM_DOMAIN, e.what());
  } catch (const orthomom::InvalidArgument& e) {
    return fail(OM_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(OM_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OM_INTERNAL, e.what());
  } catch (...) {
    return fail(OM_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw orthomom::InvalidArgument(what);
}

orthomom::MomentKind family_of(const char* family) {
  require(family != nullptr, "family is null");
  const auto kind = orthomom::parse_moment_kind(family);
  if (!kind) throw orthomom::InvalidArgument(std::string("unknown family: ") + family);
  return *kind;
}

orthomom::FeatureSource source_of(const char* source) {
  require(source != nullptr, "source is null");
  if (std::strcmp(source, "image") == 0) return orthomom::FeatureSource::Image;
  if (std::strcmp(source, "glcm") == 0) return orthomom::FeatureSource::Glcm;
  throw orthomom::InvalidArgument(std::string("unknown feature source: ") + source);
}

orthomom::GlcmAngle angle_of(int degrees) {
  const auto a = orthomom::glcm_angle_from_degrees(degrees);
  if (!a) throw orthomom::InvalidArgument("angle must be 0, 45, 90 or 135");
  return *a;
}

unsigned thread_count(unsigned threads) { return threads == 0 ? 1 : threads; }

void write_text(const char* path, const std::string& text) {
  std::FILE* f = std::fopen(path, "wb");
  if (!f) throw orthomom::IoError(std::string("cannot create ") + path);
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok) throw orthomom::IoError(std::string("write failed for ") + path);
}

orthomom::DescriptorId descriptor(const char* source, const char* family, size_t order,
                                  size_t levels) {
  orthomom::DescriptorId id;
  id.kind = family_of(family);
  id.order = order;
  id.source = source_of(source);
  if (id.source == orthomom::FeatureSource::Glcm) {
    id.config.level_count = levels;
    id.config.validate();
  }
  return id;
}

}  // namespace

extern "C" {

const char* om_last_error(void) { return last_error.c_str(); }

const char* om_status_string(om_status status) {
  switch (status) {
    case OM_OK:
      return "ok";
    case OM_INVALID_ARGUMENT:
      return "invalid argument";
    case OM_DOMAIN:
      return "numeric domain error";
    case OM_IO:
      return "I/O error";
    case OM_FORMAT:
      return "format error";
    case OM_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* om_version(void) { return "1.0.0"; }

om_status om_image_load(const char* path, om_image** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new om_image{orthomom::load_image(path)};
  });
}

om_status om_image_save(const om_image* image, const char* path) {
  return guarded([&] {
    require(image && path, "null argument");
    orthomom::save_image(image->image, path);
  });
}

om_status om_image_create(size_t rows, size_t cols, const double* intensities, om_image** out) {
  return guarded([&] {
    require(intensities && out, "null argument");
    require(rows > 0 && cols > 0, "image must be nonempty");
    orthomom::Matrix m(rows, cols, std::vector<double>(intensities, intensities + rows * cols));
    *out = new om_image{orthomom::GrayImage::from_intensities(std::move(m))};
  });
}

om_status om_image_synth_model(size_t rows, size_t cols, om_image** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new om_image{orthomom::synth_model(rows, cols)};
  });
}

om_status om_image_size(const om_image* image, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(image && rows && cols, "null argument");
    *rows = image->image.rows();
    *cols = image->image.cols();
  });
}

const double* om_image_data(const om_image* image) {
  return image ? image->image.intensities().data().data() : nullptr;
}

void om_image_free(om_image* image) { delete image; }

om_status om_moments_compute(const om_image* image, const char* family, size_t order,
                             unsigned threads, om_moments** out) {
  return guarded([&] {
    require(image && out, "null argument");
    *out = new om_moments{orthomom::compute_moments(image->image.intensities(), family_of(family),
                                                    order, {thread_count(threads)})};
  });
}

om_status om_moments_load_csv(const char* path, om_moments** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new om_moments{orthomom::load_moments_csv(path)};
  });
}

om_status om_moments_save_csv(const om_moments* moments, const char* path) {
  return guarded([&] {
    require(moments && path, "null argument");
    orthomom::save_moments_csv(moments->moments, path);
  });
}

om_status om_moments_info(const om_moments* moments, size_t* order, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(moments != nullptr, "null argument");
    if (order) *order = moments->moments.order;
    if (rows) *rows = moments->moments.rows;
    if (cols) *cols = moments->moments.cols;
  });
}

const double* om_moments_data(const om_moments* moments) {
  return moments ? moments->moments.mu.data().data() : nullptr;
}

om_status om_moments_reconstruct(const om_moments* moments, size_t rows, size_t cols,
                                 unsigned threads, om_matrix** out) {
  return guarded([&] {
    require(moments && out, "null argument");
    *out = new om_matrix{
        orthomom::reconstruct(moments->moments, rows, cols, {thread_count(threads)})};
  });
}

void om_moments_free(om_moments* moments) { delete moments; }

om_status om_reconstruction_error(const om_image* reference, const om_matrix* approximation,
                                  double* out) {
  return guarded([&] {
    require(reference && approximation && out, "null argument");
    const auto& ref = reference->image.intensities();
    const auto& rec = approximation->matrix;
    // Continuous pipelines trim even dimensions, so compare on the shared block.
    require(rec.rows() <= ref.rows() && rec.cols() <= ref.cols(),
            "approximation larger than reference");
    *out = orthomom::reconstruction_error(ref.block(rec.rows(), rec.cols()), rec);
  });
}

om_status om_matrix_size(const om_matrix* m, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(m && rows && cols, "null argument");
    *rows = m->matrix.rows();
    *cols = m->matrix.cols();
  });
}

const double* om_matrix_data(const om_matrix* m) { return m ? m->matrix.data().data() : nullptr; }

om_status om_matrix_save(const om_matrix* m, const char* path) {
  return guarded([&] {
    require(m && path, "null argument");
    orthomom::save_field(m->matrix, path);
  });
}

void om_matrix_free(om_matrix* m) { delete m; }

namespace {

orthomom::CooccurrenceMatrix glcm_of(const om_image* image, size_t distance, int angle,
                                     size_t levels, int symmetric, int normalize) {
  require(image != nullptr, "null argument");
  require(levels >= 2, "GLCM needs at least 2 gray levels");
  const auto& img = image->image;
  const auto q = img.has_levels() && img.level_count() == levels ? img : img.quantized(levels);
  auto g = orthomom::glcm(q, distance, angle_of(angle), symmetric != 0);
  return normalize ? g.normalized_copy() : g;
}

}  // namespace

om_status om_glcm_compute(const om_image* image, size_t distance, int angle, size_t levels,
                          int symmetric, int normalize, om_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new om_matrix{glcm_of(image, distance, angle, levels, symmetric, normalize).counts};
  });
}

om_status om_glcm_save_csv(const om_image* image, size_t distance, int angle, size_t levels,
                           int symmetric, int normalize, const char* path) {
  return guarded([&] {
    require(path != nullptr, "null argument");
    const auto g = glcm_of(image, distance, angle, levels, symmetric, normalize);
    write_text(path, orthomom::format_glcm_csv(g));
  });
}

om_status om_features_compute(const om_image* image, const char* source, const char* family,
                              size_t order, size_t levels, double* values, size_t capacity,
                              size_t* count) {
  return guarded([&] {
    require(image && count, "null argument");
    const auto id = descriptor(source, family, order, levels);
    const auto fv = id.source == orthomom::FeatureSource::Image
                        ? orthomom::image_moment_features(image->image, id.kind, order)
                        : orthomom::glcm_moment_features(image->image, id.kind, order, id.config);
    *count = fv.values.size();
    if (values && capacity >= fv.values.size()) {
      std::memcpy(values, fv.values.data(), fv.values.size() * sizeof(double));
    }
  });
}

om_status om_features_from_manifest(const char* manifest_path, const char* source,
                                    const char* family, size_t order, size_t levels,
                                    unsigned threads, const char* out_csv) {
  return guarded([&] {
    require(manifest_path && out_csv, "null argument");
    const auto id = descriptor(source, family, order, levels);
    const std::filesystem::path manifest(manifest_path);
    const auto entries = orthomom::read_manifest(manifest);
    std::vector<orthomom::LabeledImage> images;
    std::vector<std::string> paths;
    for (const auto& e : entries) {
      images.push_back({orthomom::load_image(manifest.parent_path() / e.path), e.label,
                        e.orientation_degrees, e.sample_index});
      paths.push_back(e.path);
    }
    const auto feats = orthomom::extract_features(images, id, paths, thread_count(threads));
    orthomom::save_features_csv(feats, out_csv);
  });
}

om_status om_classify_features_csv(const char* features_csv, size_t repeats, uint64_t seed,
                                   unsigned threads, const char* out_json) {
  return guarded([&] {
    require(features_csv && out_json, "null argument");
    const auto data = orthomom::load_features_csv(features_csv);
    const auto report = orthomom::rotation_protocol(data, repeats, seed, thread_count(threads));
    write_text(out_json, report.to_json());
  });
}

om_status om_bench_run(const char* suite, size_t runs, unsigned threads, const char* out_csv) {
  return guarded([&] {
    require(suite && out_csv, "null argument");
    const auto s = orthomom::parse_bench_suite(suite);
    if (!s) throw orthomom::InvalidArgument(std::string("unknown suite: ") + suite);
    const auto records = orthomom::run_suite(*s, {runs, thread_count(threads)});
    write_text(out_csv, orthomom::format_bench_csv(records));
  });
}

om_status om_synth_dataset(size_t size, uint64_t seed, const char* out_dir) {
  return guarded([&] {
    require(out_dir != nullptr, "null argument");
    orthomom::TextureDatasetSpec spec;
    spec.size = size;
    spec.seed = seed;
    std::filesystem::create_directories(out_dir);
    orthomom::write_dataset(orthomom::synth_texture_dataset(spec), out_dir);
  });
}

}  // extern "C"
