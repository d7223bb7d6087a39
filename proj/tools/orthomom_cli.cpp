#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "orthomom/orthomom.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitDomain = 3;
constexpr int kExitInternal = 4;

int exit_code(om_status s) {
  switch (s) {
    case OM_OK:
      return 0;
    case OM_INVALID_ARGUMENT:
      return kExitUsage;
    case OM_IO:
    case OM_FORMAT:
      return kExitIo;
    case OM_DOMAIN:
      return kExitDomain;
    case OM_INTERNAL:
      break;
  }
  return kExitInternal;
}

// Carries a failed status out of a subcommand body.
struct Failure {
  om_status status;
};

void check(om_status s) {
  if (s != OM_OK) throw Failure{s};
}

struct ImageDeleter {
  void operator()(om_image* p) const { om_image_free(p); }
};
struct MomentsDeleter {
  void operator()(om_moments* p) const { om_moments_free(p); }
};
struct MatrixDeleter {
  void operator()(om_matrix* p) const { om_matrix_free(p); }
};
using ImagePtr = std::unique_ptr<om_image, ImageDeleter>;
using MomentsPtr = std::unique_ptr<om_moments, MomentsDeleter>;
using MatrixPtr = std::unique_ptr<om_matrix, MatrixDeleter>;

ImagePtr load_image(const std::string& path) {
  om_image* raw = nullptr;
  check(om_image_load(path.c_str(), &raw));
  return ImagePtr(raw);
}

const std::vector<std::string> kFamilies{"legendre", "cheb2", "dcheb", "legendre-cf"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal-polynomial image moments, GLCM texture features and benchmarks",
               "orthomom"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker thread cap")->check(CLI::PositiveNumber);

  std::string in, out, family = "legendre";
  std::size_t order = 0;

  auto* moments = app.add_subcommand("moments", "Moment matrix of an image");
  moments->add_option("--in", in, "Input image (.pgm or .csv)")->required();
  moments->add_option("--family", family)->check(CLI::IsMember(kFamilies));
  moments->add_option("--order", order, "Maximum degree q")->required();
  moments->add_option("--out", out, "Moment CSV")->required();

  std::string moments_path, error_against;
  std::size_t rows = 0, cols = 0;
  auto* reconstruct = app.add_subcommand("reconstruct", "Image from a moment matrix");
  reconstruct->add_option("--moments", moments_path)->required();
  reconstruct->add_option("--rows", rows, "Defaults to the moment file's grid");
  reconstruct->add_option("--cols", cols, "Defaults to the moment file's grid");
  reconstruct->add_option("--out", out, "Output image (.pgm clamps, .csv is exact)");
  reconstruct->add_option("--error-against", error_against, "Reference image; prints E_n");

  std::size_t distance = 1, levels = 256;
  int angle = 0;
  bool symmetric = false, normalize = false;
  auto* glcm = app.add_subcommand("glcm", "Gray-level co-occurrence matrix");
  glcm->add_option("--in", in)->required();
  glcm->add_option("--distance", distance)->check(CLI::PositiveNumber);
  glcm->add_option("--angle", angle)->check(CLI::IsMember({0, 45, 90, 135}));
  glcm->add_option("--levels", levels)->check(CLI::Range(2, 65536));
  glcm->add_flag("--symmetric", symmetric, "Count each pair in both directions");
  glcm->add_flag("--normalize", normalize, "Divide by the pair count");
  glcm->add_option("--out", out)->required();

  std::string source = "image";
  auto* features = app.add_subcommand("features", "Moment features for every image of a manifest");
  features->add_option("--in", in, "manifest.json")->required();
  features->add_option("--source", source)->check(CLI::IsMember({"image", "glcm"}));
  features->add_option("--family", family)->check(CLI::IsMember(kFamilies));
  features->add_option("--order", order)->required();
  features->add_option("--levels", levels, "Gray levels for GLCM features")
      ->check(CLI::Range(2, 65536));
  features->add_option("--out", out)->required();

  std::size_t repeats = 100;
  std::uint64_t seed = 1;
  auto* classify = app.add_subcommand("classify", "Rotation protocol with a 1-NN classifier");
  classify->add_option("--features", in)->required();
  classify->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  classify->add_option("--seed", seed);
  classify->add_option("--out", out)->required();

  std::string suite;
  std::size_t runs = 3;
  auto* bench = app.add_subcommand("bench", "Reconstruction and timing sweeps");
  bench->add_option("--suite", suite)->required()->check(
      CLI::IsMember({"reconstruction", "timing"}));
  bench->add_option("--runs", runs, "Timed runs per record (median)")->check(CLI::Range(1, 1000));
  bench->add_option("--out", out)->required();

  std::string what, out_dir = ".";
  std::size_t size = 0;
  auto* synth = app.add_subcommand("synth", "Synthetic model image or texture dataset");
  synth->add_option("--what", what)->required()->check(CLI::IsMember({"model", "dataset"}));
  synth->add_option("--size", size, "Side length (model 1023, dataset 128)")
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed);
  synth->add_option("--out-dir", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    const auto known = app.get_subcommands([&](const CLI::App* sub) {
      return argc > 1 && sub->get_name() == argv[1];
    });
    if (argc > 1 && argv[1][0] != '-' && known.empty()) {
      message = std::string("unknown subcommand '") + argv[1] + "'";
    }
    std::cerr << "error: " << message << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (moments->parsed()) {
      auto img = load_image(in);
      om_moments* raw = nullptr;
      check(om_moments_compute(img.get(), family.c_str(), order, threads, &raw));
      MomentsPtr m(raw);
      check(om_moments_save_csv(m.get(), out.c_str()));
    } else if (reconstruct->parsed()) {
      om_moments* raw = nullptr;
      check(om_moments_load_csv(moments_path.c_str(), &raw));
      MomentsPtr m(raw);
      std::size_t grid_rows = 0, grid_cols = 0;
      check(om_moments_info(m.get(), nullptr, &grid_rows, &grid_cols));
      om_matrix* rec_raw = nullptr;
      check(om_moments_reconstruct(m.get(), rows ? rows : grid_rows, cols ? cols : grid_cols,
                                   threads, &rec_raw));
      MatrixPtr rec(rec_raw);
      if (!out.empty()) check(om_matrix_save(rec.get(), out.c_str()));
      if (!error_against.empty()) {
        auto ref = load_image(error_against);
        double e = 0.0;
        check(om_reconstruction_error(ref.get(), rec.get(), &e));
        std::printf("%.17g\n", e);
      }
    } else if (glcm->parsed()) {
      auto img = load_image(in);
      check(om_glcm_save_csv(img.get(), distance, angle, levels, symmetric, normalize,
                             out.c_str()));
    } else if (features->parsed()) {
      check(om_features_from_manifest(in.c_str(), source.c_str(), family.c_str(), order, levels,
                                      threads, out.c_str()));
    } else if (classify->parsed()) {
      check(om_classify_features_csv(in.c_str(), repeats, seed, threads, out.c_str()));
    } else if (bench->parsed()) {
      check(om_bench_run(suite.c_str(), runs, threads, out.c_str()));
    } else if (synth->parsed()) {
      if (what == "dataset") {
        check(om_synth_dataset(size ? size : 128, seed, out_dir.c_str()));
      } else {
        const std::size_t side = size ? size : 1023;
        om_image* raw = nullptr;
        check(om_image_synth_model(side, side, &raw));
        ImagePtr img(raw);
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        const std::filesystem::path dir(out_dir);
        check(om_image_save(img.get(), (dir / "model.pgm").string().c_str()));
        check(om_image_save(img.get(), (dir / "model.csv").string().c_str()));
      }
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << om_last_error() << '\n';
    return exit_code(f.status);
  }
  return 0;
}
