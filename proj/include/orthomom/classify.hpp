#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "orthomom/glcm.hpp"
#include "orthomom/image.hpp"

namespace orthomom {

/// Parallel arrays describing one feature set extracted from a dataset.
struct LabeledFeatures {
  std::string descriptor_id;
  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  std::vector<double> orientations;
  std::vector<std::string> paths;
  std::vector<std::size_t> sample_indices;

  std::size_t size() const noexcept { return features.size(); }
  /// Equal array lengths and a common feature length.
  void validate() const;
  LabeledFeatures subset(std::span<const std::size_t> indices) const;
};

/// Extracts `id` from every image, in dataset order.
LabeledFeatures extract_features(const std::vector<LabeledImage>& dataset, const DescriptorId& id,
                                 std::span<const std::string> paths = {}, unsigned threads = 1);

/// Header "descriptor_id,path,class,orientation_degrees,sample_index,f0,...",
/// one row per sample.
std::string format_features_csv(const LabeledFeatures& data);
LabeledFeatures parse_features_csv(std::string_view text);
void save_features_csv(const LabeledFeatures& data, const std::filesystem::path& path);
LabeledFeatures load_features_csv(const std::filesystem::path& path);

/// 1-nearest-neighbour labels under Euclidean distance; ties go to the
/// lowest training index.
std::vector<int> knn1(const LabeledFeatures& train, const std::vector<std::vector<double>>& test);

class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t class_count);

  void add(std::size_t truth, std::size_t predicted, std::size_t n = 1);
  std::size_t count(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * classes_ + predicted];
  }
  std::size_t class_count() const noexcept { return classes_; }
  std::size_t total() const noexcept;

 private:
  std::size_t classes_;
  std::vector<std::size_t> counts_;
};

/// Mean over classes of the one-vs-rest accuracy (TP + TN) / total.
double accuracy(const ConfusionMatrix& cm);
/// Fraction of correctly classified samples.
double micro_accuracy(const ConfusionMatrix& cm);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded permutation of all samples; each class sends its first
/// floor(fraction * n_c) members in that order to train.
/// Index lists are returned sorted. Throws InvalidArgument for classes with
/// fewer than 2 samples.
Split stratified_split(std::span<const int> labels, double fraction, std::uint64_t seed);

struct OrientationAccuracy {
  double angle = 0.0;
  double mean = 0.0;
  double std = 0.0;
  double micro_mean = 0.0;
};

struct ClassificationReport {
  std::string descriptor_id;
  std::vector<OrientationAccuracy> per_orientation;
  double grand_mean = 0.0;
  double micro_mean = 0.0;
  std::size_t repeats = 0;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

/// Each repeat trains on a stratified half of the 0-degree samples and tests on
/// a stratified half of every other orientation. Repeats use seeds derived from
/// (seed, repeat), so the report is reproducible bit for bit and independent of
/// `threads`.
ClassificationReport rotation_protocol(const LabeledFeatures& data, std::size_t repeats,
                                       std::uint64_t seed, unsigned threads = 1);

}  // namespace orthomom
