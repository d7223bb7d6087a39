#include "orthomom/classify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "orthomom/error.hpp"
#include "rng.hpp"

namespace orthomom {

void LabeledFeatures::validate() const {
  const std::size_t n = features.size();
  if (labels.size() != n || orientations.size() != n) {
    throw InvalidArgument("labeled features: parallel arrays differ in length");
  }
  if ((!paths.empty() && paths.size() != n) ||
      (!sample_indices.empty() && sample_indices.size() != n)) {
    throw InvalidArgument("labeled features: provenance arrays differ in length");
  }
  for (const auto& f : features) {
    if (f.size() != features.front().size()) {
      throw InvalidArgument("labeled features: inconsistent feature lengths");
    }
  }
}

LabeledFeatures LabeledFeatures::subset(std::span<const std::size_t> indices) const {
  LabeledFeatures out;
  out.descriptor_id = descriptor_id;
  for (const auto i : indices) {
    out.features.push_back(features.at(i));
    out.labels.push_back(labels.at(i));
    out.orientations.push_back(orientations.at(i));
    if (!paths.empty()) out.paths.push_back(paths[i]);
    if (!sample_indices.empty()) out.sample_indices.push_back(sample_indices[i]);
  }
  return out;
}

LabeledFeatures extract_features(const std::vector<LabeledImage>& dataset, const DescriptorId& id,
                                 std::span<const std::string> paths, unsigned threads) {
  if (!paths.empty() && paths.size() != dataset.size()) {
    throw InvalidArgument("extract_features: one path per image expected");
  }
  LabeledFeatures out;
  out.descriptor_id = id.str();
  out.features.resize(dataset.size());
  parallel_ranges(dataset.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& img = dataset[i].image;
      out.features[i] = id.source == FeatureSource::Image
                            ? image_moment_features(img, id.kind, id.order).values
                            : glcm_moment_features(img, id.kind, id.order, id.config).values;
    }
  });
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out.labels.push_back(dataset[i].label);
    out.orientations.push_back(dataset[i].orientation_degrees);
    out.sample_indices.push_back(dataset[i].sample_index);
    out.paths.push_back(paths.empty() ? std::string{} : paths[i]);
  }
  return out;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const std::size_t comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

template <class T>
T parse_number(std::string_view s, std::size_t line_no) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError(FormatError::Kind::Malformed,
                      "features CSV: bad number on line " + std::to_string(line_no));
  }
  return v;
}

constexpr std::size_t kMetaColumns = 5;

}  // namespace

std::string format_features_csv(const LabeledFeatures& data) {
  data.validate();
  const std::size_t dim = data.features.empty() ? 0 : data.features.front().size();
  std::string out = "descriptor_id,path,class,orientation_degrees,sample_index";
  for (std::size_t k = 0; k < dim; ++k) out += ",f" + std::to_string(k);
  out.push_back('\n');
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& path = data.paths.empty() ? std::string{} : data.paths[i];
    if (path.find(',') != std::string::npos || data.descriptor_id.find(',') != std::string::npos) {
      throw InvalidArgument("features CSV fields may not contain commas");
    }
    out += data.descriptor_id + "," + path + "," + std::to_string(data.labels[i]) + ",";
    append_double(out, data.orientations[i]);
    out += "," + std::to_string(data.sample_indices.empty() ? i : data.sample_indices[i]);
    for (double v : data.features[i]) {
      out.push_back(',');
      append_double(out, v);
    }
    out.push_back('\n');
  }
  return out;
}

LabeledFeatures parse_features_csv(std::string_view text) {
  LabeledFeatures data;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    auto line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (columns == 0) {
      if (fields.size() < kMetaColumns || fields[0] != "descriptor_id") {
        throw FormatError(FormatError::Kind::Malformed, "features CSV: missing header");
      }
      columns = fields.size();
      continue;
    }
    if (fields.size() != columns) {
      throw FormatError(FormatError::Kind::Malformed,
                        "features CSV: wrong field count on line " + std::to_string(line_no));
    }
    if (data.size() == 0) {
      data.descriptor_id = std::string(fields[0]);
    } else if (fields[0] != data.descriptor_id) {
      throw FormatError(FormatError::Kind::Malformed, "features CSV mixes descriptors");
    }
    data.paths.emplace_back(fields[1]);
    data.labels.push_back(parse_number<int>(fields[2], line_no));
    data.orientations.push_back(parse_number<double>(fields[3], line_no));
    data.sample_indices.push_back(parse_number<std::size_t>(fields[4], line_no));
    std::vector<double> f;
    f.reserve(columns - kMetaColumns);
    for (std::size_t k = kMetaColumns; k < columns; ++k) {
      f.push_back(parse_number<double>(fields[k], line_no));
    }
    data.features.push_back(std::move(f));
  }
  if (columns == 0) throw FormatError(FormatError::Kind::Malformed, "features CSV: empty file");
  return data;
}

void save_features_csv(const LabeledFeatures& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  out << format_features_csv(data);
  if (!out) throw IoError("write failed for " + path.string());
}

LabeledFeatures load_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_features_csv(ss.str());
}

std::vector<int> knn1(const LabeledFeatures& train, const std::vector<std::vector<double>>& test) {
  train.validate();
  if (train.size() == 0) throw InvalidArgument("knn1: empty training set");
  const std::size_t dim = train.features.front().size();
  std::vector<int> out;
  out.reserve(test.size());
  for (const auto& x : test) {
    if (x.size() != dim) {
      throw InvalidArgument("knn1: test vector has " + std::to_string(x.size()) +
                            " features, training set has " + std::to_string(dim));
    }
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const auto& t = train.features[i];
      double d = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = x[k] - t[k];
        d += diff * diff;
      }
      if (d < best) {
        best = d;
        best_index = i;
      }
    }
    out.push_back(train.labels[best_index]);
  }
  return out;
}

ConfusionMatrix::ConfusionMatrix(std::size_t class_count)
    : classes_(class_count), counts_(class_count * class_count, 0) {
  if (class_count == 0) throw InvalidArgument("confusion matrix needs at least one class");
}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::size_t n) {
  if (truth >= classes_ || predicted >= classes_) {
    throw InvalidArgument("confusion matrix: class index out of range");
  }
  counts_[truth * classes_ + predicted] += n;
}

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

double accuracy(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw InvalidArgument("accuracy of an empty confusion matrix");
  const std::size_t c = cm.class_count();
  std::vector<std::size_t> row(c, 0), col(c, 0);
  for (std::size_t t = 0; t < c; ++t) {
    for (std::size_t p = 0; p < c; ++p) {
      row[t] += cm.count(t, p);
      col[p] += cm.count(t, p);
    }
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    const std::size_t tp = cm.count(k, k);
    const std::size_t fn = row[k] - tp;
    const std::size_t fp = col[k] - tp;
    const std::size_t tn = total - tp - fn - fp;
    sum += static_cast<double>(tp + tn) / static_cast<double>(total);
  }
  return sum / static_cast<double>(c);
}

double micro_accuracy(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw InvalidArgument("accuracy of an empty confusion matrix");
  std::size_t correct = 0;
  for (std::size_t k = 0; k < cm.class_count(); ++k) correct += cm.count(k, k);
  return static_cast<double>(correct) / static_cast<double>(total);
}

Split stratified_split(std::span<const int> labels, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvalidArgument("stratified_split: fraction must be in (0, 1)");
  }
  std::map<int, std::size_t> class_size;
  for (int l : labels) ++class_size[l];
  std::map<int, std::size_t> quota;
  for (const auto& [label, n] : class_size) {
    if (n < 2) {
      throw InvalidArgument("stratified_split: class " + std::to_string(label) +
                            " has fewer than 2 samples");
    }
    quota[label] = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  }
  // One permutation for all classes, so the split depends on which samples
  // share a class but not on the label values themselves.
  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(detail::mix_seed(seed));
  detail::shuffle(std::span<std::size_t>(order), rng);

  Split split;
  for (const auto i : order) {
    auto& left = quota[labels[i]];
    if (left > 0) {
      --left;
      split.train.push_back(i);
    } else {
      split.test.push_back(i);
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::string ClassificationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["descriptor_id"] = descriptor_id;
  auto per = nlohmann::ordered_json::array();
  for (const auto& o : per_orientation) {
    per.push_back({{"angle", o.angle}, {"mean", o.mean}, {"std", o.std}, {"micro_mean", o.micro_mean}});
  }
  doc["per_orientation"] = std::move(per);
  doc["grand_mean"] = grand_mean;
  doc["micro_mean"] = micro_mean;
  doc["repeats"] = repeats;
  doc["seed"] = seed;
  return doc.dump(2) + "\n";
}

ClassificationReport rotation_protocol(const LabeledFeatures& data, std::size_t repeats,
                                       std::uint64_t seed, unsigned threads) {
  data.validate();
  if (repeats == 0) throw InvalidArgument("rotation_protocol: repeats must be positive");

  std::vector<int> classes(data.labels.begin(), data.labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  const auto class_index = [&](int label) {
    return static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), label) -
                                    classes.begin());
  };

  // Sample indices grouped by orientation, ascending angle.
  std::map<double, std::vector<std::size_t>> by_angle;
  for (std::size_t i = 0; i < data.size(); ++i) by_angle[data.orientations[i]].push_back(i);
  const auto zero = by_angle.find(0.0);
  if (zero == by_angle.end()) throw InvalidArgument("rotation_protocol: no 0-degree samples");
  std::vector<double> test_angles;
  for (const auto& [angle, idx] : by_angle) {
    if (angle != 0.0) test_angles.push_back(angle);
  }
  if (test_angles.empty()) {
    throw InvalidArgument("rotation_protocol: need at least one non-zero orientation");
  }
  const auto labels_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(data.labels[i]);
    return out;
  };

  // macro[a * repeats + r], micro likewise.
  std::vector<double> macro(test_angles.size() * repeats);
  std::vector<double> micro(test_angles.size() * repeats);
  parallel_ranges(repeats, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const std::uint64_t repeat_seed = detail::mix_seed(seed ^ detail::mix_seed(r));
      const auto& zero_idx = zero->second;
      const auto train_split = stratified_split(labels_of(zero_idx), 0.5, repeat_seed);
      std::vector<std::size_t> train_idx;
      for (auto k : train_split.train) train_idx.push_back(zero_idx[k]);
      const auto train = data.subset(train_idx);

      for (std::size_t a = 0; a < test_angles.size(); ++a) {
        const auto& angle_idx = by_angle.at(test_angles[a]);
        const auto test_split =
            stratified_split(labels_of(angle_idx), 0.5, detail::mix_seed(repeat_seed + a + 1));
        std::vector<std::vector<double>> test;
        std::vector<int> truth;
        for (auto k : test_split.test) {
          test.push_back(data.features[angle_idx[k]]);
          truth.push_back(data.labels[angle_idx[k]]);
        }
        const auto predicted = knn1(train, test);
        ConfusionMatrix cm(classes.size());
        for (std::size_t k = 0; k < truth.size(); ++k) {
          cm.add(class_index(truth[k]), class_index(predicted[k]));
        }
        macro[a * repeats + r] = accuracy(cm);
        micro[a * repeats + r] = micro_accuracy(cm);
      }
    }
  });

  ClassificationReport report;
  report.descriptor_id = data.descriptor_id;
  report.repeats = repeats;
  report.seed = seed;
  for (std::size_t a = 0; a < test_angles.size(); ++a) {
    OrientationAccuracy o;
    o.angle = test_angles[a];
    double sum = 0.0, micro_sum = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
      sum += macro[a * repeats + r];
      micro_sum += micro[a * repeats + r];
    }
    o.mean = sum / static_cast<double>(repeats);
    o.micro_mean = micro_sum / static_cast<double>(repeats);
    if (repeats > 1) {
      double ss = 0.0;
      for (std::size_t r = 0; r < repeats; ++r) {
        const double d = macro[a * repeats + r] - o.mean;
        ss += d * d;
      }
      o.std = std::sqrt(ss / static_cast<double>(repeats - 1));
    }
    report.per_orientation.push_back(o);
    report.grand_mean += o.mean;
    report.micro_mean += o.micro_mean;
  }
  report.grand_mean /= static_cast<double>(test_angles.size());
  report.micro_mean /= static_cast<double>(test_angles.size());
  return report;
}

}  // namespace orthomom
