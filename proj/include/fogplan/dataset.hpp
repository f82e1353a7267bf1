#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fogplan/errors.hpp"

namespace fogplan {

// Row-major feature matrix plus labels. class_ids keeps the original class
// column of every row; labels hold +1/-1 once filter_binary has run (0 before).
struct LabeledDataset {
  std::vector<double> features;
  std::vector<int8_t> labels;
  std::vector<int16_t> class_ids;
  int d = 0;

  std::size_t rows() const { return class_ids.size(); }

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * static_cast<std::size_t>(d),
            static_cast<std::size_t>(d)};
  }

  void append_row(std::span<const double> x, int16_t class_id, int8_t label) {
    features.insert(features.end(), x.begin(), x.end());
    class_ids.push_back(class_id);
    labels.push_back(label);
  }
};

// Reads a covtype-format CSV: d numeric feature columns followed by an integer
// class column, no header. ".gz" paths are decompressed transparently.
// Feature count is taken from the first row (54 for the real file).
LabeledDataset load_covtype(const std::string& path);

// Keeps only the two requested classes and maps them to +1/-1, preserving row
// order. Throws if the classes are equal or either is absent.
LabeledDataset filter_binary(const LabeledDataset& ds, int class_pos, int class_neg);

// Uniformly shuffles rows with the seeded stream, then splits at
// floor(train_fraction * rows).
std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& ds,
                                                           double train_fraction,
                                                           uint64_t seed);

struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> scale;  // population std; 1 for constant columns
};

// z-scores every feature column in place with statistics from train; test (if
// given) is transformed with the same statistics.
FeatureStats standardize_features(LabeledDataset& train, LabeledDataset* test = nullptr);

}  // namespace fogplan
