#include "fogplan/dataset.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "fogplan/rng.hpp"

namespace fogplan {

namespace {

// Line reader over plain or gzip files. zlib reads both (gzopen falls through
// to plain files), so one code path suffices.
class LineReader {
 public:
  explicit LineReader(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {}
  ~LineReader() {
    if (file_) gzclose(file_);
  }
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  bool ok() const { return file_ != nullptr; }

  bool next(std::string& line) {
    line.clear();
    char buf[1 << 14];
    for (;;) {
      if (gzgets(file_, buf, sizeof buf) == nullptr) return !line.empty();
      line += buf;
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      }
    }
  }

 private:
  gzFile file_;
};

double parse_field(const std::string& line, std::size_t begin, std::size_t end,
                   std::size_t line_no) {
  const std::string field = line.substr(begin, end - begin);
  char* stop = nullptr;
  const double v = std::strtod(field.c_str(), &stop);
  if (stop == field.c_str() || *stop != '\0' || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) + ": non-numeric field '" +
                     field + "'");
  }
  return v;
}

}  // namespace

LabeledDataset load_covtype(const std::string& path) {
  LineReader reader(path);
  if (!reader.ok()) throw Error("cannot open dataset file: " + path);

  LabeledDataset ds;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> fields;
  while (reader.next(line)) {
    ++line_no;
    if (line.empty()) continue;
    fields.clear();
    std::size_t begin = 0;
    for (;;) {
      const std::size_t comma = line.find(',', begin);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      fields.push_back(parse_field(line, begin, end, line_no));
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }
    if (fields.size() < 2) {
      throw ParseError("line " + std::to_string(line_no) + ": expected features and a class column, got " +
                       std::to_string(fields.size()) + " fields");
    }
    if (ds.d == 0) ds.d = static_cast<int>(fields.size()) - 1;
    if (fields.size() != static_cast<std::size_t>(ds.d) + 1) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(ds.d + 1) + " fields, got " +
                       std::to_string(fields.size()));
    }
    const double cls = fields.back();
    if (cls != std::floor(cls) || cls < 1 || cls > 7) {
      throw ParseError("line " + std::to_string(line_no) + ": class label " +
                       std::to_string(cls) + " outside 1..7");
    }
    ds.features.insert(ds.features.end(), fields.begin(), fields.end() - 1);
    ds.class_ids.push_back(static_cast<int16_t>(cls));
    ds.labels.push_back(0);
  }
  if (ds.rows() == 0) throw ParseError("dataset file has no data rows: " + path);
  return ds;
}

LabeledDataset filter_binary(const LabeledDataset& ds, int class_pos, int class_neg) {
  if (class_pos < 1 || class_pos > 7 || class_neg < 1 || class_neg > 7) {
    throw Error("class ids must be in 1..7");
  }
  if (class_pos == class_neg) throw Error("class ids must differ");

  LabeledDataset out;
  out.d = ds.d;
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const int cls = ds.class_ids[i];
    if (cls != class_pos && cls != class_neg) continue;
    const bool pos = cls == class_pos;
    out.append_row(ds.row(i), ds.class_ids[i], pos ? int8_t{1} : int8_t{-1});
    (pos ? n_pos : n_neg) += 1;
  }
  if (n_pos == 0) throw Error("class " + std::to_string(class_pos) + " absent from dataset");
  if (n_neg == 0) throw Error("class " + std::to_string(class_neg) + " absent from dataset");
  return out;
}

std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& ds,
                                                           double train_fraction,
                                                           uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("train_fraction must be in (0, 1)");
  }
  std::vector<uint32_t> order(ds.rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<uint32_t>(i);
  Rng rng(seed);
  rng.shuffle(order);

  const std::size_t n_train =
      static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(ds.rows())));
  LabeledDataset train, test;
  train.d = test.d = ds.d;
  train.features.reserve(n_train * ds.d);
  for (std::size_t i = 0; i < order.size(); ++i) {
    LabeledDataset& dst = i < n_train ? train : test;
    const uint32_t r = order[i];
    dst.append_row(ds.row(r), ds.class_ids[r], ds.labels[r]);
  }
  return {std::move(train), std::move(test)};
}

FeatureStats standardize_features(LabeledDataset& train, LabeledDataset* test) {
  const int d = train.d;
  const std::size_t n = train.rows();
  if (n == 0) throw Error("cannot standardize an empty training set");

  FeatureStats stats;
  stats.mean.assign(d, 0.0);
  stats.scale.assign(d, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = train.row(i);
    for (int j = 0; j < d; ++j) stats.mean[j] += x[j];
  }
  for (int j = 0; j < d; ++j) stats.mean[j] /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = train.row(i);
    for (int j = 0; j < d; ++j) {
      const double c = x[j] - stats.mean[j];
      var[j] += c * c;
    }
  }
  for (int j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(n));
    stats.scale[j] = sd > 1e-12 ? sd : 1.0;  // constant columns stay centred only
  }

  auto apply = [&](LabeledDataset& ds) {
    for (std::size_t i = 0; i < ds.rows(); ++i) {
      double* x = ds.features.data() + i * static_cast<std::size_t>(d);
      for (int j = 0; j < d; ++j) x[j] = (x[j] - stats.mean[j]) / stats.scale[j];
    }
  };
  apply(train);
  if (test) apply(*test);
  return stats;
}

}  // namespace fogplan
