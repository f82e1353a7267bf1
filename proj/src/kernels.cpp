#include "fogplan/kernels.hpp"

#include <cmath>
#include <cstring>
#include <vector>

namespace fogplan {

namespace {

constexpr std::size_t kBlock = 256;  // samples per reduction block

// log(1 + exp(z)) without overflow
inline double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// sigma(-z) = 1 / (1 + exp(z)); saturates cleanly at +-inf
inline double sigmoid_neg(double z) { return 1.0 / (1.0 + std::exp(z)); }

inline void check_shard(const ShardView& shard, std::span<const double> w) {
  if (shard.idx.empty()) throw Error("logistic kernel: empty shard");
  const std::size_t d = static_cast<std::size_t>(shard.ds->d);
  if (w.size() != d && w.size() != d + 1) {
    throw Error("logistic kernel: weight length does not match feature count");
  }
}

inline double margin(const LabeledDataset& ds, uint32_t row, std::span<const double> w) {
  const std::size_t d = static_cast<std::size_t>(ds.d);
  const double* x = ds.features.data() + static_cast<std::size_t>(row) * d;
  double z = w.size() > d ? w[d] : 0.0;  // intercept
  for (std::size_t j = 0; j < d; ++j) z += x[j] * w[j];
  return static_cast<double>(ds.labels[row]) * z;
}

}  // namespace

double sample_margin(const LabeledDataset& ds, uint32_t row, std::span<const double> w) {
  return margin(ds, row, w);
}

double logistic_loss(const ShardView& shard, std::span<const double> w, double lambda) {
  check_shard(shard, w);
  const LabeledDataset& ds = *shard.ds;
  const std::size_t n = shard.idx.size();
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;

  // Block partials are combined serially in block order so the sum is
  // identical for any thread count.
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < static_cast<long>(nblocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = begin + kBlock < n ? begin + kBlock : n;
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += softplus(-margin(ds, shard.idx[i], w));
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double loss = 0.0;
  for (double p : partial) loss += p;

  double wsq = 0.0;
  for (double wj : w) wsq += wj * wj;
  return (loss + lambda * wsq) / static_cast<double>(n);
}

void logistic_gradient(const ShardView& shard, std::span<const double> w, double lambda,
                       std::span<double> grad, uint64_t& eval_counter) {
  check_shard(shard, w);
  if (grad.size() != w.size()) throw Error("logistic kernel: gradient length mismatch");
  const LabeledDataset& ds = *shard.ds;
  const std::size_t d = static_cast<std::size_t>(ds.d);
  const std::size_t wd = w.size();
  const std::size_t n = shard.idx.size();
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;

  std::vector<double> partial(nblocks * wd, 0.0);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < static_cast<long>(nblocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = begin + kBlock < n ? begin + kBlock : n;
    double* g = partial.data() + static_cast<std::size_t>(b) * wd;
    for (std::size_t i = begin; i < end; ++i) {
      const uint32_t row = shard.idx[i];
      const double y = static_cast<double>(ds.labels[row]);
      const double c = -y * sigmoid_neg(margin(ds, row, w));
      const double* x = ds.features.data() + static_cast<std::size_t>(row) * d;
      for (std::size_t j = 0; j < d; ++j) g[j] += c * x[j];
      if (wd > d) g[d] += c;
    }
  }

  std::memset(grad.data(), 0, wd * sizeof(double));
  for (std::size_t b = 0; b < nblocks; ++b) {
    const double* g = partial.data() + b * wd;
    for (std::size_t j = 0; j < wd; ++j) grad[j] += g[j];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < wd; ++j) grad[j] = grad[j] * inv_n + 2.0 * lambda * inv_n * w[j];

  eval_counter += n;
}

namespace reference {

double logistic_loss(const ShardView& shard, std::span<const double> w, double lambda) {
  check_shard(shard, w);
  const LabeledDataset& ds = *shard.ds;
  double loss = 0.0;
  for (uint32_t row : shard.idx) loss += softplus(-margin(ds, row, w));
  double wsq = 0.0;
  for (double wj : w) wsq += wj * wj;
  return (loss + lambda * wsq) / static_cast<double>(shard.idx.size());
}

void logistic_gradient(const ShardView& shard, std::span<const double> w, double lambda,
                       std::span<double> grad, uint64_t& eval_counter) {
  check_shard(shard, w);
  if (grad.size() != w.size()) throw Error("logistic kernel: gradient length mismatch");
  const LabeledDataset& ds = *shard.ds;
  const std::size_t d = static_cast<std::size_t>(ds.d);
  std::memset(grad.data(), 0, grad.size() * sizeof(double));
  for (uint32_t row : shard.idx) {
    const double y = static_cast<double>(ds.labels[row]);
    const double c = -y * sigmoid_neg(margin(ds, row, w));
    const double* x = ds.features.data() + static_cast<std::size_t>(row) * d;
    for (std::size_t j = 0; j < d; ++j) grad[j] += c * x[j];
    if (grad.size() > d) grad[d] += c;
  }
  const double inv_n = 1.0 / static_cast<double>(shard.idx.size());
  for (std::size_t j = 0; j < grad.size(); ++j) {
    grad[j] = grad[j] * inv_n + 2.0 * lambda * inv_n * w[j];
  }
  eval_counter += shard.idx.size();
}

}  // namespace reference

}  // namespace fogplan
