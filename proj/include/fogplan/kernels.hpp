#pragma once

#include <cstdint>
#include <span>

#include "fogplan/dataset.hpp"

namespace fogplan {

// A shard of a dataset: index list into ds. Weight vectors may be of length d
// (no intercept) or d+1 (trailing intercept fed by an implicit 1 feature).
struct ShardView {
  const LabeledDataset* ds = nullptr;
  std::span<const uint32_t> idx;

  std::size_t size() const { return idx.size(); }
};

// (1/n) sum log(1+exp(-y x.w)) + (lambda/n) |w|^2 over the shard.
// OpenMP-parallel over fixed-size sample blocks; block partials are added in
// block order, so the result does not depend on the thread count.
double logistic_loss(const ShardView& shard, std::span<const double> w, double lambda);

// Exact gradient of logistic_loss into grad (same length as w). Adds the
// shard size to eval_counter.
void logistic_gradient(const ShardView& shard, std::span<const double> w, double lambda,
                       std::span<double> grad, uint64_t& eval_counter);

// Margin y * (x.w [+ intercept]) of one sample under w.
double sample_margin(const LabeledDataset& ds, uint32_t row, std::span<const double> w);

// Serial counterparts with a single straight accumulation loop. They are the
// reference the parallel kernels are tested and benchmarked against.
namespace reference {
double logistic_loss(const ShardView& shard, std::span<const double> w, double lambda);
void logistic_gradient(const ShardView& shard, std::span<const double> w, double lambda,
                       std::span<double> grad, uint64_t& eval_counter);
}  // namespace reference

}  // namespace fogplan
