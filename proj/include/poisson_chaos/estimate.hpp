#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "poisson_chaos/rng.hpp"

namespace poisson_chaos {

/// Replicate budget for a Monte Carlo estimate. Replicate i draws from stream
/// (stream_base + i) of `seed`.
struct McPlan {
  std::size_t replicates = 100'000;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;

  void validate() const;
  RngStream stream(std::size_t replicate) const { return RngStream(seed, stream_base + replicate); }
  McPlan with_base(std::uint64_t base) const { return McPlan{replicates, seed, base}; }
  McPlan with_replicates(std::size_t n) const { return McPlan{n, seed, stream_base}; }
};

/// Mean with standard error. replicates == 0 marks an exact (deterministic) value.
struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t replicates = 0;

  static Estimate exact(double value) { return Estimate{value, 0.0, 0}; }
  bool is_exact() const noexcept { return replicates == 0; }
};

/// Running mean and centred second moment (Welford); merge() combines partial
/// results (Chan et al.), so a fixed merge order gives reproducible rounding.
class Accumulator {
 public:
  void add(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const Accumulator& other) noexcept {
    if (other.n_ == 0) {
      return;
    }
    if (n_ == 0) {
      *this = other;
      return;
    }
    const double n = static_cast<double>(n_ + other.n_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * static_cast<double>(other.n_) / n;
    m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / n;
    n_ += other.n_;
  }

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  double se() const noexcept {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }
  Estimate estimate() const noexcept { return Estimate{mean_, se(), n_}; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Element-wise Accumulator over a fixed-length vector of replicate outputs.
class VectorAccumulator {
 public:
  VectorAccumulator() = default;
  explicit VectorAccumulator(std::size_t size) : acc_(size) {}

  void add(const std::vector<double>& x) {
    for (std::size_t i = 0; i < acc_.size(); ++i) {
      acc_[i].add(x[i]);
    }
  }
  void merge(const VectorAccumulator& other) {
    if (acc_.empty()) {
      acc_ = other.acc_;
      return;
    }
    for (std::size_t i = 0; i < acc_.size(); ++i) {
      acc_[i].merge(other.acc_[i]);
    }
  }
  std::size_t size() const noexcept { return acc_.size(); }
  const Accumulator& operator[](std::size_t i) const { return acc_[i]; }

 private:
  std::vector<Accumulator> acc_;
};

}  // namespace poisson_chaos
