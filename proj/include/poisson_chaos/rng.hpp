#pragma once

#include <cstdint>
#include <limits>

namespace poisson_chaos {

/// Counter-based random stream keyed by (seed, stream index). Every (seed, stream)
/// pair yields its own reproducible sequence; no state is shared between streams.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_lo_;
  std::uint64_t key_hi_;
  std::uint64_t counter_ = 0;
};

/// Poisson(mean) quantile of `u` by CDF inversion; monotone in both arguments.
std::uint64_t poisson_quantile(double mean, double u);

/// One Poisson(mean) draw by inversion.
std::uint64_t sample_poisson_count(double mean, RngStream& rng);

}  // namespace poisson_chaos
