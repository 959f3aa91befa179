#include "poisson_chaos/rng.hpp"

#include <cmath>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Inversion loses accuracy once e^{-mean} approaches the denormal range;
// larger means are split into independent pieces.
constexpr double kMaxInversionMean = 30.0;

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed),
      stream_(stream),
      key_lo_(mix64(seed + kGolden)),
      key_hi_(mix64(mix64(stream ^ 0xD1B54A32D192ED03ULL) + seed)) {}

RngStream::result_type RngStream::operator()() noexcept {
  ++counter_;
  return mix64(mix64(counter_ * kGolden + key_lo_) ^ key_hi_);
}

double RngStream::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t poisson_quantile(double mean, double u) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw ContractViolation("Poisson mean must be finite and >= 0");
  }
  if (mean == 0.0) {
    return 0;
  }
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u >= cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    if (p == 0.0) {
      break;  // remaining mass below double resolution
    }
    cdf += p;
  }
  return k;
}

std::uint64_t sample_poisson_count(double mean, RngStream& rng) {
  if (mean <= kMaxInversionMean) {
    return poisson_quantile(mean, rng.uniform());
  }
  const auto pieces = static_cast<std::uint64_t>(std::ceil(mean / kMaxInversionMean));
  const double piece_mean = mean / static_cast<double>(pieces);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < pieces; ++i) {
    total += poisson_quantile(piece_mean, rng.uniform());
  }
  return total;
}

}  // namespace poisson_chaos
