#include "unipulse/parallel.hpp"
#include "unipulse/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace unipulse {

namespace {
constexpr Complex I{0.0, 1.0};
constexpr std::size_t kBlock = 1 << 14;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct BlockSums {
  Complex sum{0.0, 0.0};
  double sum_sq = 0.0;
};
} // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ (counter * 0xD1B54A32D192ED03ull));
  return double(bits >> 11) * 0x1.0p-53;
}

McEstimate reconstruct_cartesian_mc(const PulseParams &params, const Waveform &w,
                                    const SpacetimePoint &p, std::size_t n_samples,
                                    std::uint64_t seed) {
  if (n_samples < 10'000)
    throw std::invalid_argument("reconstruct_cartesian_mc: need at least 1e4 samples");
  const double ct = params.c() * p.t;
  const double b = params.b();
  const double lambda = std::min(b, w.decay_rate());

  // Per-sample weight of -(i/2 pi) fhat(k mu) e^{i k [(ct + ib) - (z + ib) mu - n_perp.r]} k
  // under the density lambda e^{-lambda k} / (2 pi):
  //   -i fhat(k mu) k / lambda * e^{(lambda - b (1 - mu)) k} e^{i k (ct - z mu - n_perp.r)}
  const auto sample = [&](std::uint64_t i) -> Complex {
    const double u1 = counter_uniform(seed, 3 * i);
    const double u2 = counter_uniform(seed, 3 * i + 1);
    const double u3 = counter_uniform(seed, 3 * i + 2);
    const double k = -std::log1p(-u1) / lambda;
    const double mu = 1.0 - u2; // (0, 1]
    const double phi = 2.0 * std::numbers::pi * u3;
    const double sin_x = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    const double transverse = sin_x * (p.x * std::cos(phi) + p.y * std::sin(phi));
    const Complex fhat = w.spectrum(k * mu);
    if (fhat == Complex{0.0, 0.0})
      return {0.0, 0.0};
    const Complex phase{(lambda - b * (1.0 - mu)) * k, k * (ct - p.z * mu - transverse)};
    return -I * fhat * (k / lambda) * std::exp(phase);
  };

  const std::size_t blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<BlockSums> partial(blocks);
  parallel_for(blocks, [&](std::size_t blk) {
    BlockSums acc;
    const std::size_t end = std::min(n_samples, (blk + 1) * kBlock);
    for (std::size_t i = blk * kBlock; i < end; ++i) {
      const Complex v = sample(i);
      acc.sum += v;
      acc.sum_sq += std::norm(v);
    }
    partial[blk] = acc;
  });

  Complex sum{0.0, 0.0};
  double sum_sq = 0.0;
  for (const auto &blk : partial) {
    sum += blk.sum;
    sum_sq += blk.sum_sq;
  }
  const double n = double(n_samples);
  const Complex mean = sum / n;
  const double variance = std::max(0.0, (sum_sq - n * std::norm(mean)) / (n - 1.0));
  return {mean, std::sqrt(variance / n), n_samples};
}

} // namespace unipulse
