// Sample entropy across coarse-graining scales for white noise and for a
// noisy sine. Noise loses regularity information as it is averaged; the
// sine stays low at every scale.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "cmx/cmx.hpp"

int main() {
  using namespace cmx;
  const std::size_t n = 6000;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 1.0);
  TimeSeries white(n), wave(n);
  for (std::size_t i = 0; i < n; ++i) {
    white[i] = noise(rng);
    wave[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 40.0) + 0.1 * noise(rng);
  }

  const Recipe se = ComplexityRecipe{SampleEntropy{}};
  const auto a = multiscale({8}, se, white);
  const auto b = multiscale({8}, se, wave);
  std::printf("scale  white_noise  noisy_sine\n");
  for (std::size_t s = 0; s < a.size() && s < b.size(); ++s) {
    auto show = [](const ScaleResult& r) { return r.result ? r.result->value : std::nan(""); };
    std::printf("%5zu  %11.4f  %10.4f\n", a[s].scale, show(a[s]), show(b[s]));
  }

  const Recipe kl = DifferentialRecipe{Kraskov{3}, 2.0};
  std::printf("\n%s on the noise: %.4f bits (exact %.4f)\n", describe(kl).c_str(), evaluate(kl, white).value,
              0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e));
}
