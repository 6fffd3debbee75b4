// Copyright 2026 The fedsdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDSDP_RNG_H_
#define FEDSDP_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

namespace fedsdp {

// SplitMix64 finalizer; a bijective 64-bit mixer.
uint64_t MixSeed(uint64_t x);

// Folds tags into a seed. Pure function, so substreams are identified by
// (seed, tags) and never depend on how much of a parent stream was consumed.
uint64_t DeriveSeed(uint64_t seed, std::initializer_list<uint64_t> tags);

// Seeded random stream. The engine is mt19937_64 (whose output sequence is
// fixed by the standard); the distributions are implemented here rather
// than taken from <random>, whose distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(MixSeed(seed)) {}

  uint64_t seed() const { return seed_; }

  // Independent stream keyed by `tag`, derived from this stream's seed.
  Rng Substream(uint64_t tag) const { return Rng(DeriveSeed(seed_, {tag})); }

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform on [0, n) by rejection. Throws ParameterError when n == 0.
  uint64_t UniformInt(uint64_t n);

  // Standard normal draw (Marsaglia polar method).
  double Gaussian();

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(UniformInt(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fedsdp

#endif  // FEDSDP_RNG_H_
