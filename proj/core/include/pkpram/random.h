// Copyright 2026 The pkpram Authors
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

#ifndef PKPRAM_RANDOM_H_
#define PKPRAM_RANDOM_H_

#include <cstdint>
#include <span>

namespace pkpram {

// SplitMix64 finalizer. A bijection on 64-bit words with good avalanche.
uint64_t Mix64(uint64_t x);

// Counter-based seed splitting: every (stream, counter) pair under one master
// seed gets an independent-looking 64-bit word. Used so that per-record draws
// do not depend on evaluation order.
uint64_t DeriveSeed(uint64_t master_seed, uint64_t stream, uint64_t counter);

// Maps the top 53 bits of `bits` onto [0, 1).
double UnitInterval(uint64_t bits);

// Draws a fresh seed from the operating system.
uint64_t FreshSeed();

// Small sequential generator (SplitMix64 stream). Deterministic across
// platforms, unlike the std distributions.
class SplitMixRng {
 public:
  explicit SplitMixRng(uint64_t seed) : state_(seed) {}

  uint64_t Next();
  // Uniform double in [0, 1).
  double Uniform() { return UnitInterval(Next()); }
  // Unbiased uniform integer in [0, bound). `bound` must be positive.
  uint64_t UniformInt(uint64_t bound);

 private:
  uint64_t state_;
};

// Inverse-CDF draw from a discrete distribution given by `weights` (which
// need not be normalized). `u` is a uniform draw in [0, 1). Always returns an
// index with positive weight.
size_t SampleDiscrete(std::span<const double> weights, double u);

}  // namespace pkpram

#endif  // PKPRAM_RANDOM_H_
