// Copyright 2026 The vchunk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VCHUNK_RNG_HPP
#define VCHUNK_RNG_HPP

#include <cstdint>
#include <limits>
#include <string_view>

namespace vchunk {

/// Counter-based SplitMix64 generator.
///
/// Output i of a stream with key K is mix64(K + (i + 1) * golden), where
/// mix64 is the SplitMix64 finalizer. A stream is therefore addressable at
/// any counter without replaying earlier draws, and independent streams are
/// derived by hashing a parent key with a purpose tag:
///
///     stream(master).child("scene").child(index).child("voronoi")
///
/// Adding a new purpose tag never perturbs existing streams. All samplers
/// below are implemented here (not via <random> distributions) so that draws
/// are identical across standard library implementations.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return at(counter_++); }

    /// Value at an absolute counter position; does not advance the stream.
    result_type at(std::uint64_t counter) const;

    CounterRng child(std::uint64_t tag) const;
    CounterRng child(std::string_view tag) const;

    std::uint64_t key() const { return key_; }
    std::uint64_t position() const { return counter_; }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi], unbiased (rejection on the top range).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    bool bernoulli(double p) { return uniform() < p; }
    /// Standard normal via Box-Muller (one value per call, two uniforms).
    double normal();
    double normal(double mean, double sigma) { return mean + sigma * normal(); }
    /// Gamma(shape, 1) via Marsaglia-Tsang.
    double gamma(double shape);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_tag(std::string_view tag);

}  // namespace vchunk

#endif  // VCHUNK_RNG_HPP
