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

#ifndef VCHUNK_RATIONAL_HPP
#define VCHUNK_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>

namespace vchunk {

__extension__ using Int128 = __int128;

/// Arbitrary-precision rational used wherever IoU values are summed
/// (list objective, assignment potentials, metric means).
using Rational = mpq_class;

/// Exact ratio of two non-negative pixel counts. A zero denominator is
/// normalized to 0/1, which is how IoU against an empty union is defined.
/// Ordering cross-multiplies in 128-bit integers, so no rounding ever
/// enters a comparison.
class PixelRatio {
public:
    constexpr PixelRatio() = default;
    constexpr PixelRatio(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0) {
            num_ = 0;
            den_ = 1;
        }
    }

    constexpr std::int64_t num() const { return num_; }
    constexpr std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    Rational to_rational() const {
        Rational q(static_cast<long>(num_), static_cast<unsigned long>(den_));
        q.canonicalize();
        return q;
    }

    friend constexpr std::strong_ordering operator<=>(const PixelRatio& a, const PixelRatio& b) {
        const Int128 lhs = static_cast<Int128>(a.num_) * b.den_;
        const Int128 rhs = static_cast<Int128>(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend constexpr bool operator==(const PixelRatio& a, const PixelRatio& b) {
        return (a <=> b) == std::strong_ordering::equal;
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline double to_double(const Rational& q) { return q.get_d(); }

/// Fixed-point decimal rendering used by every CSV writer, so that reports
/// are byte-stable across platforms.
std::string format_fixed(double value, int digits = 6);

/// Shortest round-trip decimal representation of a double.
std::string format_shortest(double value);

}  // namespace vchunk

#endif  // VCHUNK_RATIONAL_HPP
