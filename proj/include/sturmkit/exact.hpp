// Copyright 2026 The sturmkit Authors
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

#pragma once

#include <cstdint>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

namespace sturmkit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// base^exponent if it does not exceed limit.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exponent,
                                                std::uint64_t limit) {
  std::uint64_t acc = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (base != 0 && acc > limit / base) return std::nullopt;
    acc *= base;
  }
  if (acc > limit) return std::nullopt;
  return acc;
}

inline BigInt big_pow(std::uint64_t base, std::uint64_t exponent) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

/// Floor division for signed big integers.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace sturmkit
