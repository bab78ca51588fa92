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

// Digit expansions of real numbers in an integer base, and exact conversion
// between bases. No floating point is used anywhere in this header.

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sturmkit/exact.hpp"
#include "sturmkit/word.hpp"

namespace sturmkit {

/// Raised when certification needs more work than the caller allowed.
class budget_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// integer_part + sum_i digits_i / base^i.
struct DigitExpansion {
  std::uint32_t base;
  BigInt integer_part;
  InfiniteWordSource digits;
};

/// low <= value < high, high - low = base^-horizon.
struct ValueWindow {
  std::size_t horizon;
  Rational low, high;
};

/// b^rho, rejected above the letter bound.
inline std::uint32_t power_base(std::uint64_t b, std::uint64_t rho) {
  if (b < 2) throw precondition_error("base must be at least 2");
  if (rho < 1) throw precondition_error("exponent must be positive");
  auto v = checked_pow(b, rho, kMaxAlphabet);
  if (!v)
    throw precondition_error(std::to_string(b) + "^" + std::to_string(rho) +
                             " exceeds the 2^31 alphabet bound");
  return static_cast<std::uint32_t>(*v);
}

struct PeriodStructure {
  std::size_t preperiod;
  std::size_t period;
};

/// Preperiod and period of the base-B expansion of num/den, from the
/// factorization den' = u v with u built from primes of B and gcd(v, B) = 1.
inline PeriodStructure rational_period_structure(const BigInt& num, const BigInt& den,
                                                 std::uint64_t base) {
  if (den <= 0) throw precondition_error("denominator must be positive");
  BigInt frac = num - floor_div(num, den) * den;
  BigInt g = boost::multiprecision::gcd(frac, den);
  BigInt reduced = frac == 0 ? BigInt(1) : den / g;
  std::size_t preperiod = 0;
  // Each multiplication by the base clears gcd(reduced, base) once.
  for (;;) {
    const BigInt common = boost::multiprecision::gcd(reduced, BigInt(base));
    if (common == 1) break;
    reduced /= common;
    ++preperiod;
  }
  std::size_t period = 1;
  if (reduced != 1) {
    BigInt r = BigInt(base) % reduced;
    BigInt acc = r;
    while (acc != 1) {
      acc = (acc * r) % reduced;
      ++period;
    }
  }
  return {preperiod, period};
}

/// Long-division digits of num/den in base B. Never ends in (B-1)^inf.
inline DigitExpansion rational_expansion(const BigInt& num, const BigInt& den, std::uint64_t base) {
  if (den == 0) throw precondition_error("rational_expansion: zero denominator");
  if (den < 0) return rational_expansion(-num, -den, base);
  const std::uint32_t B = checked_alphabet(base);
  const BigInt ip = floor_div(num, den);
  const BigInt frac = num - ip * den;
  const PeriodStructure ps = rational_period_structure(num, den, base);
  RecurrenceBound bound = [ps](std::size_t n) { return ps.preperiod + ps.period + (n ? n - 1 : 0); };
  return DigitExpansion{
      B, ip,
      InfiniteWordSource(
          "rational[" + num.str() + "/" + den.str() + ";" + std::to_string(base) + "]", B,
          [frac, den, B](std::size_t length) {
            FiniteWord w(B);
            w.reserve(length);
            BigInt r = frac;
            for (std::size_t i = 0; i < length; ++i) {
              r *= B;
              const BigInt d = r / den;
              r -= d * den;
              w.push_back(static_cast<Letter>(d));
            }
            return w;
          },
          std::move(bound))};
}

/// The morphism sending a base-b^rho digit to its d = rho/sigma base-b^sigma
/// digits, most significant first.
inline Morphism phi_base_split(std::uint64_t b, std::uint64_t rho, std::uint64_t sigma) {
  if (sigma == 0 || rho % sigma != 0)
    throw precondition_error("phi_base_split: sigma must divide rho");
  const std::uint32_t source = power_base(b, rho);
  const std::uint32_t target = power_base(b, sigma);
  if (source > (std::uint32_t{1} << 22))
    throw precondition_error("phi_base_split: alphabet too large to materialize; use split_source");
  const std::uint64_t d = rho / sigma;
  std::vector<FiniteWord> images;
  images.reserve(source);
  for (std::uint64_t a = 0; a < source; ++a) {
    std::vector<Letter> digits(d);
    std::uint64_t v = a;
    for (std::uint64_t i = d; i-- > 0;) {
      digits[i] = static_cast<Letter>(v % target);
      v /= target;
    }
    images.emplace_back(std::move(digits), target);
  }
  return Morphism(std::move(images), target);
}

/// apply(phi_base_split(b, rho, sigma), digits) without materializing the morphism.
inline InfiniteWordSource split_source(std::uint64_t b, std::uint64_t rho, std::uint64_t sigma,
                                       const InfiniteWordSource& digits) {
  if (sigma == 0 || rho % sigma != 0)
    throw precondition_error("split_source: sigma must divide rho");
  const std::uint32_t source = power_base(b, rho);
  const std::uint32_t target = power_base(b, sigma);
  if (digits.alphabet_size() > source) throw precondition_error("split_source: alphabet mismatch");
  const std::size_t d = rho / sigma;
  std::optional<RecurrenceBound> bound;
  if (digits.certificate())
    bound = [inner = *digits.certificate(), d](std::size_t n) {
      return d * inner((n == 0 ? 0 : (n - 1) / d) + 2);
    };
  return InfiniteWordSource(
      "split[" + std::to_string(rho) + "->" + std::to_string(sigma) + "](" + digits.id() + ")",
      target,
      [digits, d, target](std::size_t length) {
        const FiniteWord in = digits.prefix((length + d - 1) / d);
        FiniteWord out(target);
        out.reserve(in.size() * d);
        std::vector<Letter> block(d);
        for (Letter a : in) {
          std::uint64_t v = a;
          for (std::size_t i = d; i-- > 0;) {
            block[i] = static_cast<Letter>(v % target);
            v /= target;
          }
          for (Letter c : block) out.push_back(c);
        }
        out.truncate(length);
        return out;
      },
      std::move(bound));
}

/// Blocks of d base-b^rho digits read as one base-b^{rho d} digit, starting at
/// the first digit. Left inverse of phi_base_split(b, rho d, rho).
inline InfiniteWordSource regroup(std::uint64_t b, std::uint64_t rho, std::uint64_t d,
                                  const InfiniteWordSource& digits) {
  if (d < 2) throw precondition_error("regroup: need d >= 2");
  const std::uint32_t inner = power_base(b, rho);
  const std::uint32_t outer = power_base(b, rho * d);
  if (digits.alphabet_size() != inner)
    throw precondition_error("regroup: digits over alphabet " +
                             std::to_string(digits.alphabet_size()) + ", expected " +
                             std::to_string(inner));
  return InfiniteWordSource(
      "regroup[" + std::to_string(rho) + "x" + std::to_string(d) + "](" + digits.id() + ")", outer,
      [digits, d, inner, outer](std::size_t length) {
        const FiniteWord in = digits.prefix(length * d);
        FiniteWord out(outer);
        out.reserve(length);
        for (std::size_t i = 0; i < length; ++i) {
          std::uint64_t v = 0;
          for (std::size_t j = 0; j < d; ++j) v = v * inner + in[i * d + j];
          out.push_back(static_cast<Letter>(v));
        }
        return out;
      });
}

/// The real number with base-b^rho digit stream w and integer part 0.
inline DigitExpansion word_to_xi(const InfiniteWordSource& w, std::uint64_t b, std::uint64_t rho) {
  const std::uint32_t B = power_base(b, rho);
  if (w.alphabet_size() > B)
    throw precondition_error("word_to_xi: alphabet " + std::to_string(w.alphabet_size()) +
                             " exceeds base " + std::to_string(B));
  return DigitExpansion{B, 0, w.widened(B).renamed("xi(" + w.id() + ";" + std::to_string(B) + ")")};
}

/// The same real written in base b^sigma; e must be in base b^rho.
inline DigitExpansion split_expansion(const DigitExpansion& e, std::uint64_t b, std::uint64_t rho,
                                      std::uint64_t sigma) {
  if (e.base != power_base(b, rho)) throw precondition_error("split_expansion: base mismatch");
  return DigitExpansion{power_base(b, sigma), e.integer_part, split_source(b, rho, sigma, e.digits)};
}

namespace detail {

/// sum_{i<=N} d_i B^{N-i} with digits packed into machine words first.
inline BigInt digits_numerator(const FiniteWord& digits, std::uint64_t base) {
  std::uint64_t chunk_pow = 1;
  std::size_t chunk_len = 0;
  while (chunk_pow <= (std::uint64_t{1} << 62) / base) {
    chunk_pow *= base;
    ++chunk_len;
  }
  BigInt x = 0;
  std::size_t i = 0;
  while (i < digits.size()) {
    const std::size_t take = std::min(chunk_len, digits.size() - i);
    std::uint64_t chunk = 0, scale = 1;
    for (std::size_t j = 0; j < take; ++j) {
      chunk = chunk * base + digits[i + j];
      scale *= base;
    }
    x = x * scale + chunk;
    i += take;
  }
  return x;
}

}  // namespace detail

inline ValueWindow value_window(const DigitExpansion& e, std::size_t horizon) {
  if (horizon < 1) throw precondition_error("value_window: horizon must be positive");
  const BigInt scale = big_pow(e.base, horizon);
  const BigInt x = detail::digits_numerator(e.digits.prefix(horizon), e.base);
  Rational low = Rational(e.integer_part) + Rational(x, scale);
  Rational high = low + Rational(BigInt(1), scale);
  return {horizon, std::move(low), std::move(high)};
}

/// First M fractional digits in base B' of the number e describes. A digit
/// block is emitted only when the exact window [low, high) at some horizon
/// lies inside a single cell of width B'^-M; the horizon doubles until then,
/// up to budget_per_digit * M source digits.
inline FiniteWord rebase_certified(const DigitExpansion& e, std::uint64_t target, std::size_t m,
                                   std::size_t budget_per_digit = std::size_t{1} << 20) {
  const std::uint32_t t = checked_alphabet(target);
  if (m < 1) throw precondition_error("rebase_certified: horizon must be positive");
  const BigInt cells = big_pow(t, m);
  // Start where B^N >= 4 B'^M.
  std::size_t horizon = 0;
  {
    BigInt reach = 1;
    while (reach < 4 * cells) {
      reach *= e.base;
      ++horizon;
    }
  }
  const std::size_t max_horizon = budget_per_digit * m;
  for (;;) {
    const FiniteWord source = e.digits.prefix(horizon);
    const BigInt x = detail::digits_numerator(source, e.base);
    const BigInt scale = big_pow(e.base, horizon);
    const BigInt cell = (x * cells) / scale;
    // value < (x + 1) / scale <= (cell + 1) / cells pins every digit.
    if ((x + 1) * cells <= (cell + 1) * scale) {
      std::vector<Letter> digits(m);
      BigInt v = cell;
      for (std::size_t i = m; i-- > 0;) {
        digits[i] = static_cast<Letter>(v % t);
        v /= t;
      }
      return FiniteWord(std::move(digits), t);
    }
    if (horizon >= max_horizon)
      throw budget_exceeded("rebase_certified: no certification within " +
                            std::to_string(max_horizon) + " source digits");
    horizon = std::min(max_horizon, horizon * 2);
  }
}

/// Base-B' digit stream of e, each prefix certified by rebase_certified.
inline InfiniteWordSource rebase_source(const DigitExpansion& e, std::uint64_t target,
                                        std::size_t budget_per_digit = std::size_t{1} << 20) {
  const std::uint32_t t = checked_alphabet(target);
  return InfiniteWordSource("rebase[" + std::to_string(target) + "](" + e.digits.id() + ")", t,
                            [e, t, budget_per_digit](std::size_t length) {
                              if (length == 0) return FiniteWord(t);
                              return rebase_certified(e, t, length, budget_per_digit);
                            });
}

// Line-oriented digit stream format:
//   base=<B> offset=<integer_part>
//   d1 d2 d3 ...

struct DigitStreamText {
  std::uint32_t base;
  BigInt integer_part;
  FiniteWord digits;
};

inline void write_digit_stream(std::ostream& os, std::uint32_t base, const BigInt& integer_part,
                               const FiniteWord& digits) {
  os << "base=" << base << " offset=" << integer_part.str() << '\n';
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) os << ' ';
    os << digits[i];
  }
  os << '\n';
}

inline void write_digit_stream(std::ostream& os, const DigitExpansion& e, std::size_t count) {
  write_digit_stream(os, e.base, e.integer_part, e.digits.prefix(count));
}

inline DigitStreamText read_digit_stream(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw precondition_error("digit stream: missing header");
  std::istringstream hs(header);
  std::string base_tok, offset_tok;
  hs >> base_tok >> offset_tok;
  if (!base_tok.starts_with("base=") || !offset_tok.starts_with("offset="))
    throw precondition_error("digit stream: header must be 'base=<B> offset=<n>'");
  const std::uint64_t base = std::stoull(base_tok.substr(5));
  DigitStreamText out{checked_alphabet(base), BigInt(offset_tok.substr(7)), FiniteWord(base)};
  std::string tok;
  while (is >> tok) {
    if (tok.find_first_not_of("0123456789") != std::string::npos)
      throw precondition_error("digit stream: bad digit '" + tok + "'");
    const std::uint64_t v = std::stoull(tok);
    if (v >= base) throw precondition_error("digit stream: digit " + tok + " >= base");
    out.digits.push_back(static_cast<Letter>(v));
  }
  return out;
}

}  // namespace sturmkit
