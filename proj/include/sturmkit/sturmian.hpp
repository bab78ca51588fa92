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

// Continued-fraction slopes and the Sturmian words they define.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sturmkit/exact.hpp"
#include "sturmkit/word.hpp"

namespace sturmkit {

/// Partial quotients a_1, a_2, ... of a slope [0; a_1, a_2, ...].
class PartialQuotients {
 public:
  using TermFn = std::function<std::optional<std::uint64_t>(std::size_t)>;

  /// head followed by tail repeated forever (quadratic slopes).
  static PartialQuotients periodic(std::vector<std::uint64_t> head,
                                   std::vector<std::uint64_t> tail) {
    if (tail.empty()) throw precondition_error("periodic slope needs a nonempty tail");
    validate(head);
    validate(tail);
    PartialQuotients pq;
    pq.head_ = head;
    pq.tail_ = tail;
    pq.fn_ = std::make_shared<const TermFn>(
        [head = std::move(head), tail = std::move(tail)](std::size_t k) -> std::optional<std::uint64_t> {
          if (k == 0) return std::nullopt;
          if (k <= head.size()) return head[k - 1];
          return tail[(k - 1 - head.size()) % tail.size()];
        });
    return pq;
  }

  /// Finitely many terms; asking beyond them is an error for callers that
  /// need an irrational slope.
  static PartialQuotients finite(std::vector<std::uint64_t> terms) {
    validate(terms);
    PartialQuotients pq;
    pq.head_ = terms;
    pq.finite_ = true;
    pq.fn_ = std::make_shared<const TermFn>(
        [terms = std::move(terms)](std::size_t k) -> std::optional<std::uint64_t> {
          if (k == 0 || k > terms.size()) return std::nullopt;
          return terms[k - 1];
        });
    return pq;
  }

  static PartialQuotients generated(std::string description,
                                    std::function<std::uint64_t(std::size_t)> term) {
    PartialQuotients pq;
    pq.description_ = std::move(description);
    pq.fn_ = std::make_shared<const TermFn>(
        [term = std::move(term)](std::size_t k) -> std::optional<std::uint64_t> {
          if (k == 0) return std::nullopt;
          const std::uint64_t a = term(k);
          if (a == 0) throw precondition_error("partial quotients must be positive");
          return a;
        });
    return pq;
  }

  /// Deterministic pseudo-random terms in [1, max_term], a pure function of (seed, k).
  static PartialQuotients random(std::uint64_t seed, std::uint64_t max_term) {
    if (max_term == 0) throw precondition_error("max_term must be positive");
    return generated("random:" + std::to_string(seed) + ":" + std::to_string(max_term),
                     [seed, max_term](std::size_t k) {
                       std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + k * 0xBF58476D1CE4E5B9ULL;
                       z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
                       z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
                       z ^= z >> 31;
                       return 1 + z % max_term;
                     });
  }

  std::optional<std::uint64_t> term(std::size_t k) const { return (*fn_)(k); }

  std::uint64_t at(std::size_t k) const {
    auto a = term(k);
    if (!a)
      throw precondition_error("partial quotient a_" + std::to_string(k) + " not available");
    return *a;
  }

  bool is_finite() const noexcept { return finite_; }
  bool is_eventually_periodic() const noexcept { return !tail_.empty(); }

  /// Text form accepted by parse_slope.
  std::string to_string() const {
    if (!description_.empty()) return description_;
    std::string out;
    for (std::size_t i = 0; i < head_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(head_[i]);
    }
    if (!tail_.empty()) {
      if (!head_.empty()) out += ',';
      out += '(';
      for (std::size_t i = 0; i < tail_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(tail_[i]);
      }
      out += ')';
    }
    return out;
  }

 private:
  PartialQuotients() = default;

  static void validate(const std::vector<std::uint64_t>& terms) {
    for (auto a : terms)
      if (a == 0) throw precondition_error("partial quotients must be positive");
  }

  std::shared_ptr<const TermFn> fn_;
  std::vector<std::uint64_t> head_, tail_;
  std::string description_;
  bool finite_ = false;
};

/// Parses "1,(1)", "1,2,(3)", "(1,2)", "3,1,4" or "random:<seed>:<max>".
inline PartialQuotients parse_slope(std::string_view text) {
  auto strip = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = strip(text);
  if (text.empty()) throw precondition_error("empty slope text");
  auto number = [&](std::string_view tok) -> std::uint64_t {
    tok = strip(tok);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string_view::npos)
      throw precondition_error("bad partial quotient '" + std::string(tok) + "'");
    return std::stoull(std::string(tok));
  };
  if (text.starts_with("random:")) {
    auto rest = text.substr(7);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw precondition_error("random slope needs seed:max");
    return PartialQuotients::random(number(rest.substr(0, colon)), number(rest.substr(colon + 1)));
  }
  if (text.find_first_of(".eE") != std::string_view::npos)
    throw precondition_error("slopes are given by partial quotients, not decimals");
  std::vector<std::uint64_t> head, tail;
  bool in_tail = false, tail_closed = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view tok = strip(text.substr(start, comma - start));
    if (tail_closed) throw precondition_error("terms after the repeating tail");
    if (!tok.empty() && tok.front() == '(') {
      if (in_tail) throw precondition_error("nested parentheses in slope");
      in_tail = true;
      tok.remove_prefix(1);
    }
    bool close = false;
    if (!tok.empty() && tok.back() == ')') {
      if (!in_tail) throw precondition_error("unbalanced ')' in slope");
      close = true;
      tok.remove_suffix(1);
    }
    (in_tail ? tail : head).push_back(number(tok));
    if (close) {
      in_tail = false;
      tail_closed = true;
    }
    start = comma + 1;
  }
  if (in_tail) throw precondition_error("unterminated '(' in slope");
  if (tail_closed) return PartialQuotients::periodic(std::move(head), std::move(tail));
  return PartialQuotients::finite(std::move(head));
}

struct ConvergentPair {
  std::size_t k;
  BigInt p, q;
};

/// (p_j, q_j) for j = 0..k via p_j = a_j p_{j-1} + p_{j-2}, p_0 = 0, q_0 = 1.
inline std::vector<ConvergentPair> convergent_table(const PartialQuotients& pq, std::size_t k) {
  std::vector<ConvergentPair> out;
  out.reserve(k + 1);
  BigInt p_prev = 1, q_prev = 0, p = 0, q = 1;
  out.push_back({0, p, q});
  for (std::size_t j = 1; j <= k; ++j) {
    const BigInt a = pq.at(j);
    BigInt p_next = a * p + p_prev;
    BigInt q_next = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
    out.push_back({j, p, q});
  }
  return out;
}

inline ConvergentPair convergents(const PartialQuotients& pq, std::size_t k) {
  return convergent_table(pq, k).back();
}

/// Smallest k >= 1 with q_k > n.
inline std::size_t first_denominator_above(const PartialQuotients& pq, const BigInt& n) {
  BigInt q_prev = 0, q = 1;
  for (std::size_t k = 1;; ++k) {
    BigInt next = BigInt(pq.at(k)) * q + q_prev;
    q_prev = std::move(q);
    q = std::move(next);
    if (q > n) return k;
  }
}

/// Standard words M_0 = 0, M_1 = 0^{a_1 - 1} 1, M_{j+1} = M_j^{a_{j+1}} M_{j-1}.
/// |M_k| = q_k and M_k holds p_k ones; both are checked.
inline FiniteWord standard_word(const PartialQuotients& pq, std::size_t k,
                                std::size_t max_length = std::size_t{1} << 28) {
  const auto table = convergent_table(pq, k);
  if (table.back().q > max_length)
    throw precondition_error("standard word M_" + std::to_string(k) + " has length " +
                             table.back().q.str() + ", above the materialization cap");
  FiniteWord older({0}, 2);
  if (k == 0) return older;
  FiniteWord current = power(FiniteWord({0}, 2), pq.at(1) - 1);
  current.push_back(1);
  for (std::size_t j = 1; j < k; ++j) {
    FiniteWord next = power(current, pq.at(j + 1));
    next.append(older);
    older = std::move(current);
    current = std::move(next);
  }
  if (BigInt(current.size()) != table[k].q || BigInt(current.count(1)) != table[k].p)
    throw std::logic_error("standard word length/weight differs from convergent");
  return current;
}

namespace detail {

// floor(n alpha) for n = 1..L+1, with alpha strictly between the two
// convergents below/above. Returns false when some floor is not pinned down.
template <class Int>
bool mechanical_from_bounds(const Int& p_lo, const Int& q_lo, const Int& p_hi, const Int& q_hi,
                            std::size_t length, FiniteWord& out) {
  Int f_lo = 0, r_lo = 0, f_hi = 0, r_hi = 0;
  Int prev = 0;
  out = FiniteWord(2);
  out.reserve(length);
  for (std::size_t n = 1; n <= length + 1; ++n) {
    r_lo += p_lo;
    while (r_lo >= q_lo) {
      r_lo -= q_lo;
      ++f_lo;
    }
    r_hi += p_hi;
    while (r_hi >= q_hi) {
      r_hi -= q_hi;
      ++f_hi;
    }
    // n alpha lies in (n p_lo / q_lo, n p_hi / q_hi).
    const bool pinned = f_hi == f_lo || (f_hi == f_lo + 1 && r_hi == 0);
    if (!pinned) return false;
    if (n >= 2) out.push_back(static_cast<Letter>(f_lo - prev));
    prev = f_lo;
  }
  return true;
}

}  // namespace detail

/// s_1 ... s_L with s_n = floor((n+1) alpha) - floor(n alpha), alpha = [0; a_1, ...].
/// Exact: alpha is bracketed by consecutive convergents, refined on demand.
inline FiniteWord mechanical_word(const PartialQuotients& pq, std::size_t length) {
  if (length == 0) return FiniteWord(2);
  std::size_t k = first_denominator_above(pq, BigInt(length + 1));
  for (;; ++k) {
    if (!pq.term(k + 1))
      throw precondition_error("mechanical_word: not enough partial quotients for length " +
                               std::to_string(length));
    const auto table = convergent_table(pq, k + 1);
    const auto& a = table[k];
    const auto& b = table[k + 1];
    // Even-index convergents lie below the slope.
    const auto& lo = (k % 2 == 0) ? a : b;
    const auto& hi = (k % 2 == 0) ? b : a;
    FiniteWord out;
    const BigInt fits = BigInt(1) << 62;
    bool ok;
    if (lo.q < fits && hi.q < fits && lo.p < fits && hi.p < fits) {
      ok = detail::mechanical_from_bounds<std::uint64_t>(
          static_cast<std::uint64_t>(lo.p), static_cast<std::uint64_t>(lo.q),
          static_cast<std::uint64_t>(hi.p), static_cast<std::uint64_t>(hi.q), length, out);
    } else {
      ok = detail::mechanical_from_bounds<BigInt>(lo.p, lo.q, hi.p, hi.q, length, out);
    }
    if (ok) return out;
  }
}

/// Every factor of length n occurs in the prefix of length n + 3 q_{K+1},
/// where q_K <= n < q_{K+1}.
inline std::size_t sturmian_recurrence_bound(const PartialQuotients& pq, std::size_t n) {
  const std::size_t m = std::max<std::size_t>(n, 1);
  const std::size_t k = first_denominator_above(pq, BigInt(m));
  const BigInt q = convergents(pq, k).q;
  return m + 3 * static_cast<std::size_t>(q);
}

/// The characteristic Sturmian word of slope pq as a certified source.
inline InfiniteWordSource characteristic_word(const PartialQuotients& pq) {
  return InfiniteWordSource(
      "sturmian[" + pq.to_string() + "]", 2,
      [pq](std::size_t length) { return mechanical_word(pq, length); },
      RecurrenceBound([pq](std::size_t n) { return sturmian_recurrence_bound(pq, n); }));
}

/// The k with all gaps between consecutive 1s in {k, k+1}.
inline std::size_t gap_parameter(const FiniteWord& prefix) {
  std::vector<std::size_t> ones;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i] > 1) throw precondition_error("gap_parameter: binary word expected");
    if (prefix[i] == 1) ones.push_back(i);
  }
  if (ones.size() < 3) throw precondition_error("gap_parameter: need at least three 1s");
  std::size_t lo = SIZE_MAX, hi = 0;
  for (std::size_t i = 1; i < ones.size(); ++i) {
    const std::size_t gap = ones[i] - ones[i - 1] - 1;
    lo = std::min(lo, gap);
    hi = std::max(hi, gap);
  }
  if (lo == 0) throw precondition_error("gap_parameter: 1 is not isolated");
  if (hi > lo + 1)
    throw precondition_error("gap_parameter: gaps between 1s span more than {k, k+1}");
  return lo;
}

enum class Side { left, right };

/// Length-n factors of the prefix with at least two distinct extensions on
/// the given side, in lexicographic order.
inline std::vector<FiniteWord> special_factors(const FiniteWord& prefix, std::size_t n, Side side) {
  if (n < 1 || n >= prefix.size())
    throw precondition_error("special_factors: need 1 <= n < |prefix|");
  std::map<std::vector<Letter>, std::set<Letter>> ext;
  const auto letters = prefix.letters();
  for (std::size_t i = 0; i + n <= prefix.size(); ++i) {
    std::optional<Letter> e;
    if (side == Side::right && i + n < prefix.size()) e = letters[i + n];
    if (side == Side::left && i >= 1) e = letters[i - 1];
    if (!e) continue;
    ext[std::vector<Letter>(letters.begin() + static_cast<std::ptrdiff_t>(i),
                            letters.begin() + static_cast<std::ptrdiff_t>(i + n))]
        .insert(*e);
  }
  std::vector<FiniteWord> out;
  for (auto& [factor, letters_after] : ext)
    if (letters_after.size() >= 2) out.emplace_back(factor, prefix.alphabet_size());
  return out;
}

/// For each 1 <= k < K: c1 p_k + c2 q_k or c1 p_{k+1} + c2 q_{k+1} is nonzero mod d.
inline bool convergents_mod_witness(const PartialQuotients& pq, std::int64_t d, std::int64_t c1,
                                    std::int64_t c2, std::size_t K) {
  if (d < 2) throw precondition_error("convergents_mod_witness: need d >= 2");
  if (K < 1) throw precondition_error("convergents_mod_witness: need K >= 1");
  auto mod = [d](std::int64_t x) { return ((x % d) + d) % d; };
  const std::int64_t r1 = mod(c1), r2 = mod(c2);
  if (r1 == 0 && r2 == 0)
    throw precondition_error("convergents_mod_witness: c1 and c2 are both multiples of d");
  // Residues of (p_k, q_k), starting from (p_0, q_0) = (0, 1), (p_{-1}, q_{-1}) = (1, 0).
  std::int64_t p_prev = 1, q_prev = 0, p = 0, q = 1;
  auto step = [&](std::size_t j) {
    const std::int64_t a = static_cast<std::int64_t>(pq.at(j) % static_cast<std::uint64_t>(d));
    const std::int64_t pn = mod(a * p + p_prev), qn = mod(a * q + q_prev);
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
  };
  step(1);
  for (std::size_t k = 1; k < K; ++k) {
    const std::int64_t here = mod(r1 * p + r2 * q);
    step(k + 1);
    const std::int64_t next = mod(r1 * p + r2 * q);
    if (here == 0 && next == 0) return false;
  }
  return true;
}

/// |#1(u) - #1(v)| <= 1 for all equal-length factors up to max_length.
inline bool balance_check(const FiniteWord& prefix, std::size_t max_length = 64) {
  for (Letter c : prefix)
    if (c > 1) throw precondition_error("balance_check: binary word expected");
  const std::size_t top = std::min(max_length, prefix.size());
  std::vector<std::size_t> ones(prefix.size() + 1, 0);
  for (std::size_t i = 0; i < prefix.size(); ++i) ones[i + 1] = ones[i] + prefix[i];
  for (std::size_t len = 1; len <= top; ++len) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (std::size_t i = 0; i + len <= prefix.size(); ++i) {
      const std::size_t w = ones[i + len] - ones[i];
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    if (hi > lo + 1) return false;
  }
  return true;
}

}  // namespace sturmkit
