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

// Factor complexity of infinite words.
//
// Per-length distinct-factor counts come from a suffix automaton: a state of
// length len with suffix link of length link_len accounts for exactly one
// distinct factor of each length in (link_len, len]. A difference array over
// those ranges yields the whole spectrum in one pass over the states.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "sturmkit/expansion.hpp"
#include "sturmkit/sturmian.hpp"
#include "sturmkit/word.hpp"

namespace sturmkit {

class SuffixAutomaton {
 public:
  explicit SuffixAutomaton(std::span<const Letter> text) {
    states_.reserve(2 * text.size() + 1);
    states_.push_back(State{});
    for (Letter c : text) extend(c);
  }

  std::size_t state_count() const noexcept { return states_.size(); }

  /// counts[n] = number of distinct factors of length n, n = 0..|text|.
  std::vector<std::uint64_t> count_by_length() const {
    std::vector<std::int64_t> diff(length_ + 2, 0);
    for (std::size_t v = 1; v < states_.size(); ++v) {
      const auto& s = states_[v];
      diff[states_[static_cast<std::size_t>(s.link)].len + 1] += 1;
      diff[s.len + 1] -= 1;
    }
    std::vector<std::uint64_t> counts(length_ + 1, 0);
    counts[0] = 1;
    std::int64_t run = 0;
    for (std::size_t n = 1; n <= length_; ++n) {
      run += diff[n];
      counts[n] = static_cast<std::uint64_t>(run);
    }
    return counts;
  }

  std::uint64_t distinct_factors() const {
    std::uint64_t total = 0;
    for (std::size_t v = 1; v < states_.size(); ++v)
      total += states_[v].len - states_[static_cast<std::size_t>(states_[v].link)].len;
    return total;
  }

 private:
  struct Edge {
    Letter letter;
    std::uint32_t target;
  };
  struct State {
    std::uint32_t len = 0;
    std::int32_t link = -1;
    std::vector<Edge> next;  // sorted by letter
  };

  static const Edge* find(const State& s, Letter c) {
    auto it = std::lower_bound(s.next.begin(), s.next.end(), c,
                               [](const Edge& e, Letter x) { return e.letter < x; });
    return it != s.next.end() && it->letter == c ? &*it : nullptr;
  }
  static void set(State& s, Letter c, std::uint32_t target) {
    auto it = std::lower_bound(s.next.begin(), s.next.end(), c,
                               [](const Edge& e, Letter x) { return e.letter < x; });
    if (it != s.next.end() && it->letter == c)
      it->target = target;
    else
      s.next.insert(it, Edge{c, target});
  }

  void extend(Letter c) {
    const auto cur = static_cast<std::uint32_t>(states_.size());
    states_.push_back(State{states_[last_].len + 1, -1, {}});
    std::int64_t p = last_;
    while (p != -1 && !find(states_[static_cast<std::size_t>(p)], c)) {
      set(states_[static_cast<std::size_t>(p)], c, cur);
      p = states_[static_cast<std::size_t>(p)].link;
    }
    if (p == -1) {
      states_[cur].link = 0;
    } else {
      const std::uint32_t q = find(states_[static_cast<std::size_t>(p)], c)->target;
      if (states_[static_cast<std::size_t>(p)].len + 1 == states_[q].len) {
        states_[cur].link = static_cast<std::int32_t>(q);
      } else {
        const auto clone = static_cast<std::uint32_t>(states_.size());
        State copy = states_[q];
        copy.len = states_[static_cast<std::size_t>(p)].len + 1;
        states_.push_back(std::move(copy));
        while (p != -1) {
          const Edge* e = find(states_[static_cast<std::size_t>(p)], c);
          if (!e || e->target != q) break;
          set(states_[static_cast<std::size_t>(p)], c, clone);
          p = states_[static_cast<std::size_t>(p)].link;
        }
        states_[q].link = static_cast<std::int32_t>(clone);
        states_[cur].link = static_cast<std::int32_t>(clone);
      }
    }
    last_ = cur;
    ++length_;
  }

  std::vector<State> states_;
  std::uint32_t last_ = 0;
  std::size_t length_ = 0;
};

/// Number of distinct length-n factors by sorting and deduplicating all windows.
inline std::uint64_t factor_count_bruteforce(const FiniteWord& prefix, std::size_t n) {
  if (n < 1 || n > prefix.size())
    throw precondition_error("factor_count_bruteforce: need 1 <= n <= |prefix|");
  const auto letters = prefix.letters();
  std::vector<std::span<const Letter>> windows;
  windows.reserve(prefix.size() - n + 1);
  for (std::size_t i = 0; i + n <= prefix.size(); ++i) windows.push_back(letters.subspan(i, n));
  auto less = [](std::span<const Letter> a, std::span<const Letter> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  };
  auto equal = [](std::span<const Letter> a, std::span<const Letter> b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  };
  std::sort(windows.begin(), windows.end(), less);
  return static_cast<std::uint64_t>(
      std::unique(windows.begin(), windows.end(), equal) - windows.begin());
}

/// spectrum[n] = distinct factors of length n, for 0 <= n <= |prefix|.
inline std::vector<std::uint64_t> factor_spectrum(const FiniteWord& prefix) {
  if (prefix.empty()) throw precondition_error("factor_spectrum: empty prefix");
  return SuffixAutomaton(prefix.letters()).count_by_length();
}

enum class Status { empirical, certified };
enum class ProfileMode { empirical, certified };

inline const char* to_string(Status s) { return s == Status::certified ? "certified" : "empirical"; }

struct ProfileEntry {
  std::uint64_t count;
  Status status;
};

struct ComplexityProfile {
  std::string word_id;
  std::uint32_t alphabet_size = 2;
  std::size_t prefix_length = 0;
  bool stabilized = true;  // empirical mode: two doublings left counts unchanged
  std::vector<ProfileEntry> entries;  // entries[n - 1]

  std::size_t n_max() const noexcept { return entries.size(); }
  std::uint64_t count(std::size_t n) const { return entries.at(n - 1).count; }
  Status status(std::size_t n) const { return entries.at(n - 1).status; }
};

struct ProfileOptions {
  std::size_t initial_prefix = 0;  // 0: 8 * n_max, at least 256
  std::size_t max_prefix = std::size_t{1} << 22;
};

/// Prefix length at which every factor of length <= n_max is present.
inline std::size_t certified_prefix_length(const InfiniteWordSource& source, std::size_t n_max) {
  if (!source.certificate())
    throw precondition_error("source '" + source.id() + "' carries no recurrence certificate");
  const auto& bound = *source.certificate();
  std::size_t need = n_max;
  for (std::size_t n = 1; n <= n_max; ++n) need = std::max(need, bound(n));
  return need;
}

inline ComplexityProfile profile(const InfiniteWordSource& source, std::size_t n_max,
                                 ProfileMode mode, const ProfileOptions& options = {}) {
  if (n_max < 1) throw precondition_error("profile: n_max must be positive");
  ComplexityProfile out;
  out.word_id = source.id();
  out.alphabet_size = source.alphabet_size();
  auto fill = [&](const std::vector<std::uint64_t>& spectrum, Status status) {
    out.entries.clear();
    for (std::size_t n = 1; n <= n_max; ++n)
      out.entries.push_back({n < spectrum.size() ? spectrum[n] : 0, status});
  };
  if (mode == ProfileMode::certified) {
    const std::size_t length = certified_prefix_length(source, n_max);
    if (length > options.max_prefix)
      throw budget_exceeded("certified prefix for n_max=" + std::to_string(n_max) + " needs " +
                            std::to_string(length) + " letters, budget is " +
                            std::to_string(options.max_prefix));
    out.prefix_length = length;
    fill(factor_spectrum(source.prefix(length)), Status::certified);
    return out;
  }
  std::size_t length = options.initial_prefix ? options.initial_prefix
                                              : std::max<std::size_t>(8 * n_max, 256);
  length = std::min(length, options.max_prefix);
  auto window = [&](std::size_t len) {
    auto spec = factor_spectrum(source.prefix(len));
    spec.resize(n_max + 1, 0);
    return spec;
  };
  std::vector<std::uint64_t> prev = window(length);
  std::size_t unchanged = 0;
  while (unchanged < 2) {
    if (length >= options.max_prefix) break;
    const std::size_t next_length = std::min(options.max_prefix, 2 * length);
    auto next = window(next_length);
    unchanged = next == prev ? unchanged + 1 : 0;
    prev = std::move(next);
    length = next_length;
  }
  out.prefix_length = length;
  out.stabilized = unchanged >= 2;
  fill(prev, Status::empirical);
  return out;
}

enum class WordClass { eventually_periodic, sturmian, quasi_sturmian, other };

inline const char* to_string(WordClass c) {
  switch (c) {
    case WordClass::eventually_periodic: return "eventually_periodic";
    case WordClass::sturmian: return "sturmian";
    case WordClass::quasi_sturmian: return "quasi_sturmian";
    case WordClass::other: return "other";
  }
  return "other";
}

struct ClassLabel {
  WordClass kind = WordClass::other;
  std::uint64_t k = 0;
  std::size_t n0 = 0;
  std::string diagnostic;

  friend bool operator==(const ClassLabel& a, const ClassLabel& b) {
    return a.kind == b.kind && a.k == b.k && a.n0 == b.n0;
  }
};

/// Labels a profile. quasi_sturmian(k, n0) is committed only when p(n) = n + k
/// holds on [n0, n_max] and that window spans at least n0 further values.
inline ClassLabel classify(const ComplexityProfile& prof) {
  const std::size_t top = prof.n_max();
  if (top == 0) return {WordClass::other, 0, 0, "empty profile"};
  for (std::size_t n = 1; n < top; ++n) {
    if (prof.count(n + 1) <= prof.count(n)) {
      // Morse-Hedlund: a non-increase means the word is eventually periodic.
      return {WordClass::eventually_periodic, 0, n, ""};
    }
  }
  bool sturm = true;
  for (std::size_t n = 1; n <= top && sturm; ++n) sturm = prof.count(n) == n + 1;
  if (sturm) return {WordClass::sturmian, 1, 1, ""};
  if (prof.count(top) <= top) return {WordClass::other, 0, 0, "p(n) <= n at window end"};
  const std::uint64_t k = prof.count(top) - top;
  std::size_t n0 = top;
  while (n0 > 1 && prof.count(n0 - 1) == (n0 - 1) + k) --n0;
  if (top - n0 < n0)
    return {WordClass::other, 0, 0,
            "stable tail p(n) = n + " + std::to_string(k) + " from n0=" + std::to_string(n0) +
                " is too short for n_max=" + std::to_string(top)};
  return {WordClass::quasi_sturmian, k, n0, ""};
}

/// CSV columns n,count,status with a trailing "# class=... k=... n0=..." line.
inline void write_profile_csv(std::ostream& os, const ComplexityProfile& prof,
                              const ClassLabel& label) {
  os << "n,count,status\n";
  for (std::size_t n = 1; n <= prof.n_max(); ++n)
    os << n << ',' << prof.count(n) << ',' << to_string(prof.status(n)) << '\n';
  os << "# class=" << to_string(label.kind) << " k=" << label.k << " n0=" << label.n0 << '\n';
}

// ---------------------------------------------------------------------------
// Occurrences

/// All 0-based offsets where pattern occurs in text (Knuth-Morris-Pratt).
inline std::vector<std::size_t> occurrence_positions(const FiniteWord& text,
                                                     const FiniteWord& pattern) {
  std::vector<std::size_t> out;
  if (pattern.empty() || pattern.size() > text.size()) return out;
  const auto fail = border_table(pattern.letters());
  std::size_t k = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    while (k > 0 && text[i] != pattern[k]) k = fail[k - 1];
    if (text[i] == pattern[k]) ++k;
    if (k == pattern.size()) {
      out.push_back(i + 1 - k);
      k = fail[k - 1];
    }
  }
  return out;
}

/// { j mod sigma : pattern occurs at offset j }.
inline std::set<std::size_t> occurrence_positions_mod(const FiniteWord& text,
                                                      const FiniteWord& pattern,
                                                      std::size_t sigma) {
  if (sigma < 1) throw precondition_error("occurrence_positions_mod: sigma must be positive");
  if (pattern.size() > text.size())
    throw precondition_error("occurrence_positions_mod: pattern longer than text");
  std::set<std::size_t> out;
  for (std::size_t j : occurrence_positions(text, pattern)) out.insert(j % sigma);
  return out;
}

struct LambdaStabilization {
  std::size_t stable_from;                      // N
  std::vector<std::set<std::size_t>> residues;  // residues[n - 1] = Lambda(s_1..s_n)
};

/// Lambda(s_1..s_n) = residues mod sigma of the occurrences of image(s_1..s_n)
/// in text, for n = 1..n_max, and the first N after which it no longer changes.
inline LambdaStabilization lambda_stabilization(const FiniteWord& text, const FiniteWord& seed,
                                                const Morphism& image, std::size_t sigma,
                                                std::size_t n_max) {
  if (n_max < 1 || n_max > seed.size())
    throw precondition_error("lambda_stabilization: need 1 <= n_max <= |seed|");
  LambdaStabilization out{n_max, {}};
  for (std::size_t n = 1; n <= n_max; ++n)
    out.residues.push_back(occurrence_positions_mod(text, image.apply(seed.substr(0, n)), sigma));
  while (out.stable_from > 1 && out.residues[out.stable_from - 2] == out.residues.back())
    --out.stable_from;
  return out;
}

// ---------------------------------------------------------------------------
// Unique decoding of morphic images

namespace detail {

struct RollingHash {
  static constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
  static constexpr std::uint64_t kBase = 1000003;

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t r = static_cast<std::uint64_t>(p & kMod) + static_cast<std::uint64_t>(p >> 61);
    return r >= kMod ? r - kMod : r;
  }

  explicit RollingHash(std::span<const Letter> text) : pre(text.size() + 1, 0), pw(text.size() + 1, 1) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      pre[i + 1] = (mul(pre[i], kBase) + text[i] + 1) % kMod;
      pw[i + 1] = mul(pw[i], kBase);
    }
  }
  std::uint64_t window(std::size_t pos, std::size_t len) const {
    return (pre[pos + len] + kMod - mul(pre[pos], pw[len])) % kMod;
  }
  static std::uint64_t of(std::span<const Letter> w) {
    std::uint64_t h = 0;
    for (Letter c : w) h = (mul(h, kBase) + c + 1) % kMod;
    return h;
  }

  std::vector<std::uint64_t> pre, pw;
};

struct Tiling {
  FiniteWord seed;                 // s_1 .. s_c
  FiniteWord text;                 // phi(s_1 .. s_c)
  std::vector<std::int64_t> cut;   // cut[pos] = index of the image starting at pos, or -1
};

inline Tiling tile(const Morphism& phi, const PartialQuotients& pq, std::size_t length) {
  Tiling t{mechanical_word(pq, length / phi.min_image_length() + 1), FiniteWord(phi.target_alphabet()), {}};
  std::size_t used = 0, pos = 0;
  while (used < t.seed.size() && pos + phi.image(t.seed[used]).size() <= length) {
    pos += phi.image(t.seed[used]).size();
    ++used;
  }
  t.seed.truncate(used);
  t.text = phi.apply(t.seed);
  t.cut.assign(t.text.size() + 1, -1);
  pos = 0;
  for (std::size_t i = 0; i < used; ++i) {
    t.cut[pos] = static_cast<std::int64_t>(i);
    pos += phi.image(t.seed[i]).size();
  }
  t.cut[pos] = static_cast<std::int64_t>(used);
  return t;
}

inline bool decoding_holds(const Tiling& t, const Morphism& phi, const RollingHash& text_hash,
                           std::size_t n) {
  if (n > t.seed.size()) return true;
  // Distinct length-n factors A of s and the hashes of phi(A), grouped by |phi(A)|.
  std::unordered_map<std::size_t, std::unordered_map<std::uint64_t, std::vector<FiniteWord>>> by_len;
  std::set<FiniteWord> factors;
  for (std::size_t i = 0; i + n <= t.seed.size(); ++i) factors.insert(t.seed.substr(i, n));
  for (const auto& a : factors) {
    FiniteWord img = phi.apply(a);
    auto& bucket = by_len[img.size()][RollingHash::of(img.letters())];
    bucket.push_back(a);
  }
  const auto letters = t.text.letters();
  for (const auto& [len, table] : by_len) {
    for (std::size_t j = 0; j + len <= t.text.size(); ++j) {
      auto hit = table.find(text_hash.window(j, len));
      if (hit == table.end()) continue;
      for (const auto& a : hit->second) {
        const FiniteWord img = phi.apply(a);
        if (!std::equal(img.begin(), img.end(), letters.begin() + static_cast<std::ptrdiff_t>(j)))
          continue;
        // An occurrence of phi(A) must start and end on image boundaries and
        // decode to A itself.
        const std::int64_t first = t.cut[j], last = t.cut[j + len];
        if (first < 0 || last < 0) return false;
        if (static_cast<std::size_t>(last - first) != n) return false;
        if (!(t.seed.substr(static_cast<std::size_t>(first), n) == a)) return false;
      }
    }
  }
  return true;
}

}  // namespace detail

/// Every occurrence of phi(A), A a length-n factor of the slope-pq
/// characteristic word s, inside the length-L prefix of phi(s) lies exactly
/// on the image tiling and decodes to A.
inline bool unique_decoding_check(const Morphism& phi, const PartialQuotients& pq, std::size_t n,
                                  std::size_t length) {
  if (phi.source_alphabet() != 2)
    throw precondition_error("unique_decoding_check: binary source alphabet required");
  if (!order_distinct(phi))
    throw precondition_error("unique_decoding_check: phi(01) = phi(10)");
  if (n < 1) throw precondition_error("unique_decoding_check: n must be positive");
  const auto t = detail::tile(phi, pq, length);
  const detail::RollingHash h(t.text.letters());
  return detail::decoding_holds(t, phi, h, n);
}

/// Smallest n0 such that the unique-decoding check passes for every n in
/// [n0, n_max]; nullopt if it fails at n_max itself.
inline std::optional<std::size_t> decoding_threshold(const Morphism& phi, const PartialQuotients& pq,
                                                     std::size_t n_max, std::size_t length) {
  if (phi.source_alphabet() != 2 || !order_distinct(phi))
    throw precondition_error("decoding_threshold: order-distinct binary morphism required");
  const auto t = detail::tile(phi, pq, length);
  const detail::RollingHash h(t.text.letters());
  std::optional<std::size_t> n0;
  for (std::size_t n = n_max; n >= 1; --n) {
    if (!detail::decoding_holds(t, phi, h, n)) break;
    n0 = n;
  }
  return n0;
}

}  // namespace sturmkit
