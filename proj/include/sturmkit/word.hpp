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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sturmkit {

/// Raised when an operation is called outside its domain.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Letter = std::uint32_t;

/// Largest admissible alphabet size (letters are < 2^31).
inline constexpr std::uint64_t kMaxAlphabet = std::uint64_t{1} << 31;

inline std::uint32_t checked_alphabet(std::uint64_t size) {
  if (size < 2 || size > kMaxAlphabet)
    throw precondition_error("alphabet size must lie in [2, 2^31], got " +
                             std::to_string(size));
  return static_cast<std::uint32_t>(size);
}

/// A finite word over {0, ..., alphabet_size - 1}.
class FiniteWord {
 public:
  FiniteWord() = default;
  explicit FiniteWord(std::uint64_t alphabet) : alphabet_(checked_alphabet(alphabet)) {}
  FiniteWord(std::vector<Letter> letters, std::uint64_t alphabet)
      : letters_(std::move(letters)), alphabet_(checked_alphabet(alphabet)) {
    for (Letter c : letters_)
      if (c >= alphabet_)
        throw precondition_error("letter " + std::to_string(c) +
                                 " outside alphabet of size " + std::to_string(alphabet_));
  }

  std::uint32_t alphabet_size() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  std::span<const Letter> letters() const noexcept { return letters_; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  void push_back(Letter c) {
    if (c >= alphabet_)
      throw precondition_error("letter " + std::to_string(c) + " outside alphabet");
    letters_.push_back(c);
  }
  void append(const FiniteWord& w) {
    if (w.alphabet_ > alphabet_)
      for (Letter c : w.letters_)
        if (c >= alphabet_) throw precondition_error("letter outside alphabet in append");
    letters_.insert(letters_.end(), w.letters_.begin(), w.letters_.end());
  }
  void reserve(std::size_t n) { letters_.reserve(n); }
  void truncate(std::size_t n) {
    if (n < letters_.size()) letters_.resize(n);
  }

  FiniteWord substr(std::size_t pos, std::size_t len) const {
    if (pos > size()) throw precondition_error("substr start out of range");
    len = std::min(len, size() - pos);
    FiniteWord out(alphabet_);
    out.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                        letters_.begin() + static_cast<std::ptrdiff_t>(pos + len));
    return out;
  }

  /// Same letters, viewed over a (possibly larger) alphabet.
  FiniteWord relabeled(std::uint64_t alphabet) const {
    return FiniteWord(letters_, alphabet);
  }

  std::size_t count(Letter c) const {
    return static_cast<std::size_t>(std::count(letters_.begin(), letters_.end(), c));
  }

  friend bool operator==(const FiniteWord& a, const FiniteWord& b) {
    return a.letters_ == b.letters_;
  }
  friend bool operator<(const FiniteWord& a, const FiniteWord& b) {
    return a.letters_ < b.letters_;
  }
  friend FiniteWord operator+(FiniteWord a, const FiniteWord& b) {
    if (b.alphabet_ > a.alphabet_) a.alphabet_ = b.alphabet_;
    a.letters_.insert(a.letters_.end(), b.letters_.begin(), b.letters_.end());
    return a;
  }

 private:
  std::vector<Letter> letters_;
  std::uint32_t alphabet_ = 2;
};

inline FiniteWord power(const FiniteWord& w, std::size_t t) {
  FiniteWord out(w.alphabet_size());
  out.reserve(w.size() * t);
  for (std::size_t i = 0; i < t; ++i) out.append(w);
  return out;
}

// Text form: plain digit strings for alphabets of size <= 10, otherwise
// decimal letter values joined by '.'.

inline std::string to_string(const FiniteWord& w) {
  std::string out;
  if (w.alphabet_size() <= 10) {
    out.reserve(w.size());
    for (Letter c : w) out.push_back(static_cast<char>('0' + c));
    return out;
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(w[i]);
  }
  return out;
}

inline FiniteWord parse_word(std::string_view text, std::uint64_t alphabet) {
  FiniteWord w(alphabet);
  if (text.empty()) return w;
  if (alphabet <= 10) {
    for (char ch : text) {
      if (ch < '0' || ch > '9') throw precondition_error("bad letter in word text");
      w.push_back(static_cast<Letter>(ch - '0'));
    }
    return w;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    if (dot == std::string_view::npos) dot = text.size();
    std::string_view tok = text.substr(start, dot - start);
    if (tok.empty()) throw precondition_error("empty letter in word text");
    std::uint64_t v = 0;
    for (char ch : tok) {
      if (ch < '0' || ch > '9') throw precondition_error("bad letter in word text");
      v = v * 10 + static_cast<std::uint64_t>(ch - '0');
      if (v >= alphabet) throw precondition_error("letter outside alphabet in word text");
    }
    w.push_back(static_cast<Letter>(v));
    start = dot + 1;
  }
  return w;
}

/// Sufficient prefix length: every factor of length n of the infinite word
/// occurs in its prefix of the returned length.
using RecurrenceBound = std::function<std::size_t(std::size_t n)>;

/// Restartable, deterministic producer of an infinite word.
class InfiniteWordSource {
 public:
  using PrefixFn = std::function<FiniteWord(std::size_t)>;

  InfiniteWordSource(std::string id, std::uint64_t alphabet, PrefixFn fn,
                     std::optional<RecurrenceBound> bound = std::nullopt)
      : id_(std::move(id)),
        alphabet_(checked_alphabet(alphabet)),
        fn_(std::make_shared<const PrefixFn>(std::move(fn))),
        bound_(std::move(bound)) {}

  const std::string& id() const noexcept { return id_; }
  std::uint32_t alphabet_size() const noexcept { return alphabet_; }
  bool has_certificate() const noexcept { return bound_.has_value(); }
  const std::optional<RecurrenceBound>& certificate() const noexcept { return bound_; }

  FiniteWord prefix(std::size_t length) const {
    FiniteWord w = (*fn_)(length);
    if (w.size() < length) throw std::logic_error("source '" + id_ + "' produced a short prefix");
    w.truncate(length);
    return w.relabeled(alphabet_);
  }

  InfiniteWordSource renamed(std::string id) const {
    InfiniteWordSource s = *this;
    s.id_ = std::move(id);
    return s;
  }

  /// Same letters over a larger alphabet.
  InfiniteWordSource widened(std::uint64_t alphabet) const {
    if (alphabet < alphabet_) throw precondition_error("cannot narrow a source alphabet");
    InfiniteWordSource s = *this;
    s.alphabet_ = checked_alphabet(alphabet);
    return s;
  }

 private:
  std::string id_;
  std::uint32_t alphabet_;
  std::shared_ptr<const PrefixFn> fn_;
  std::optional<RecurrenceBound> bound_;
};

inline FiniteWord prefix(const InfiniteWordSource& source, std::size_t length) {
  return source.prefix(length);
}

/// u v v v ...
inline InfiniteWordSource eventually_periodic(FiniteWord head, FiniteWord period,
                                              std::string id = "periodic") {
  if (period.empty()) throw precondition_error("period must be nonempty");
  const std::uint32_t alphabet = std::max(head.alphabet_size(), period.alphabet_size());
  const std::size_t t = head.size(), p = period.size();
  RecurrenceBound bound = [t, p](std::size_t n) { return t + p + (n ? n - 1 : 0); };
  return InfiniteWordSource(
      std::move(id), alphabet,
      [head = std::move(head), period = std::move(period), alphabet](std::size_t length) {
        FiniteWord w(alphabet);
        w.reserve(length);
        for (std::size_t i = 0; i < length; ++i)
          w.push_back(i < head.size() ? head[i] : period[(i - head.size()) % period.size()]);
        return w;
      },
      std::move(bound));
}

inline InfiniteWordSource constant_source(Letter c, std::uint64_t alphabet) {
  return eventually_periodic(FiniteWord(alphabet), FiniteWord({c}, alphabet),
                             "constant-" + std::to_string(c));
}

/// W x for a finite word W.
inline InfiniteWordSource prepend(const FiniteWord& head, const InfiniteWordSource& tail) {
  const std::uint32_t alphabet = std::max(head.alphabet_size(), tail.alphabet_size());
  std::optional<RecurrenceBound> bound;
  if (tail.certificate()) {
    bound = [h = head.size(), inner = *tail.certificate()](std::size_t n) {
      return h + std::max(inner(n), n);
    };
  }
  return InfiniteWordSource(
      to_string(head) + "|" + tail.id(), alphabet,
      [head, tail, alphabet](std::size_t length) {
        FiniteWord w = head.relabeled(alphabet);
        if (length > head.size()) w.append(tail.prefix(length - head.size()));
        w.truncate(length);
        return w;
      },
      std::move(bound));
}

/// x with its first k letters removed; recurrence bounds carry over.
inline InfiniteWordSource drop_prefix(const InfiniteWordSource& source, std::size_t k) {
  std::optional<RecurrenceBound> bound;
  if (source.certificate()) bound = *source.certificate();
  return InfiniteWordSource(
      source.id() + ">>" + std::to_string(k), source.alphabet_size(),
      [source, k](std::size_t length) {
        return source.prefix(length + k).substr(k, length);
      },
      std::move(bound));
}

// ---------------------------------------------------------------------------
// Periodicity primitives

/// Border array: fail[i] is the length of the longest proper border of w[0..i].
inline std::vector<std::size_t> border_table(std::span<const Letter> w) {
  std::vector<std::size_t> fail(w.size(), 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    while (k > 0 && w[i] != w[k]) k = fail[k - 1];
    if (w[i] == w[k]) ++k;
    fail[i] = k;
  }
  return fail;
}

/// Smallest p >= 1 with U[i] = U[i+p] wherever both sides exist.
inline std::size_t shortest_repetition_period(const FiniteWord& u) {
  if (u.empty()) throw precondition_error("shortest_repetition_period: empty word");
  return u.size() - border_table(u.letters()).back();
}

struct PowerDecomposition {
  FiniteWord root;
  std::size_t exponent;
};

/// U = W^t with t >= 2 and |W| minimal, if such a decomposition exists.
inline std::optional<PowerDecomposition> as_power(const FiniteWord& u) {
  if (u.empty()) throw precondition_error("as_power: empty word");
  const std::size_t p = shortest_repetition_period(u);
  if (u.size() % p != 0 || p > u.size() / 2) return std::nullopt;
  return PowerDecomposition{u.substr(0, p), u.size() / p};
}

/// The primitive root of a nonempty word.
inline FiniteWord primitive_root(const FiniteWord& u) {
  if (auto pw = as_power(u)) return pw->root;
  return u;
}

/// U with X = U^s and Y = U^t, present exactly when XY = YX.
inline std::optional<FiniteWord> commuting_root(const FiniteWord& x, const FiniteWord& y) {
  if (x.empty() || y.empty()) throw precondition_error("commuting_root: empty word");
  if (!(x + y == y + x)) return std::nullopt;
  return primitive_root(x);
}

struct Lemma2Witness {
  FiniteWord u1, u2, v, w;
};

/// Every split U = U1 U2 and 0 < |V| < |U|, |U1| != |V|, with U U = V U2 U1 W.
/// Exhaustive O(|U|^3) search.
inline std::vector<Lemma2Witness> lemma2_witnesses(const FiniteWord& u) {
  if (u.size() < 2) throw precondition_error("lemma2_witnesses: need |U| >= 2");
  const std::size_t n = u.size();
  const FiniteWord uu = u + u;
  std::vector<Lemma2Witness> out;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t v = 1; v < n; ++v) {
      if (v == i) continue;
      // U2 U1 sits at offset v of UU: compare UU[v + j] with U[(i + j) mod n].
      bool match = true;
      for (std::size_t j = 0; j < n && match; ++j) match = uu[v + j] == u[(i + j) % n];
      if (!match) continue;
      out.push_back({u.substr(0, i), u.substr(i, n - i), u.substr(0, v), u.substr(v, n - v)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Morphisms

/// Nonerasing morphism from {0..source-1}^* into {0..target-1}^*.
class Morphism {
 public:
  Morphism(std::vector<FiniteWord> images, std::uint64_t target_alphabet)
      : target_(checked_alphabet(target_alphabet)) {
    checked_alphabet(images.size());
    images_.reserve(images.size());
    for (auto& im : images) {
      if (im.empty()) throw precondition_error("erasing morphisms are not supported");
      images_.push_back(im.relabeled(target_));
    }
    min_len_ = max_len_ = images_.front().size();
    for (const auto& im : images_) {
      min_len_ = std::min(min_len_, im.size());
      max_len_ = std::max(max_len_, im.size());
    }
  }

  static Morphism identity(std::uint64_t alphabet) {
    std::vector<FiniteWord> images;
    for (std::uint64_t a = 0; a < alphabet; ++a)
      images.emplace_back(std::vector<Letter>{static_cast<Letter>(a)}, alphabet);
    return Morphism(std::move(images), alphabet);
  }

  std::uint32_t source_alphabet() const noexcept {
    return static_cast<std::uint32_t>(images_.size());
  }
  std::uint32_t target_alphabet() const noexcept { return target_; }
  std::size_t min_image_length() const noexcept { return min_len_; }
  std::size_t max_image_length() const noexcept { return max_len_; }
  bool is_uniform() const noexcept { return min_len_ == max_len_; }

  const FiniteWord& image(Letter a) const {
    if (a >= images_.size())
      throw precondition_error("letter " + std::to_string(a) + " outside morphism domain");
    return images_[a];
  }

  FiniteWord apply(const FiniteWord& w) const {
    FiniteWord out(target_);
    out.reserve(w.size() * max_len_);
    for (Letter c : w) out.append(image(c));
    return out;
  }

  /// Lazy image of a stream. A recurrence bound on the input yields one on
  /// the output: a window of length n covers at most (n-1)/min + 2 images.
  InfiniteWordSource apply(const InfiniteWordSource& source) const {
    // Sources may declare a wider alphabet than the letters they use, so
    // letters are validated lazily by image().
    std::optional<RecurrenceBound> bound;
    if (source.certificate()) {
      bound = [inner = *source.certificate(), lo = min_len_, hi = max_len_](std::size_t n) {
        const std::size_t covering = (n == 0 ? 0 : (n - 1) / lo) + 2;
        return hi * inner(covering);
      };
    }
    auto self = *this;
    return InfiniteWordSource(
        "phi(" + source.id() + ")", target_,
        [self, source](std::size_t length) {
          const std::size_t need = (length + self.min_len_ - 1) / self.min_len_;
          FiniteWord out = self.apply(source.prefix(need));
          out.truncate(length);
          return out;
        },
        std::move(bound));
  }

  friend bool operator==(const Morphism& a, const Morphism& b) {
    return a.target_ == b.target_ && a.images_ == b.images_;
  }

 private:
  std::vector<FiniteWord> images_;
  std::uint32_t target_;
  std::size_t min_len_ = 1, max_len_ = 1;
};

inline FiniteWord apply(const Morphism& phi, const FiniteWord& w) { return phi.apply(w); }
inline InfiniteWordSource apply(const Morphism& phi, const InfiniteWordSource& s) {
  return phi.apply(s);
}

/// (phi o psi)(a) = phi(psi(a)).
inline Morphism compose(const Morphism& phi, const Morphism& psi) {
  if (psi.target_alphabet() != phi.source_alphabet())
    throw precondition_error("compose: target alphabet of psi (" +
                             std::to_string(psi.target_alphabet()) +
                             ") differs from source alphabet of phi (" +
                             std::to_string(phi.source_alphabet()) + ")");
  std::vector<FiniteWord> images;
  images.reserve(psi.source_alphabet());
  for (Letter a = 0; a < psi.source_alphabet(); ++a) images.push_back(phi.apply(psi.image(a)));
  return Morphism(std::move(images), phi.target_alphabet());
}

/// phi(01) != phi(10) for a morphism on {0, 1}.
inline bool order_distinct(const Morphism& phi) {
  if (phi.source_alphabet() != 2)
    throw precondition_error("order_distinct: source alphabet must be binary");
  return !(phi.image(0) + phi.image(1) == phi.image(1) + phi.image(0));
}

/// One "letter -> image" line per source letter.
inline std::string to_text(const Morphism& phi) {
  std::ostringstream os;
  for (Letter a = 0; a < phi.source_alphabet(); ++a)
    os << a << " -> " << to_string(phi.image(a)) << '\n';
  return os.str();
}

inline Morphism parse_morphism(std::string_view text, std::uint64_t target_alphabet) {
  std::vector<std::optional<FiniteWord>> images;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto arrow = line.find("->");
    if (arrow == std::string::npos) throw precondition_error("morphism line without '->'");
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string lhs = trim(line.substr(0, arrow));
    const std::string rhs = trim(line.substr(arrow + 2));
    if (lhs.empty() || lhs.find_first_not_of("0123456789") != std::string::npos)
      throw precondition_error("bad source letter in morphism text");
    const std::size_t a = std::stoul(lhs);
    if (a >= images.size()) images.resize(a + 1);
    if (images[a]) throw precondition_error("duplicate image for letter " + lhs);
    images[a] = parse_word(rhs, target_alphabet);
  }
  std::vector<FiniteWord> out;
  for (std::size_t a = 0; a < images.size(); ++a) {
    if (!images[a]) throw precondition_error("missing image for letter " + std::to_string(a));
    out.push_back(*images[a]);
  }
  if (out.size() < 2) throw precondition_error("morphism needs at least two source letters");
  return Morphism(std::move(out), target_alphabet);
}

}  // namespace sturmkit
