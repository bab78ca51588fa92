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

// Acceptance gate: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "sturmkit/harness.hpp"
#include "test_util.hpp"

namespace {

using namespace sturmkit;
using namespace sturmkit::harness;
using sturmkit::testing::all_words;
using sturmkit::testing::random_word;

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

ExperimentConfig pair_config(std::uint64_t r, std::uint64_t s, std::size_t n_max) {
  ExperimentConfig cfg;
  cfg.r = r;
  cfg.s = s;
  cfg.n_max = n_max;
  return cfg;
}

// Least (m, l) with r^m = s^l, by direct search over exponent pairs.
std::pair<std::uint64_t, std::uint64_t> least_exponents(std::uint64_t r, std::uint64_t s) {
  for (std::uint64_t total = 2; total <= 64; ++total)
    for (std::uint64_t m = 1; m < total; ++m)
      if (big_pow(r, m) == big_pow(s, total - m)) return {m, total - m};
  return {0, 0};
}

const std::pair<std::uint64_t, std::uint64_t> kPairs[] = {{2, 8}, {4, 8}, {2, 4}, {3, 27}, {9, 27}, {4, 32}};

Outcome sturmian_definition() {
  Outcome out;
  const auto t0 = Clock::now();
  for (const auto& slope : standard_slopes(10)) {
    const auto prof = profile(characteristic_word(parse_slope(slope)), 200, ProfileMode::certified);
    for (std::size_t n = 1; n <= 200; ++n)
      out.check(prof.count(n) == n + 1 && prof.entries[n - 1].status == Status::certified,
                slope + " n=" + std::to_string(n) + " p=" + std::to_string(prof.count(n)));
  }
  const double t = seconds_since(t0);
  out.check(t < 30.0, "runtime " + fmt_seconds(t));
  out.detail = out.ok ? "10 slopes, n<=200, " + fmt_seconds(t) : out.detail;
  return out;
}

Outcome dependent_equality() {
  Outcome out;
  std::string summary;
  for (auto [r, s] : kPairs) {
    const auto t0 = Clock::now();
    const auto [m, l] = least_exponents(r, s);
    const std::uint64_t expected = m + l;
    auto cfg = pair_config(r, s, 128);
    cfg.prefix = 100000;
    const Report rep = run_thm2_equality(cfg);
    const double t = seconds_since(t0);
    const std::string tag = std::to_string(r) + "," + std::to_string(s);
    out.check(rep.verdict == Verdict::pass, tag + " verdict");
    if (rep.verdict != Verdict::pass) continue;
    const std::size_t n0 = std::stoul(*rep.get("n0"));
    out.check(n0 <= 64, tag + " n0=" + std::to_string(n0));
    out.check(*rep.get("expected") == std::to_string(expected), tag + " expected");
    std::size_t checked = 0;
    for (const auto& row : rep.rows) {
      if (row[0].get<std::size_t>() < n0) continue;
      ++checked;
      out.check(row[3].get<std::uint64_t>() == expected, tag + " n=" + std::to_string(row[0].get<std::size_t>()));
    }
    out.check(checked == 128 - n0 + 1, tag + " rows");
    out.check(t < 300.0, tag + " runtime " + fmt_seconds(t));
    summary += " (" + tag + "):" + std::to_string(expected) + "@n0=" + std::to_string(n0) + "/" + fmt_seconds(t);
  }
  if (out.ok) out.detail = summary.substr(1);
  return out;
}

Outcome split_inequality() {
  Outcome out;
  std::size_t ge_rows = 0;
  for (auto [r, s] : kPairs) {
    auto cfg = pair_config(r, s, 120);
    cfg.witnesses = 5;
    const Report rep = run_lemma42(cfg);
    const std::string tag = std::to_string(r) + "," + std::to_string(s);
    out.check(rep.verdict == Verdict::pass, tag + " verdict");
    for (const auto& row : rep.rows) {
      if (row[6] != "ge") continue;
      ++ge_rows;
      out.check(row[4].get<std::uint64_t>() >= row[5].get<std::uint64_t>(),
                tag + " " + row[0].get<std::string>() + " n=" + std::to_string(row[2].get<std::size_t>()));
    }
  }
  out.check(ge_rows > 0, "no rows");
  if (out.ok) out.detail = std::to_string(ge_rows) + " (witness, sigma, n) checks, n>=2";
  return out;
}

Outcome quasi_propagation() {
  Outcome out;
  std::size_t rows = 0;
  for (std::uint64_t rho : {4u, 6u}) {
    ExperimentConfig cfg;
    cfg.b = 2;
    cfg.rho = rho;
    cfg.witnesses = 10;
    const Report rep = run_thm3_propagate(cfg);
    out.check(rep.verdict == Verdict::pass, "rho=" + std::to_string(rho) + " verdict");
    for (const auto& row : rep.rows) {
      ++rows;
      out.check(row[7] == "yes", "rho=" + std::to_string(rho) + " " + row[0].get<std::string>());
    }
  }
  if (out.ok) out.detail = "10 witnesses, b=2, rho in {4,6}, " + std::to_string(rows) + " splits";
  return out;
}

Outcome oracle_equivalence() {
  Outcome out;
  std::mt19937_64 rng(20261014);
  std::uniform_int_distribution<std::size_t> length(1, 2000);
  std::uniform_int_distribution<std::uint32_t> alpha(2, 8);
  auto agree = [&](const FiniteWord& u, const std::string& tag) {
    const auto spec = factor_spectrum(u);
    for (std::size_t n = 1; n <= u.size(); ++n)
      if (spec[n] != factor_count_bruteforce(u, n)) {
        out.check(false, tag + " n=" + std::to_string(n));
        return;
      }
  };
  for (int i = 0; i < 500; ++i) {
    const std::uint32_t a = alpha(rng);
    agree(random_word(rng, length(rng), a), "random #" + std::to_string(i));
  }
  const auto corpus = sturmkit::testing::structured_corpus();
  for (const auto& [name, u] : corpus) agree(u, name);
  if (out.ok) out.detail = "500 random words + " + std::to_string(corpus.size()) + " corpus words, every n";
  return out;
}

Outcome power_witnesses() {
  Outcome out;
  const auto t0 = Clock::now();
  std::size_t with_witness = 0, total = 0;
  for (auto [alphabet, top] : {std::pair<std::uint32_t, std::size_t>{2, 14}, {3, 9}})
    for (std::size_t len = 2; len <= top; ++len)
      for (const auto& u : all_words(len, alphabet)) {
        ++total;
        if (lemma2_witnesses(u).empty()) continue;
        ++with_witness;
        out.check(as_power(u).has_value(), to_string(u));
      }
  const double t = seconds_since(t0);
  out.check(t < 60.0, "runtime " + fmt_seconds(t));
  if (out.ok)
    out.detail = std::to_string(total) + " words, " + std::to_string(with_witness) + " with witness, " + fmt_seconds(t);
  return out;
}

Outcome residue_sweep() {
  Outcome out;
  const Report rep = run_lemma4_sweep(10, standard_slopes(20), 64);
  out.check(rep.verdict == Verdict::pass, rep.notes.empty() ? "verdict" : rep.notes.front());
  out.check(rep.rows.size() == 20 * 9, "row count");
  for (const auto& row : rep.rows) out.check(row[3] == "yes", row[0].get<std::string>());
  if (out.ok) out.detail = "d<=10, 20 slopes, k<64";
  return out;
}

Outcome unique_decoding() {
  Outcome out;
  const char* morphisms[] = {"0 -> 0\n1 -> 11\n", "0 -> 01\n1 -> 10\n", "0 -> 00\n1 -> 1\n",
                             "0 -> 001\n1 -> 11\n", "0 -> 010\n1 -> 11\n"};
  const std::size_t L = 10000;
  std::size_t worst = 0;
  for (const char* text : morphisms) {
    const Morphism phi = parse_morphism(text, 2);
    out.check(order_distinct(phi), text);
    for (const char* slope : {"1,(1)", "2,(1)", "1,2,(3)"}) {
      const auto pq = parse_slope(slope);
      const auto n0 = decoding_threshold(phi, pq, 150, L);
      out.check(n0.has_value() && *n0 <= 100, std::string(slope) + " no n0 <= 100");
      if (!n0 || *n0 > 100) continue;
      worst = std::max(worst, *n0);
      for (std::size_t n = *n0; n <= *n0 + 50; ++n)
        out.check(unique_decoding_check(phi, pq, n, L), std::string(slope) + " n=" + std::to_string(n));
    }
  }
  if (out.ok) out.detail = "5 morphisms x 3 slopes, max n0=" + std::to_string(worst);
  return out;
}

Outcome corollary_witness() {
  Outcome out;
  std::string summary;
  for (std::uint64_t s : {3u, 4u, 8u}) {
    const Report rep = run_corollary_negative(pair_config(2, s, 64));
    const std::string* w = rep.get("witness");
    out.check(rep.verdict == Verdict::pass && w && std::stoul(*w) <= 64, "s=" + std::to_string(s));
    if (w) summary += " s=" + std::to_string(s) + ":n=" + *w;
  }
  if (out.ok) out.detail = summary.substr(1);
  return out;
}

std::string serialize(std::uint32_t base, const FiniteWord& digits) {
  std::ostringstream os;
  write_digit_stream(os, base, 0, digits);
  return os.str();
}

Outcome base_change_exactness() {
  Outcome out;
  std::mt19937_64 rng(7);
  const std::size_t N = 10000;
  std::size_t trips = 0;
  for (auto [b, rho, sigma] : {std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>{2, 3, 1},
                               {2, 6, 2}, {2, 6, 3}, {3, 4, 2}, {2, 12, 4}, {5, 2, 1}}) {
    const std::uint32_t big = power_base(b, rho);
    const std::uint64_t d = rho / sigma;
    const FiniteWord original = random_word(rng, N, big);
    const auto source = eventually_periodic(original, FiniteWord({0}, big));
    const auto split = split_source(b, rho, sigma, source);
    const auto back = regroup(b, sigma, d, split).prefix(N);
    const std::string text = serialize(big, original);
    out.check(serialize(big, back) == text, "round trip b=" + std::to_string(b));
    std::istringstream in(text);
    const auto parsed = read_digit_stream(in);
    out.check(serialize(parsed.base, parsed.digits) == text, "stream text b=" + std::to_string(b));
    ++trips;
  }

  // Rationals: the window at every horizon brackets the exact value.
  for (auto [num, den, base] : {std::tuple<int, int, std::uint64_t>{1, 3, 2}, {1, 7, 10}, {1, 2, 2}, {5, 96, 8},
                                {22, 7, 3}, {-3, 11, 6}}) {
    const auto e = rational_expansion(num, den, base);
    const Rational value{BigInt(num), BigInt(den)};
    for (std::size_t h = 1; h <= 300; ++h) {
      const auto win = value_window(e, h);
      out.check(win.low <= value && value < win.high, std::to_string(num) + "/" + std::to_string(den) + " h=" +
                                                          std::to_string(h));
    }
  }
  // Irrational seeds: windows nest, and split expansions overlap at matched horizons.
  for (const char* slope : {"1,(1)", "2,(1)", "random:4:9"}) {
    const auto xi = word_to_xi(characteristic_word(parse_slope(slope)), 2, 6);
    const auto in_four = split_expansion(xi, 2, 6, 2);
    for (std::size_t h = 1; h <= 400; ++h) {
      const auto w = value_window(xi, h), next = value_window(xi, h + 1);
      out.check(w.low <= next.low && next.high <= w.high, std::string(slope) + " nest h=" + std::to_string(h));
      const auto w4 = value_window(in_four, 3 * h);
      out.check(w4.low == w.low && w4.high == w.high, std::string(slope) + " split h=" + std::to_string(h));
    }
  }

  // Hand values.
  auto digits = [](const DigitExpansion& e, std::size_t n) { return e.digits.prefix(n); };
  out.check(digits(rational_expansion(1, 3, 2), 6) == FiniteWord({0, 1, 0, 1, 0, 1}, 2), "1/3 base 2");
  out.check(digits(rational_expansion(1, 2, 2), 6) == FiniteWord({1, 0, 0, 0, 0, 0}, 2), "1/2 base 2");
  out.check(digits(rational_expansion(1, 7, 10), 12) == FiniteWord({1, 4, 2, 8, 5, 7, 1, 4, 2, 8, 5, 7}, 10),
            "1/7 base 10");
  out.check(rebase_certified(rational_expansion(1, 3, 2), 10, 4) == FiniteWord({3, 3, 3, 3}, 10), "1/3 to base 10");
  out.check(rebase_certified(rational_expansion(1, 2, 2), 3, 3) == FiniteWord({1, 1, 1}, 3), "1/2 to base 3");
  const auto half = value_window(rational_expansion(1, 2, 2), 1);
  out.check(half.low == Rational(1, 2) && half.high == Rational(1), "window 1/2");
  const auto third = value_window(rational_expansion(1, 3, 2), 4);
  out.check(third.low == Rational(5, 16) && third.high == Rational(6, 16), "window 1/3");
  if (out.ok) out.detail = std::to_string(trips) + " round trips of 10^4 digits, windows, hand values";
  return out;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"sturmian definition", sturmian_definition},
      {"dependent-base equality", dependent_equality},
      {"split-base inequality", split_inequality},
      {"quasi-Sturmian propagation", quasi_propagation},
      {"oracle equivalence", oracle_equivalence},
      {"power lemma", power_witnesses},
      {"convergent residues", residue_sweep},
      {"unique decoding", unique_decoding},
      {"corollary witness", corollary_witness},
      {"base-change exactness", base_change_exactness},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.ok ? 0 : 1;
    std::cout << (o.ok ? "PASS" : "FAIL") << ' ' << index << ' ' << name << ": " << o.detail << std::endl;
  }

  // The probe is informational: its sum must stay at least 2 in the window.
  try {
    auto cfg = pair_config(2, 3, 24);
    const Report rep = run_independent_probe(cfg);
    std::cout << "NOTE probe r=2 s=3: verdict=" << to_string(rep.verdict)
              << " trend=" << (rep.get("trend") ? *rep.get("trend") : "?")
              << " last_sum_minus_2n=" << (rep.get("last_sum_minus_2n") ? *rep.get("last_sum_minus_2n") : "?")
              << " saturated_from=" << (rep.get("saturated_from") ? *rep.get("saturated_from") : "none")
              << std::endl;
    if (rep.verdict == Verdict::fail) ++failures;
  } catch (const std::exception& e) {
    std::cout << "NOTE probe: " << e.what() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
